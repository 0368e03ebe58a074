"""Built-in corpus of example maps with their expected metadata."""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import NotAPoint, ParseError
from .ratmap import RationalMap, parse_map
from .ratmap.parse import parse_polynomial


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    expression: str
    degree: int
    as_n: int
    degrees: Tuple[int, ...]
    as_verdict: str
    witness: Optional[int]
    indeterminacy: Tuple[str, ...]
    dominant: bool
    oracle: Optional[str] = None

    def load(self) -> RationalMap:
        return parse_map(self.expression)

    def indeterminacy_vectors(self) -> List[np.ndarray]:
        return [parse_point(t) for t in self.indeterminacy]


def parse_point(text: str) -> np.ndarray:
    """Unit vector for ``"[a:b:c]"`` with exact or decimal Gaussian coordinates."""
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ParseError(f"point must look like [a:b:c], got {text!r}")
    parts = body[1:-1].split(":")
    if len(parts) != 3:
        raise ParseError(f"point needs three coordinates, got {text!r}")
    vals = []
    for p in parts:
        poly = parse_polynomial(p)
        if poly.is_zero():
            vals.append(0j)
        elif poly.degree != 0:
            raise ParseError(f"coordinate {p!r} is not a constant")
        else:
            vals.append(complex(poly.coeff((0, 0, 0))))
    v = np.array(vals)
    if not np.any(v):
        raise NotAPoint(f"{text!r} has all coordinates zero")
    return v / np.linalg.norm(v)


def _entry(name: str, sec) -> CorpusEntry:
    verdict, *rest = sec["as"].split()
    ind = sec.get("indeterminacy", "none").strip()
    return CorpusEntry(
        name=name,
        expression=sec["expression"],
        degree=int(sec["degree"]),
        as_n=int(sec["as_n"]),
        degrees=tuple(int(t) for t in sec["degrees"].split()),
        as_verdict=verdict,
        witness=int(rest[0]) if rest else None,
        indeterminacy=() if ind == "none" else tuple(ind.split()),
        dominant=sec.getboolean("dominant", True),
        oracle=sec.get("oracle"),
    )


def read_corpus(text: str) -> Dict[str, CorpusEntry]:
    cp = configparser.ConfigParser(interpolation=None)
    cp.read_string(text)
    return {name: _entry(name, cp[name]) for name in cp.sections()}


@lru_cache(maxsize=1)
def builtin() -> Dict[str, CorpusEntry]:
    text = resources.files("p2dyn").joinpath("data/corpus.txt").read_text()
    return read_corpus(text)


def get(name: str) -> CorpusEntry:
    entries = builtin()
    if name not in entries:
        raise KeyError(f"unknown corpus entry {name!r}; known: {', '.join(sorted(entries))}")
    return entries[name]


def names() -> List[str]:
    return list(builtin())
