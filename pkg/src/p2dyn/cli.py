"""Command line front end.

Subcommands: analyze, green, classify, compare, probe, corpus.  Reports go to
``--out`` (default ``out``); failures print a JSON error record on stderr and
exit with the code attached to the error class.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import corpus, report
from .errors import IO_EXIT_CODE, USAGE_EXIT_CODE, BudgetExceeded, ConfigError, NotAS, P2DynError, ParseError, UsageError
from .fatou import (
    ClassifierParams, ProbeParams, classifier_compare, connectivity_check, dichotomy_check,
    fatou_raster, green_verdicts, write_ppm,
)
from .green import laplacian_mask, v_field, write_field, write_grid, write_mask, write_pgm
from .projgeom import Slice, normalize_point
from .ratmap import (
    DEFAULT_DEGREE_BUDGET, DEFAULT_EPS_IND, RationalMap, as_test, orbit_pointwise, parse_map, regularity_probe,
)

MAX_PIXELS = 1024 * 1024


# options -------------------------------------------------------------------


def _window(text: str):
    try:
        vals = tuple(float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be four numbers, got {text!r}") from None
    if len(vals) != 4 or vals[0] >= vals[1] or vals[2] >= vals[3]:
        raise argparse.ArgumentTypeError(f"window must be umin,umax,vmin,vmax with min < max, got {text!r}")
    return vals


def _resolution(text: str):
    parts = text.lower().split("x")
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"resolution must be N or NXxNY, got {text!r}") from None
    if len(vals) == 1:
        vals = vals * 2
    if len(vals) != 2 or min(vals) < 1:
        raise argparse.ArgumentTypeError(f"resolution must be positive, got {text!r}")
    return tuple(vals)


def _bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "yes", "true", "on"):
        return True
    if t in ("0", "no", "false", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


# dest -> (converter, default, help); shared by argparse and the config file
OPTIONS: Dict[str, tuple] = {
    "map": (str, None, "map expression '[P0 : P1 : P2]'"),
    "corpus": (str, None, "name of a built-in corpus map"),
    "out": (str, "out", "output directory"),
    "workers": (int, 1, "worker threads for pixel work (never changes outputs)"),
    "eps_ind": (float, DEFAULT_EPS_IND, "indeterminacy threshold on unit vectors"),
    "budget": (int, DEFAULT_DEGREE_BUDGET, "maximum degree of symbolic iterates"),
    "max_pixels": (int, MAX_PIXELS, "largest allowed raster size"),
    "chart": (str, "z", "affine chart x, y or z"),
    "window": (_window, (-2.0, 2.0, -2.0, 2.0), "umin,umax,vmin,vmax"),
    "res": (_resolution, (64, 64), "raster size N or NXxNY"),
    "n": (int, None, "iteration depth (command specific default)"),
    "tau": (float, 0.5, "Laplacian mask threshold"),
    "n_green": (int, 20, "depth of the Green potential in compare"),
    "m_ring": (int, 8, "perturbation ring size"),
    "r0": (float, 1e-3, "ring radius (FS radians) for point verdicts"),
    "delta_stab": (float, 0.05, "stability diameter (FS radians)"),
    "delta_blow": (float, 0.5, "blow-up diameter (FS radians)"),
    "footprint": (_bool, True, "raster rings follow the pixel footprint"),
    "point": (str, None, "point '[a:b:c]' for probe"),
    "radius": (float, 1e-3, "probe ball radius (FS radians)"),
    "delta": (float, 0.3, "probe distance to the indeterminacy set"),
    "samples": (int, 32, "probe samples"),
    "dichotomy": (_bool, False, "run the per-component dichotomy statistic"),
    "seed": (int, 0, "random seed for sampling"),
    "iterates": (_bool, True, "include reduced iterate polynomials in analyze"),
}

DEFAULT_N = {"analyze": 6, "green": 20, "classify": 30, "compare": 30, "probe": 30}

COMMAND_OPTIONS = {
    "analyze": ["n", "budget", "iterates"],
    "green": ["n", "chart", "window", "res", "tau", "max_pixels"],
    "classify": ["n", "chart", "window", "res", "m_ring", "r0", "delta_stab", "delta_blow",
                 "footprint", "tau", "max_pixels"],
    "compare": ["n", "chart", "window", "res", "m_ring", "r0", "delta_stab", "delta_blow",
                "footprint", "tau", "n_green", "max_pixels", "seed"],
    "probe": ["n", "point", "radius", "delta", "samples", "seed", "dichotomy", "chart", "window", "res",
              "m_ring", "r0", "delta_stab", "delta_blow", "footprint", "max_pixels"],
}
COMMON = ["map", "corpus", "out", "workers", "eps_ind", "config"]


def _flag(dest: str) -> str:
    return "--" + dest.replace("_", "-")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="p2dyn", description="Dynamics of rational self-maps of P^2.")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, opts in COMMAND_OPTIONS.items():
        p = sub.add_parser(cmd, help=f"{cmd} a map")
        p.add_argument("--config", default=None, help="INI file whose values override flags")
        for dest in COMMON[:-1] + opts:
            conv, default, text = OPTIONS[dest]
            # None marks "not given" so config and defaults can be layered
            p.add_argument(_flag(dest), dest=dest, type=conv, default=None,
                           help=f"{text} (default: {default if dest != 'n' else DEFAULT_N[cmd]})")
    c = sub.add_parser("corpus", help="list or show built-in maps")
    c.add_argument("action", choices=["list", "show"])
    c.add_argument("name", nargs="?")
    return parser


@dataclass
class RunConfig:
    command: str
    values: Dict[str, object] = field(default_factory=dict)

    def __getattr__(self, item):
        try:
            return self.values[item]
        except KeyError:
            raise AttributeError(item) from None

    def validate(self):
        for key in ("eps_ind", "tau", "r0", "delta_stab", "delta_blow", "radius", "delta"):
            if key in self.values and not self.values[key] > 0:
                raise ConfigError(f"{key} must be positive")
        for key in ("workers", "budget", "m_ring", "samples", "n_green"):
            if key in self.values and self.values[key] < 1:
                raise ConfigError(f"{key} must be at least 1")
        if self.values.get("n", 0) < 0:
            raise ConfigError("n must be non-negative")
        if self.command == "analyze" and self.values["n"] < 1:
            raise ConfigError("analyze needs n >= 1")
        if "res" in self.values:
            nx, ny = self.values["res"]
            if nx * ny > self.values["max_pixels"]:
                raise ConfigError(f"resolution {nx}x{ny} exceeds max_pixels {self.values['max_pixels']}")
        if self.values.get("chart") not in (None, "x", "y", "z"):
            raise ConfigError("chart must be x, y or z")
        if self.values.get("map") and self.values.get("corpus"):
            raise UsageError("give either --map or --corpus, not both")
        if not self.values.get("map") and not self.values.get("corpus"):
            raise UsageError("a map is required: --map EXPR or --corpus NAME")


def _read_config(path: str, command: str) -> Dict[str, object]:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            text = fh.read()
        first = next((ln.strip() for ln in text.splitlines() if ln.strip() and ln.strip()[0] not in "#;"), "")
        if not first.startswith("["):
            text = "[common]\n" + text  # bare key = value lines
        cp.read_string(text, source=path)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None
    allowed = set(COMMON[:-1]) | set(COMMAND_OPTIONS[command])
    out = {}
    for section in ("common", "map", "slice", "output", command):
        if not cp.has_section(section):
            continue
        for key, raw in cp.items(section):
            dest = key.replace("-", "_")
            if dest not in OPTIONS:
                raise ConfigError(f"{path}: unknown key {key!r} in [{section}]")
            if dest not in allowed:
                continue
            try:
                out[dest] = OPTIONS[dest][0](raw)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise ConfigError(f"{path}: bad value for {key}: {exc}") from None
    return out


def make_config(ns: argparse.Namespace) -> RunConfig:
    cmd = ns.command
    values = {}
    for dest in COMMON[:-1] + COMMAND_OPTIONS[cmd]:
        default = DEFAULT_N[cmd] if dest == "n" else OPTIONS[dest][1]
        given = getattr(ns, dest, None)
        values[dest] = default if given is None else given
    if ns.config:
        values.update(_read_config(ns.config, cmd))
    cfg = RunConfig(cmd, values)
    cfg.validate()
    return cfg


# commands ------------------------------------------------------------------


def load_map(cfg: RunConfig) -> RationalMap:
    if cfg.corpus:
        try:
            entry = corpus.get(cfg.corpus)
        except KeyError as exc:
            raise ConfigError(str(exc.args[0])) from None
        return parse_map(entry.expression, eps_ind=cfg.eps_ind)
    return parse_map(cfg.map, eps_ind=cfg.eps_ind)


def _slice(cfg: RunConfig) -> Slice:
    return Slice.chart_slice(cfg.chart, cfg.window, cfg.res)


def _params(cfg: RunConfig) -> ClassifierParams:
    try:
        return ClassifierParams(N=cfg.n, m_ring=cfg.m_ring, r0=cfg.r0, delta_stab=cfg.delta_stab,
                                delta_blow=cfg.delta_blow, footprint=cfg.footprint)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _map_block(f: RationalMap, cfg: RunConfig) -> dict:
    return {
        "source": cfg.corpus or cfg.map,
        "reduced": f.to_text(),
        "cofactor": f.cofactor.to_text(),
        "degree": f.degree,
        "dominant": f.dominant,
        "notices": f.notices,
    }


def _ind_block(f: RationalMap) -> List[dict]:
    return [{"point": p.to_text(), "residual": p.residual, "exact": p.exact, "certified": p.certified}
            for p in f.indeterminacy]


def _path(cfg: RunConfig, name: str) -> str:
    return os.path.join(cfg.out, name)


def cmd_analyze(cfg: RunConfig, out: List[str]) -> dict:
    f = load_map(cfg)
    try:
        rep = as_test(f, cfg.n, cfg.budget)
    except BudgetExceeded as exc:
        part = exc.partial
        raise BudgetExceeded(str(exc), partial={"degrees": part.degrees, "verdict": part.verdict,
                                                "witness": part.witness, "N": part.N}) from None
    payload = {
        "map": _map_block(f, cfg),
        "jacobian": f.jacobian.to_text(),
        "degrees": rep.degrees,
        "as": {"verdict": rep.verdict, "witness": rep.witness, "N": rep.N, "label": rep.label},
        "indeterminacy": _ind_block(f),
    }
    if cfg.iterates:
        payload["iterates"] = [{"n": k, "degree": g.degree, "lift": g.to_text(), "cofactor": g.cofactor.to_text()}
                               for k, g in enumerate(rep.iterates, 1)]
    out.append(report.emit(_path(cfg, "analyze.json"), "analyze", payload))
    print(f"map {f.to_text()}  degree {f.degree}  dominant {'yes' if f.dominant else 'no'}")
    print(f"degrees {rep.degrees}  {rep.label}")
    print("indeterminacy " + (" ".join(p.to_text() for p in f.indeterminacy) or "none"))
    for note in f.notices:
        print(f"notice: {note}")
    return payload


def cmd_green(cfg: RunConfig, out: List[str]) -> dict:
    f = load_map(cfg)
    s = _slice(cfg)
    g = v_field(f, s, cfg.n, cfg.workers)
    m = laplacian_mask(g, cfg.tau)
    write_field(_path(cfg, "green_v.grid"), g)
    write_mask(_path(cfg, "green_mask.grid"), m)
    write_pgm(_path(cfg, "green_v.pgm"), g.v)
    write_pgm(_path(cfg, "green_mask.pgm"), m.mask.astype(float))
    out += [_path(cfg, n) for n in ("green_v.grid", "green_mask.grid", "green_v.pgm", "green_mask.pgm")]
    ok = g.ok
    payload = {
        "map": _map_block(f, cfg),
        "slice": s.spec(),
        "N": cfg.n,
        "tau": cfg.tau,
        "status_counts": {"OK": int(ok.sum()), "NearIndeterminacy": int((g.status == 1).sum()),
                          "Diverged": int((g.status == 2).sum())},
        "v_min": float(np.nanmin(g.v)) if ok.any() else None,
        "v_max": float(np.nanmax(g.v)) if ok.any() else None,
        "mask_pixels": int(m.mask.sum()),
        "max_tail_bound": float(np.max(g.tail_bound()[ok])) if ok.any() else None,
    }
    out.append(report.emit(_path(cfg, "green.json"), "green", payload))
    print(f"v-field {s.resolution[0]}x{s.resolution[1]}  OK {int(ok.sum())}  mask {int(m.mask.sum())}")
    return payload


def _raster_block(r) -> dict:
    comps = [{"label": k, "size": int((r.components == k).sum())} for k in range(1, r.n_components + 1)]
    return {"params": r.params, "counts": r.counts(), "components": comps}


def cmd_classify(cfg: RunConfig, out: List[str]) -> dict:
    f = load_map(cfg)
    s = _slice(cfg)
    r = fatou_raster(f, s, _params(cfg), cfg.workers)
    write_ppm(_path(cfg, "classify.ppm"), r)
    write_grid(_path(cfg, "classify.grid"), r.verdicts, s, {"kind": "verdicts", "codes": {
        "0": "Fatou", "1": "Julia", "2": "NearIndeterminacy", "3": "Unresolved"}})
    out += [_path(cfg, "classify.ppm"), _path(cfg, "classify.grid")]
    conn = connectivity_check(r)
    payload = {"map": _map_block(f, cfg), "slice": s.spec(), "raster": _raster_block(r),
               "connectivity": {"verdict": conn.verdict, "count": conn.count, "sizes": conn.sizes}}
    try:
        g = v_field(f, s, min(cfg.n, 20), cfg.workers)
        gv = green_verdicts(g, laplacian_mask(g, cfg.tau))
        both = np.isin(r.verdicts, [0, 1]) & np.isin(gv, [0, 1])
        payload["green"] = {"resolved": int(both.sum()),
                            "agreement": float(np.mean(r.verdicts[both] == gv[both])) if both.any() else None}
    except (NotAS, P2DynError) as exc:
        payload["green"] = {"notice": f"green comparison refused: {type(exc).__name__}: {exc}"}
        print(f"notice: green comparison refused ({type(exc).__name__})")
    out.append(report.emit(_path(cfg, "classify.json"), "classify", payload))
    print(f"raster {s.resolution[0]}x{s.resolution[1]}  " +
          "  ".join(f"{k} {v}" for k, v in r.counts().items()) + f"  components {r.n_components}  Julia {conn}")
    return payload


def cmd_compare(cfg: RunConfig, out: List[str]) -> dict:
    f = load_map(cfg)
    s = _slice(cfg)
    rep = classifier_compare(f, s, _params(cfg), cfg.n_green, cfg.tau, workers=cfg.workers, seed=cfg.seed)
    payload = {"map": _map_block(f, cfg), "slice": s.spec(), "comparison": rep.as_dict()}
    out.append(report.emit(_path(cfg, "compare.json"), "compare", payload))
    ratio = "undefined" if rep.agreement is None else f"{rep.agreement:.4f}"
    print(f"{rep.kind} comparison: resolved {rep.resolved}  agreement {ratio}")
    for note in rep.notes:
        print(f"notice: {note}")
    return payload


def cmd_probe(cfg: RunConfig, out: List[str]) -> dict:
    f = load_map(cfg)
    payload = {"map": _map_block(f, cfg), "indeterminacy": _ind_block(f)}
    if cfg.point:
        p = normalize_point(corpus.parse_point(cfg.point))
        res = regularity_probe(f, p, cfg.radius, cfg.delta, cfg.n, cfg.samples, seed=cfg.seed)
        trace = orbit_pointwise(f, p, cfg.n)
        payload["probe"] = {"point": cfg.point, "verdict": res.verdict, "step": res.step, "notes": res.notes,
                            "radius": cfg.radius, "delta": cfg.delta, "N": cfg.n, "samples": cfg.samples}
        payload["orbit"] = {"status": trace.status, "stopped_at": trace.stopped_at,
                            "steps": len(trace.step_logs)}
        print(f"probe {cfg.point}: {res}")
    if cfg.dichotomy:
        s = _slice(cfg)
        r = fatou_raster(f, s, _params(cfg), cfg.workers)
        d = dichotomy_check(f, r, ProbeParams(r=cfg.radius, delta=cfg.delta, N=cfg.n,
                                              m_samples=min(cfg.samples, 16), seed=cfg.seed))
        payload["dichotomy"] = {
            "slice": s.spec(),
            "components": [{"label": c.label, "size": c.size, "sampled": c.sampled, "regular": c.regular,
                            "inconclusive": c.inconclusive, "fraction": c.fraction, "limit": c.limit}
                           for c in d.components],
            "violations": d.violations(),
            "notes": d.notes,
        }
        for c in d.components:
            print(f"component {c.label}: size {c.size}  regular fraction {c.fraction}")
        for note in d.notes:
            print(f"notice: {note}")
    if not cfg.point and not cfg.dichotomy:
        raise UsageError("probe needs --point or --dichotomy yes")
    out.append(report.emit(_path(cfg, "probe.json"), "probe", payload))
    return payload


def cmd_corpus(ns) -> int:
    entries = corpus.builtin()
    if ns.action == "list":
        for name, e in entries.items():
            print(f"{name:22s} {e.expression}")
        return 0
    if not ns.name:
        raise UsageError("corpus show needs a name")
    try:
        e = corpus.get(ns.name)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from None
    print(json.dumps({"name": e.name, "expression": e.expression, "degree": e.degree,
                      "degrees": list(e.degrees), "as": e.as_verdict, "witness": e.witness,
                      "indeterminacy": list(e.indeterminacy), "dominant": e.dominant,
                      "oracle": e.oracle}, indent=2, sort_keys=True))
    return 0


COMMANDS = {"analyze": cmd_analyze, "green": cmd_green, "classify": cmd_classify,
            "compare": cmd_compare, "probe": cmd_probe}


def _error_record(exc: Exception, code: int) -> str:
    rec = {"error": type(exc).__name__, "exit_code": code, "message": str(exc)}
    if isinstance(exc, ParseError) and exc.position is not None:
        rec["position"] = exc.position
    if isinstance(exc, BudgetExceeded) and exc.partial is not None:
        rec["partial"] = exc.partial
    if isinstance(exc, OSError) and exc.filename:
        rec["path"] = exc.filename
    return json.dumps(rec, sort_keys=True)


def _glue_window(argv: List[str]) -> List[str]:
    # "--window -2,2,-2,2" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for a in it:
        if a == "--window":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--window={nxt}")
        else:
            out.append(a)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = _glue_window(list(sys.argv[1:] if argv is None else argv))
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_EXIT_CODE if exc.code else 0
    try:
        if ns.command == "corpus":
            return cmd_corpus(ns)
        cfg = make_config(ns)
        written: List[str] = []
        os.makedirs(cfg.out, exist_ok=True)
        COMMANDS[ns.command](cfg, written)
        for path in written:
            print(f"wrote {path}")
        return 0
    except P2DynError as exc:
        print(_error_record(exc, exc.exit_code), file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(_error_record(exc, IO_EXIT_CODE), file=sys.stderr)
        return IO_EXIT_CODE


if __name__ == "__main__":
    sys.exit(main())
