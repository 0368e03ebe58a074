"""Rational self-maps of the complex projective plane."""
