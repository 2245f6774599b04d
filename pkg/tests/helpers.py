"""Shared test helpers: oracle comparisons against mpmath's high level."""

from __future__ import annotations

from fractions import Fraction

import mpmath
from mpmath import mp

from hypergamma.mpreal import BigReal


def as_mpf(x):
    """Raw mpf tuple -> mpmath.mpf (no rounding)."""
    return mp.make_mpf(x)


def mpf_of_fraction(q: Fraction):
    q = Fraction(q)
    return mp.mpf(q.numerator) / q.denominator


def assert_encloses(x: BigReal, oracle, label: str = ""):
    """The BigReal interval [val-err, val+err] must contain the oracle value."""
    with mp.workdps(mp.dps + 30):
        d = abs(as_mpf(x.val) - oracle)
        e = as_mpf(x.err)
        assert d <= e, f"{label}: |{as_mpf(x.val)} - {oracle}| = {d} > err {e}"


def assert_close_digits(x: BigReal, oracle, digits: int, label: str = ""):
    """Agreement to the stated number of decimal digits (relative)."""
    with mp.workdps(mp.dps + 30):
        d = abs(as_mpf(x.val) - oracle)
        scale = max(1, abs(oracle))
        assert d <= scale * mpmath.mpf(10) ** (-digits), (
            f"{label}: disagreement {d} exceeds 10^-{digits}"
        )


def overlap(x: BigReal, y: BigReal) -> bool:
    """Whether two BigReal intervals intersect."""
    with mp.workdps(mp.dps + 30):
        d = abs(as_mpf(x.val) - as_mpf(y.val))
        return d <= as_mpf(x.err) + as_mpf(y.err)
