"""Symbolic constants built from rational powers of rationals, powers of pi,
integer powers of Gamma at rational arguments, and quadratic surds.

These expressions are the closed-form side of every identity in the catalog.
Equality is decided numerically at a requested precision via `ge_num_equal`
(equal-within-bounds / distinct / inconclusive); no symbolic normalization
of Gamma products is attempted beyond factor merging, and `ge_reflect`
rewrites a reflection pair only when sin(pi x) has an exact surd value.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from mpmath.libmp import fone, fzero, mpf_abs, mpf_add, mpf_cmp, mpf_div, mpf_sub

from .exact import rational, rational_str
from .mpreal import ERR_BITS, RU, BigReal, Precision, gamma, pi_value, sqrt


class Verdict(str, enum.Enum):
    EQUAL = "equal-within-bounds"
    DISTINCT = "distinct"
    INCONCLUSIVE = "inconclusive"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


class GammaExprError(ValueError):
    """Malformed Gamma-product expression."""


class ReflectionNotRepresentable(GammaExprError):
    """sin(pi x) has no exact surd value in this design; rewrite refused."""


def _surd_is_positive(p: Fraction, q: Fraction, d: Fraction) -> bool:
    if q == 0:
        return p > 0
    if q > 0:
        return p > 0 or q * q * d > p * p
    return p > 0 and p * p > q * q * d


@dataclass(frozen=True)
class GammaExpr:
    """Product of rational^rational, pi^rational, Gamma(rational)^int, and
    (p + q sqrt(d))^int factors; the represented value is always positive."""

    rational_factors: tuple[tuple[Fraction, Fraction], ...] = ()
    pi_exponent: Fraction = Fraction(0)
    gamma_factors: tuple[tuple[Fraction, int], ...] = ()
    surd_factors: tuple[tuple[Fraction, Fraction, Fraction, int], ...] = ()

    def __post_init__(self):
        rats: dict[Fraction, Fraction] = {}
        for base, e in self.rational_factors:
            base, e = Fraction(base), Fraction(e)
            if base <= 0:
                raise GammaExprError(f"rational base {base} must be positive")
            if base == 1 or e == 0:
                continue
            rats[base] = rats.get(base, Fraction(0)) + e
        gammas: dict[Fraction, int] = {}
        for arg, e in self.gamma_factors:
            arg, e = Fraction(arg), int(e)
            if arg <= 0:
                raise GammaExprError(f"gamma argument {arg} must be positive")
            if e == 0:
                continue
            gammas[arg] = gammas.get(arg, 0) + e
        surds: dict[tuple[Fraction, Fraction, Fraction], int] = {}
        for p, q, d, e in self.surd_factors:
            p, q, d, e = Fraction(p), Fraction(q), Fraction(d), int(e)
            if d <= 0:
                raise GammaExprError(f"surd radicand {d} must be positive")
            if not _surd_is_positive(p, q, d):
                raise GammaExprError(f"surd {p} + {q} sqrt({d}) must be positive")
            if e == 0:
                continue
            key = (p, q, d)
            surds[key] = surds.get(key, 0) + e
        object.__setattr__(
            self,
            "rational_factors",
            tuple(sorted((b, e) for b, e in rats.items() if e != 0)),
        )
        object.__setattr__(self, "pi_exponent", Fraction(self.pi_exponent))
        object.__setattr__(
            self,
            "gamma_factors",
            tuple(sorted((a, e) for a, e in gammas.items() if e != 0)),
        )
        object.__setattr__(
            self,
            "surd_factors",
            tuple(sorted((k[0], k[1], k[2], e) for k, e in surds.items() if e != 0)),
        )

    # -- builders -----------------------------------------------------------

    @classmethod
    def one(cls) -> "GammaExpr":
        return cls()

    @classmethod
    def from_rational(cls, q, exponent=1) -> "GammaExpr":
        q, exponent = Fraction(q), Fraction(exponent)
        if q <= 0:
            raise GammaExprError("rational factor must be positive")
        return cls(rational_factors=((q, exponent),))

    @classmethod
    def from_gamma(cls, arg, exponent: int = 1) -> "GammaExpr":
        return cls(gamma_factors=((Fraction(arg), exponent),))

    @classmethod
    def pi_power(cls, exponent) -> "GammaExpr":
        return cls(pi_exponent=Fraction(exponent))

    @classmethod
    def from_surd(cls, p, q, d, exponent: int = 1) -> "GammaExpr":
        return cls(surd_factors=((Fraction(p), Fraction(q), Fraction(d), exponent),))

    # -- algebra -------------------------------------------------------------

    def __mul__(self, other: "GammaExpr") -> "GammaExpr":
        return GammaExpr(
            self.rational_factors + other.rational_factors,
            self.pi_exponent + other.pi_exponent,
            self.gamma_factors + other.gamma_factors,
            self.surd_factors + other.surd_factors,
        )

    def inverse(self) -> "GammaExpr":
        return GammaExpr(
            tuple((b, -e) for b, e in self.rational_factors),
            -self.pi_exponent,
            tuple((a, -e) for a, e in self.gamma_factors),
            tuple((p, q, d, -e) for p, q, d, e in self.surd_factors),
        )

    def __repr__(self) -> str:
        parts = []
        for b, e in self.rational_factors:
            parts.append(f"({rational_str(b)})^({rational_str(e)})")
        if self.pi_exponent:
            parts.append(f"pi^({rational_str(self.pi_exponent)})")
        for a, e in self.gamma_factors:
            parts.append(f"G({rational_str(a)})^{e}")
        for p, q, d, e in self.surd_factors:
            parts.append(
                f"({rational_str(p)}+{rational_str(q)}*sqrt({rational_str(d)}))^{e}"
            )
        return "GammaExpr(" + (" * ".join(parts) if parts else "1") + ")"

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        out: dict = {}
        if self.rational_factors:
            out["rat"] = [
                [rational_str(b), rational_str(e)] for b, e in self.rational_factors
            ]
        if self.pi_exponent:
            out["pi"] = rational_str(self.pi_exponent)
        if self.gamma_factors:
            out["gamma"] = [[rational_str(a), e] for a, e in self.gamma_factors]
        if self.surd_factors:
            out["surd"] = [
                [rational_str(p), rational_str(q), rational_str(d), e]
                for p, q, d, e in self.surd_factors
            ]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "GammaExpr":
        unknown = set(data) - {"rat", "pi", "gamma", "surd"}
        if unknown:
            raise GammaExprError(f"unknown GammaExpr fields {sorted(unknown)}")
        return cls(
            rational_factors=tuple(
                (rational(b), rational(e)) for b, e in data.get("rat", ())
            ),
            pi_exponent=rational(data.get("pi", 0)),
            gamma_factors=tuple(
                (rational(a), int(e)) for a, e in data.get("gamma", ())
            ),
            surd_factors=tuple(
                (rational(p), rational(q), rational(d), int(e))
                for p, q, d, e in data.get("surd", ())
            ),
        )


def ge_mul(x: GammaExpr, y: GammaExpr) -> GammaExpr:
    """Merged canonical product of two expressions."""
    return x * y


def ge_eval(e: GammaExpr, prec: Precision) -> BigReal:
    """Numeric value with propagated error bounds."""
    bits = prec.work_bits
    acc = BigReal.from_int(1, bits)
    for base, expo in e.rational_factors:
        acc = acc * BigReal.from_fraction(base, bits).pow_rational(expo)
    if e.pi_exponent:
        acc = acc * pi_value(prec).pow_rational(e.pi_exponent)
    for arg, expo in e.gamma_factors:
        acc = acc * gamma(arg, prec).pow_int(expo)
    for p, q, d, expo in e.surd_factors:
        root = sqrt(BigReal.from_fraction(d, bits))
        acc = acc * (BigReal.from_fraction(p, bits) + root * q).pow_int(expo)
    return acc


# sin(pi * p/q) for the reduced denominators admitting exact surds:
# value = coeff * sqrt(radicand), keyed by (q, p mod q restricted to (0, q)).
_SIN_SURD: dict[int, dict[int, tuple[Fraction, int]]] = {
    2: {1: (Fraction(1), 1)},
    3: {1: (Fraction(1, 2), 3), 2: (Fraction(1, 2), 3)},
    4: {1: (Fraction(1, 2), 2), 3: (Fraction(1, 2), 2)},
    6: {1: (Fraction(1, 2), 1), 5: (Fraction(1, 2), 1)},
}


def ge_reflect(e: GammaExpr, x) -> GammaExpr:
    """Rewrite Gamma(x) Gamma(1-x) -> pi / sin(pi x) where sin(pi x) has an
    exact surd value (x with reduced denominator in {2, 3, 4, 6}).

    Raises ReflectionNotRepresentable when the sine value is outside the
    surd table (the expression is left unchanged by the caller), and
    GammaExprError when the pair is not present with compatible exponents.
    """
    x = Fraction(x)
    if x.denominator == 1:
        raise GammaExprError("reflection argument must not be an integer")
    if not 0 < x < 1:
        raise GammaExprError(
            "reflection pair requires both gamma arguments positive (0 < x < 1)"
        )
    gammas = dict(e.gamma_factors)
    if x == Fraction(1, 2):
        e2 = gammas.get(x, 0)
        if abs(e2) < 2:
            raise GammaExprError("Gamma(1/2)^2 not present for reflection")
        k = e2 // 2 if e2 > 0 else -((-e2) // 2)
        gammas[x] = e2 - 2 * k
    else:
        ex, ey = gammas.get(x, 0), gammas.get(1 - x, 0)
        if ex == 0 or ey == 0 or (ex > 0) != (ey > 0):
            raise GammaExprError(
                f"Gamma({rational_str(x)}) and Gamma({rational_str(1 - x)}) "
                "not present with compatible exponents"
            )
        k = min(abs(ex), abs(ey)) * (1 if ex > 0 else -1)
        gammas[x] = ex - k
        gammas[1 - x] = ey - k
    table = _SIN_SURD.get(x.denominator)
    if table is None or x.numerator % x.denominator not in table:
        raise ReflectionNotRepresentable(
            f"sin(pi * {rational_str(x)}) has no exact surd value in this design"
        )
    coeff, radicand = table[x.numerator % x.denominator]
    # multiply by (pi / sin(pi x))^k = pi^k * coeff^-k * radicand^(-k/2)
    rats = list(e.rational_factors)
    if coeff != 1:
        rats.append((coeff, Fraction(-k)))
    if radicand != 1:
        rats.append((Fraction(radicand), Fraction(-k, 2)))
    return GammaExpr(
        tuple(rats),
        e.pi_exponent + k,
        tuple(gammas.items()),
        e.surd_factors,
    )


def num_equal(x: BigReal, y: BigReal, prec: Precision) -> Verdict:
    """Interval comparison with the catalog's verification tolerance.

    equal-within-bounds: |x - y| within the summed bounds AND the summed
    bounds are at most 10^(10 - target_digits) * max(1, |x|); distinct:
    the intervals are disjoint; otherwise inconclusive (raise precision).
    """
    d = mpf_abs(mpf_sub(x.val, y.val, ERR_BITS, RU))
    tot = mpf_add(x.err, y.err, ERR_BITS, RU)
    if mpf_cmp(d, tot) > 0:
        return Verdict.DISTINCT
    scale = mpf_abs(x.val) if mpf_cmp(mpf_abs(x.val), fone) > 0 else fone
    k = prec.target_digits - 10
    cap = mpf_div(
        scale,
        BigReal.from_fraction(Fraction(10) ** max(1, k), ERR_BITS).val,
        ERR_BITS,
        RU,
    )
    if mpf_cmp(tot, cap) <= 0:
        return Verdict.EQUAL
    return Verdict.INCONCLUSIVE


def ge_num_equal(x: GammaExpr, y: GammaExpr, prec: Precision) -> Verdict:
    """Numeric equality verdict for two expressions at the given precision."""
    return num_equal(ge_eval(x, prec), ge_eval(y, prec), prec)


def achieved_digits(x: BigReal, y: BigReal) -> int | None:
    """Decimal digits to which two enclosures provably agree (None: exact)."""
    d = mpf_add(
        mpf_abs(mpf_sub(x.val, y.val, ERR_BITS, RU)),
        mpf_add(x.err, y.err, ERR_BITS, RU),
        ERR_BITS,
        RU,
    )
    if d == fzero:
        return None
    scale = mpf_abs(x.val) if mpf_cmp(mpf_abs(x.val), fone) > 0 else fone
    r = mpf_div(d, scale, ERR_BITS, RU)
    sign, man, exp, bc = r
    if man == 0:
        return None
    mag2 = exp + bc  # log2 upper bound
    return max(0, int(-mag2 * 0.3010299956639812))
