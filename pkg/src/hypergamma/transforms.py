"""2F1 transformation rules as exact rewrites, Gosper's 2F1(1/4) formula
with machine-checkable proof steps, and the quadratic-quadratic-cubic chain
that produces the degree-12 evaluation at argument (172872/185039)^2.

A `HypTerm` is prefactor(z) * 2F1(a,b;c; argument(z)) with the prefactor
kept as a factored list of (polynomial base, rational exponent) pairs and
the argument as an exact rational function.  A `TransformRule` rewrites a
term whose parameters satisfy an exact linear constraint: parameters map
affinely, the argument map composes exactly, and rule prefactor bases
(polynomials in the old argument) are composed and split into polynomial
factors of the new variable.  Everything symbolic is exact; numerics enter
only in the verification routines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .exact import (
    Poly,
    RatFunc,
    poly_from_pairs,
    rational_str,
    rf_compose,
    rf_eval,
)
from .gammaexpr import GammaExpr, Verdict, ge_eval, ge_mul, ge_num_equal, num_equal
from .hyper import HypParams, f21_eval, f21_series
from .mpreal import (
    BigReal,
    Precision,
    beta,
    cos_pi_times,
    gamma,
    pi_value,
    tanh_sinh_integrate,
)


class TransformError(ValueError):
    """Rule constraint violation or malformed term."""


class DerivationError(ArithmeticError):
    """Internal mismatch while reproducing the chain evaluation."""


Affine = tuple[Fraction, Fraction, Fraction, Fraction]  # ca*a + cb*b + cc*c + k


def _affine(row: Affine, p: HypParams) -> Fraction:
    ca, cb, cc, k = row
    return ca * p.a + cb * p.b + cc * p.c + k


def _fr(x) -> Fraction:
    return Fraction(x)


@dataclass(frozen=True)
class HypTerm:
    """prefactor(z) * 2F1(params; argument(z)) with exact symbolic parts."""

    prefactor: tuple[tuple[Poly, Fraction], ...]
    params: HypParams
    argument: RatFunc

    def prefactor_value(self, z: Fraction) -> GammaExpr:
        """Exact prefactor value at z as a product of rational powers.

        Every base must evaluate strictly positive (real principal powers
        only); a nonpositive base raises TransformError.
        """
        z = Fraction(z)
        out = GammaExpr.one()
        for base, expo in self.prefactor:
            v = base(z)
            if v <= 0:
                raise TransformError(
                    f"prefactor base {base!r} is {rational_str(v)} <= 0 at "
                    f"z = {rational_str(z)}"
                )
            out = ge_mul(out, GammaExpr.from_rational(v, expo))
        return out

    def evaluate(self, z: Fraction, prec: Precision) -> BigReal:
        """Numeric value prefactor(z) * 2F1(params; argument(z))."""
        z = Fraction(z)
        arg = rf_eval(self.argument, z)
        series = f21_eval(self.params, arg, prec, cross_check=False)
        return ge_eval(self.prefactor_value(z), prec) * series

    def to_json(self) -> dict:
        return {
            "prefactor": [
                {"base": base.to_json(), "exponent": rational_str(expo)}
                for base, expo in self.prefactor
            ],
            "params": {
                "a": rational_str(self.params.a),
                "b": rational_str(self.params.b),
                "c": rational_str(self.params.c),
            },
            "argument": self.argument.to_json(),
        }


@dataclass(frozen=True)
class TransformRule:
    """A 2F1 rewrite: constraint on (a,b,c), affine parameter map, exact
    argument map in the old argument w, and prefactor bases in w with
    parameter-dependent exponents."""

    name: str
    constraints: tuple[Affine, ...]
    param_map: tuple[Affine, Affine, Affine]
    arg_map: RatFunc
    prefactor_map: tuple[tuple[Poly, Affine], ...]
    # conservative sampling region (lo, hi) for soundness checks
    sample_region: tuple[Fraction, Fraction]

    def applies_to(self, p: HypParams) -> bool:
        return all(_affine(row, p) == 0 for row in self.constraints)

    def new_params(self, p: HypParams) -> HypParams:
        return HypParams(*(_affine(row, p) for row in self.param_map))


def apply_rule(rule: TransformRule, term: HypTerm) -> HypTerm:
    """Rewrite a term by one rule application; exact, no numerics.

    The rule's argument map composes with the term's argument; each rule
    prefactor base B(w) becomes B(argument(z)), split into a numerator
    polynomial factor and a denominator polynomial factor of z.
    """
    if not rule.applies_to(term.params):
        raise TransformError(
            f"rule {rule.name} constraint violated at params "
            f"({rational_str(term.params.a)}, {rational_str(term.params.b)}; "
            f"{rational_str(term.params.c)})"
        )
    new_arg = rf_compose(rule.arg_map, term.argument)
    prefactor = list(term.prefactor)
    for base, exp_row in rule.prefactor_map:
        expo = _affine(exp_row, term.params)
        if expo == 0:
            continue
        composed = rf_compose(RatFunc(base), term.argument)
        if composed.num.is_zero:
            raise TransformError(
                f"rule {rule.name} prefactor base {base!r} vanishes identically "
                "after composition"
            )
        if composed.num != Poly.one():
            prefactor.append((composed.num, expo))
        if composed.den != Poly.one():
            prefactor.append((composed.den, -expo))
    return HypTerm(tuple(prefactor), rule.new_params(term.params), new_arg)


def _row(ca=0, cb=0, cc=0, k=0) -> Affine:
    return (_fr(ca), _fr(cb), _fr(cc), _fr(k))


# Euler's transform: 2F1(a,b;c;w) = (1-w)^(c-a-b) 2F1(c-a, c-b; c; w)
EULER = TransformRule(
    name="euler",
    constraints=(),
    param_map=(_row(-1, 0, 1), _row(0, -1, 1), _row(0, 0, 1)),
    arg_map=RatFunc.x(),
    prefactor_map=((poly_from_pairs((0, 1), (1, -1)), _row(-1, -1, 1)),),
    sample_region=(_fr(-3) / 4, _fr(3) / 4),
)

# Quadratic transform at c = 2b:
# 2F1(a,b;2b;w) = (1-w)^(b-a) (1-w/2)^(a-2b)
#                 * 2F1(b-a/2, b+(1-a)/2; b+1/2; w^2/(2-w)^2)
QUADRATIC_C_2B = TransformRule(
    name="quadratic-c-2b",
    constraints=(_row(0, -2, 1),),
    param_map=(
        _row(Fraction(-1, 2), 1, 0),
        _row(Fraction(-1, 2), 1, 0, Fraction(1, 2)),
        _row(0, 1, 0, Fraction(1, 2)),
    ),
    arg_map=RatFunc(
        poly_from_pairs((2, 1)), poly_from_pairs((2, 1), (1, -4), (0, 4))
    ),
    prefactor_map=(
        (poly_from_pairs((0, 1), (1, -1)), _row(-1, 1)),
        (poly_from_pairs((0, 1), (1, Fraction(-1, 2))), _row(1, -2)),
    ),
    sample_region=(_fr(-1) / 2, _fr(3) / 5),
)

# Quadratic transform at c = (a+b+1)/2:
# 2F1(a,b;(a+b+1)/2;w) = (1-2w)^(-a)
#                        * 2F1(a/2, (a+1)/2; (a+b+1)/2; 4w(w-1)/(2w-1)^2)
QUADRATIC_MEAN = TransformRule(
    name="quadratic-mean",
    constraints=(_row(Fraction(-1, 2), Fraction(-1, 2), 1, Fraction(-1, 2)),),
    param_map=(
        _row(Fraction(1, 2)),
        _row(Fraction(1, 2), 0, 0, Fraction(1, 2)),
        _row(0, 0, 1),
    ),
    arg_map=RatFunc(
        poly_from_pairs((2, 4), (1, -4)), poly_from_pairs((2, 4), (1, -4), (0, 1))
    ),
    prefactor_map=((poly_from_pairs((0, 1), (1, -2)), _row(-1)),),
    sample_region=(_fr(-1) / 10, _fr(1) / 10),
)

# Cubic transform at b = a + 1/2, c = (4a+5)/6:
# 2F1(a,a+1/2;(4a+5)/6;w) = (1-9w)^(-2a/3)
#                           * 2F1(a/3, a/3+1/2; (4a+5)/6; -27w(1-w)^2/(1-9w)^2)
CUBIC = TransformRule(
    name="cubic",
    constraints=(
        _row(-1, 1, 0, Fraction(-1, 2)),
        _row(Fraction(-2, 3), 0, 1, Fraction(-5, 6)),
    ),
    param_map=(
        _row(Fraction(1, 3)),
        _row(Fraction(1, 3), 0, 0, Fraction(1, 2)),
        _row(0, 0, 1),
    ),
    arg_map=RatFunc(
        poly_from_pairs((3, -27), (2, 54), (1, -27)),
        poly_from_pairs((2, 81), (1, -18), (0, 1)),
    ),
    prefactor_map=((poly_from_pairs((0, 1), (1, -9)), _row(Fraction(-2, 3))),),
    sample_region=(_fr(-1) / 60, _fr(1) / 60),
)

RULES: dict[str, TransformRule] = {
    r.name: r for r in (EULER, QUADRATIC_C_2B, QUADRATIC_MEAN, CUBIC)
}


# ---------------------------------------------------------------------------
# Gosper's 2F1(1/4) formula


def gosper_lhs_params(b: Fraction) -> HypParams:
    """Left side of Gosper's formula: 2F1(1/2, b; 5/2-2b; 1/4)."""
    b = _fr(b)
    return HypParams(Fraction(1, 2), b, Fraction(5, 2) - 2 * b)


def gosper_rhs(b: Fraction) -> GammaExpr:
    """Right side of Gosper's formula:
    2^(2b) sqrt(pi)/3 * Gamma(5/2-2b) / Gamma(3/2-b)^2."""
    b = _fr(b)
    for arg in (Fraction(5, 2) - 2 * b, Fraction(3, 2) - b):
        if arg.denominator == 1 and arg <= 0:
            raise TransformError(f"gamma pole at {rational_str(arg)} in closed form")
    return GammaExpr(
        rational_factors=((Fraction(2), 2 * b), (Fraction(3), Fraction(-1))),
        pi_exponent=Fraction(1, 2),
        gamma_factors=((Fraction(5, 2) - 2 * b, 1), (Fraction(3, 2) - b, -2)),
    )


PROOF_STEPS = (
    "euler-transform-integral",
    "substitution",
    "cyclotomic",
    "cube-substitution",
    "reflection-closed-form",
)


def verify_gosper_proof(b: Fraction, prec: Precision) -> dict[str, Verdict]:
    """Verify each integral step in the proof of Gosper's formula at a given
    rational b, returning a per-step verdict.

    Steps (each compared by two independent evaluation routes):
      euler-transform-integral: (4/3)^(2-3b) 2F1(1/2,b;5/2-2b;1/4) equals
          G(5/2-2b)/(G(5/2-3b)G(b)) * int t^(3/2-3b)(1-t)^(b-1)(1-t/4)^(2b-2);
      substitution: t = 4u/(1+u)^2 turns that integral into
          4^(5/2-3b) int u^(3/2-3b)(1-u)^(2b-1)(1+u+u^2)^(2b-2);
      cyclotomic: (1-u)(1+u+u^2) = 1-u^3 rewrites the integrand as
          (u^(3/2-3b) - u^(5/2-3b))(1-u^3)^(2b-2);
      cube-substitution: v = u^3 reduces it to
          (B(5/6-b, 2b-1) - B(7/6-b, 2b-1))/3;
      reflection-closed-form: that difference equals
          -G(2b-1) G(5/6-b) G(7/6-b) cos(pi b) / pi.

    Requires b in (1/2, 5/6) so every integral converges absolutely.
    """
    b = _fr(b)
    if not (Fraction(1, 2) < b < Fraction(5, 6)):
        raise TransformError(
            "proof-step verification requires 1/2 < b < 5/6 "
            "(2b-1 > 0 and 3/2-3b > -1)"
        )
    qprec = prec.boosted(16)
    verdicts: dict[str, Verdict] = {}

    quarter = Fraction(1, 4)
    e_right = b - 1
    e_left = Fraction(3, 2) - 3 * b

    def integrand_t(u: BigReal, v: BigReal) -> BigReal:
        # t^(3/2-3b) (1-t)^(b-1) (1-t/4)^(2b-2) with t = u, 1-t = v
        lin = 1 - u * quarter
        return (
            u.pow_rational(e_left)
            * v.pow_rational(e_right)
            * lin.pow_rational(2 * b - 2)
        )

    i_t = tanh_sinh_integrate(integrand_t, Fraction(0), Fraction(1), qprec)

    lhs_series = f21_series(gosper_lhs_params(b), quarter, qprec)
    scale = BigReal.from_fraction(Fraction(4, 3), qprec.work_bits).pow_rational(
        2 - 3 * b
    )
    pref = gamma(Fraction(5, 2) - 2 * b, qprec) / (
        gamma(Fraction(5, 2) - 3 * b, qprec) * gamma(b, qprec)
    )
    verdicts[PROOF_STEPS[0]] = num_equal(lhs_series * scale, pref * i_t, prec)

    def integrand_u(u: BigReal, v: BigReal) -> BigReal:
        # u^(3/2-3b) (1-u)^(2b-1) (1+u+u^2)^(2b-2)
        quad = 1 + u + u * u
        return (
            u.pow_rational(e_left)
            * v.pow_rational(2 * b - 1)
            * quad.pow_rational(2 * b - 2)
        )

    i_u = tanh_sinh_integrate(integrand_u, Fraction(0), Fraction(1), qprec)
    four_pow = BigReal.from_fraction(Fraction(4), qprec.work_bits).pow_rational(
        Fraction(5, 2) - 3 * b
    )
    verdicts[PROOF_STEPS[1]] = num_equal(i_t, four_pow * i_u, prec)

    def integrand_cyc(u: BigReal, v: BigReal) -> BigReal:
        # (u^(3/2-3b) - u^(5/2-3b)) (1-u^3)^(2b-2); the cube complement
        # 1-u^3 = v(3 - 3v + v^2) is formed from v to avoid cancellation
        cube_c = v * (3 - 3 * v + v * v)
        return (
            u.pow_rational(e_left)
            * v
            * cube_c.pow_rational(2 * b - 2)
        )

    i_cyc = tanh_sinh_integrate(integrand_cyc, Fraction(0), Fraction(1), qprec)
    verdicts[PROOF_STEPS[2]] = num_equal(i_u, i_cyc, prec)

    delta = beta(Fraction(5, 6) - b, 2 * b - 1, qprec) - beta(
        Fraction(7, 6) - b, 2 * b - 1, qprec
    )
    verdicts[PROOF_STEPS[3]] = num_equal(i_cyc, delta / 3, prec)

    closed = -(
        gamma(2 * b - 1, qprec)
        * gamma(Fraction(5, 6) - b, qprec)
        * gamma(Fraction(7, 6) - b, qprec)
        * cos_pi_times(b, qprec)
    ) / pi_value(qprec)
    verdicts[PROOF_STEPS[4]] = num_equal(delta, closed, prec)
    return verdicts


# ---------------------------------------------------------------------------
# The degree-12 chain and the headline evaluation

MAIN_PARAMS = HypParams(Fraction(7, 48), Fraction(31, 48), Fraction(9, 8))
MAIN_ARGUMENT = Fraction(29884728384, 34239431521)  # == (172872/185039)^2

# 185039^(7/24) Gamma(1/8)^3 Gamma(5/8) / (672 (1+sqrt2) 3^(1/8) pi^2)
MAIN_RHS = GammaExpr(
    rational_factors=(
        (Fraction(185039), Fraction(7, 24)),
        (Fraction(672), Fraction(-1)),
        (Fraction(3), Fraction(-1, 8)),
    ),
    pi_exponent=Fraction(-2),
    gamma_factors=((Fraction(1, 8), 3), (Fraction(5, 8), 1)),
    surd_factors=((Fraction(1), Fraction(1), Fraction(2), -1),),
)


def twelfth_degree_map() -> RatFunc:
    """-432 (z-2)^8 (z-1) z^2 / [(z^2+4z-4)^2 (z^4-136z^3+152z^2-32z+16)^2]."""
    num = (
        poly_from_pairs((1, 1), (0, -2)) ** 8
        * poly_from_pairs((1, 1), (0, -1))
        * poly_from_pairs((2, 1))
    ).scale(-432)
    den = (
        poly_from_pairs((2, 1), (1, 4), (0, -4)) ** 2
        * poly_from_pairs((4, 1), (3, -136), (2, 152), (1, -32), (0, 16)) ** 2
    )
    return RatFunc(num, den)


@dataclass(frozen=True)
class DerivationTrace:
    """Ordered rule applications from the seed term, the exact evaluation
    point data, and the derived closed-form constant."""

    seed: str
    steps: tuple[tuple[str, HypTerm], ...]
    eval_point: Fraction
    final_argument: Fraction
    final_constant: GammaExpr
    series_value: BigReal
    constant_value: BigReal
    printed_value: BigReal
    verdict: Verdict
    agreement_digits: int | None

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "steps": [
                {"rule": name, "term": term.to_json()} for name, term in self.steps
            ],
            "eval_point": rational_str(self.eval_point),
            "final_argument": rational_str(self.final_argument),
            "final_constant": self.final_constant.to_json(),
            "series_value": self.series_value.to_decimal(),
            "constant_value": self.constant_value.to_decimal(),
            "printed_value": self.printed_value.to_decimal(),
            "verdict": self.verdict.value,
            "agreement_digits": self.agreement_digits,
        }


def derive_main(prec: Precision, check_consistency: bool = True) -> DerivationTrace:
    """Re-derive the headline evaluation by the quadratic-quadratic-cubic
    chain seeded with Gosper's formula at b = 5/8, and verify it.

    The chain 2F1(1/2,5/8;5/4;z) -> ... -> 2F1(7/48,31/48;9/8; A(z)) is
    composed exactly; at z = 1/4 the argument must equal (172872/185039)^2
    as an exact rational, the derived constant (Gosper closed form divided
    by the accumulated prefactor) must agree numerically with both the
    direct series evaluation and the printed Gamma-product form.  Any
    internal mismatch raises DerivationError.
    """
    z = Fraction(1, 4)
    seed = HypTerm((), HypParams(Fraction(1, 2), Fraction(5, 8), Fraction(5, 4)), RatFunc.x())
    steps = []
    term = seed
    for rule in (QUADRATIC_C_2B, QUADRATIC_MEAN, CUBIC):
        if rule is QUADRATIC_MEAN:
            # 2F1 is symmetric in its upper parameters; the chain takes the
            # larger one (7/8) as the "a" of the second quadratic rule
            term = HypTerm(term.prefactor, term.params.swapped(), term.argument)
        term = apply_rule(rule, term)
        steps.append((rule.name, term))

    if term.params != MAIN_PARAMS:
        raise DerivationError(f"chain produced parameters {term.params}")
    if term.argument != twelfth_degree_map():
        raise DerivationError("chain argument map differs from the degree-12 form")
    arg_val = rf_eval(term.argument, z)
    if arg_val != MAIN_ARGUMENT:
        raise DerivationError(
            f"argument at z=1/4 is {rational_str(arg_val)}, "
            f"expected {rational_str(MAIN_ARGUMENT)}"
        )

    if check_consistency:
        base_val = seed.evaluate(z, prec)
        for name, step_term in steps:
            step_val = step_term.evaluate(z, prec)
            if num_equal(base_val, step_val, prec) is Verdict.DISTINCT:
                raise DerivationError(f"chain inconsistent after rule {name}")

    # 2F1(main; A(1/4)) = gosper_rhs(5/8) / prefactor(1/4)
    constant = ge_mul(gosper_rhs(Fraction(5, 8)), term.prefactor_value(z).inverse())
    constant_value = ge_eval(constant, prec)
    series_value = f21_series(MAIN_PARAMS, MAIN_ARGUMENT, prec)
    printed_value = ge_eval(MAIN_RHS, prec)

    v1 = num_equal(constant_value, series_value, prec)
    v2 = num_equal(constant_value, printed_value, prec)
    v3 = num_equal(series_value, printed_value, prec)
    worst = [v for v in (v1, v2, v3)]
    if Verdict.DISTINCT in worst:
        raise DerivationError("derived constant distinct from a reference value")
    verdict = Verdict.EQUAL if all(v is Verdict.EQUAL for v in worst) else Verdict.INCONCLUSIVE

    from .gammaexpr import achieved_digits

    return DerivationTrace(
        seed="gosper-quarter at b=5/8: 2F1(1/2,5/8;5/4;1/4)",
        steps=tuple(steps),
        eval_point=z,
        final_argument=arg_val,
        final_constant=constant,
        series_value=series_value,
        constant_value=constant_value,
        printed_value=printed_value,
        verdict=verdict,
        agreement_digits=achieved_digits(series_value, printed_value),
    )


# ---------------------------------------------------------------------------
# splitting transform and the concluding identity


def verify_zj_split(a: Fraction, b: Fraction, z: Fraction, prec: Precision) -> Verdict:
    """Check the Gamma-prefactored split of 2F1(a,b;1/2;z) into the two
    series at arguments (1 -+ sqrt(z))/2."""
    a, b, z = _fr(a), _fr(b), _fr(z)
    if not 0 < z < 1:
        raise TransformError("split check requires 0 < z < 1")
    qprec = prec.boosted(8)
    wb = qprec.work_bits
    pref = (
        2
        * gamma(Fraction(1, 2), qprec)
        * gamma(a + b + Fraction(1, 2), qprec)
        / (gamma(a + Fraction(1, 2), qprec) * gamma(b + Fraction(1, 2), qprec))
    )
    lhs = pref * f21_series(HypParams(a, b, Fraction(1, 2)), z, qprec)
    root = (BigReal.from_fraction(z, wb)).pow_rational(Fraction(1, 2))
    p2 = HypParams(2 * a, 2 * b, a + b + Fraction(1, 2))
    half = Fraction(1, 2)
    minus = (1 - root) * half
    plus = (1 + root) * half
    rhs = f21_series(p2, minus, qprec) + f21_series(p2, plus, qprec)
    return num_equal(lhs, rhs, prec)


# 2F1(1/2,3/2;13/6;-1/3) = 7/(2^(2/3) sqrt 3) - 7 G(1/6)^3/(2^(14/3) 3^(3/2) pi^(3/2))
CONCLUSION_PARAMS = HypParams(Fraction(1, 2), Fraction(3, 2), Fraction(13, 6))
CONCLUSION_ARGUMENT = Fraction(-1, 3)
CONCLUSION_RHS_TERMS: tuple[tuple[int, GammaExpr], ...] = (
    (
        1,
        GammaExpr(
            rational_factors=(
                (Fraction(7), Fraction(1)),
                (Fraction(2), Fraction(-2, 3)),
                (Fraction(3), Fraction(-1, 2)),
            )
        ),
    ),
    (
        -1,
        GammaExpr(
            rational_factors=(
                (Fraction(7), Fraction(1)),
                (Fraction(2), Fraction(-14, 3)),
                (Fraction(3), Fraction(-3, 2)),
            ),
            pi_exponent=Fraction(-3, 2),
            gamma_factors=((Fraction(1, 6), 3),),
        ),
    ),
)


def conclusion_sides(prec: Precision, rhs_terms=CONCLUSION_RHS_TERMS):
    """LHS (alternating series) and RHS (signed Gamma-expression sum)."""
    lhs = f21_series(CONCLUSION_PARAMS, CONCLUSION_ARGUMENT, prec)
    rhs = BigReal.from_int(0, prec.work_bits)
    for sign, expr in rhs_terms:
        piece = ge_eval(expr, prec)
        rhs = rhs + (piece if sign > 0 else -piece)
    return lhs, rhs


def verify_conclusion(prec: Precision) -> Verdict:
    """Verdict for the concluding elementary-minus-Gamma-cube identity."""
    lhs, rhs = conclusion_sides(prec)
    return num_equal(lhs, rhs, prec)
