"""Persistent identity catalog, verification runner, and report generation.

Catalog files are JSON with a schema version and a list of records.  Each
record's `kind` selects exactly one verification strategy:

* ``point-evaluation``: fixed parameters and argument; the series/integral
  value is compared against a Gamma-product expression (or a signed sum of
  them, or an exact rational).
* ``parametric-family``: the lhs parameters, argument, and rhs expression
  are templates over named variables; samples come from an explicit grid or
  a named deterministic sampler.  Exact rhs kinds compare as rationals.
* ``transform-rule``: soundness sampling of a named rewrite rule, or the
  fixed-point checks of the series splitting transform.
* ``proof-chain``: the derivation chain of the headline evaluation, or the
  per-step proof verification of the 2F1(1/4) closed form.

Template expressions ("5/2-2*b", "b/(a+b)", ...) are parsed over exact
rationals; only +, -, *, / and named variables are allowed.

Verdicts per record are pass / fail / inconclusive / skipped; an
inconclusive comparison is retried once at doubled precision.  A fail entry
records both computed intervals.  Reports order records by id regardless of
execution order, and the exit-code contract is: 0 all pass, 1 any fail,
2 any inconclusive, 3 usage/parse errors.
"""

from __future__ import annotations

import ast
import json
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .exact import rational, rational_str
from .gammaexpr import (
    GammaExpr,
    GammaExprError,
    Verdict,
    achieved_digits,
    ge_eval,
    num_equal,
)
from .hyper import (
    HyperError,
    HypParams,
    PochRatio,
    f21_eval,
    f21_terminating,
)
from .mpreal import BigReal, MPRealError, Precision
from .transforms import (
    RULES,
    DerivationError,
    HypTerm,
    TransformError,
    apply_rule,
    derive_main,
    verify_gosper_proof,
    verify_zj_split,
)
from .exact import RatFunc

SCHEMA_VERSION = 1
DEFAULT_DIGITS = 100
DEFAULT_CATALOG = Path(__file__).parent / "data" / "identities.json"
CANARY_CATALOG = Path(__file__).parent / "data" / "canary.json"

KINDS = ("point-evaluation", "parametric-family", "transform-rule", "proof-chain")

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3


class CatalogError(ValueError):
    """Catalog parse or validation failure (exit code 3 territory)."""


class UnverifiableRecord(Exception):
    """Structurally valid record whose strategy is not registered here."""


# ---------------------------------------------------------------------------
# exact expression templates


def expr_eval(text: str, env: dict[str, Fraction] | None = None) -> Fraction:
    """Evaluate an exact rational expression with +, -, *, / and variables."""
    env = env or {}
    try:
        node = ast.parse(str(text), mode="eval").body
    except SyntaxError as e:
        raise CatalogError(f"bad expression {text!r}: {e}") from None

    def ev(n: ast.AST) -> Fraction:
        if isinstance(n, ast.BinOp):
            lhs, rhs = ev(n.left), ev(n.right)
            if isinstance(n.op, ast.Add):
                return lhs + rhs
            if isinstance(n.op, ast.Sub):
                return lhs - rhs
            if isinstance(n.op, ast.Mult):
                return lhs * rhs
            if isinstance(n.op, ast.Div):
                if rhs == 0:
                    raise CatalogError(f"division by zero in {text!r}")
                return lhs / rhs
            raise CatalogError(f"operator not allowed in {text!r}")
        if isinstance(n, ast.UnaryOp):
            if isinstance(n.op, ast.USub):
                return -ev(n.operand)
            if isinstance(n.op, ast.UAdd):
                return ev(n.operand)
            raise CatalogError(f"operator not allowed in {text!r}")
        if isinstance(n, ast.Constant):
            if isinstance(n.value, int):
                return Fraction(n.value)
            raise CatalogError(f"non-integer literal in {text!r}")
        if isinstance(n, ast.Name):
            if n.id in env:
                return env[n.id]
            raise CatalogError(f"unknown variable {n.id!r} in {text!r}")
        raise CatalogError(f"syntax not allowed in {text!r}")

    return ev(node)


def expr_names(text: str) -> set[str]:
    try:
        node = ast.parse(str(text), mode="eval")
    except SyntaxError as e:
        raise CatalogError(f"bad expression {text!r}: {e}") from None
    return {n.id for n in ast.walk(node) if isinstance(n, ast.Name)}


def _gamma_expr_template(data: dict, env: dict[str, Fraction]) -> GammaExpr:
    unknown = set(data) - {"rat", "pi", "gamma", "surd"}
    if unknown:
        raise CatalogError(f"unknown gamma_expr fields {sorted(unknown)}")
    return GammaExpr(
        rational_factors=tuple(
            (expr_eval(b, env), expr_eval(e, env)) for b, e in data.get("rat", ())
        ),
        pi_exponent=expr_eval(data.get("pi", "0"), env),
        gamma_factors=tuple(
            (expr_eval(a, env), int(e)) for a, e in data.get("gamma", ())
        ),
        surd_factors=tuple(
            (expr_eval(p, env), expr_eval(q, env), expr_eval(d, env), int(e))
            for p, q, d, e in data.get("surd", ())
        ),
    )


# ---------------------------------------------------------------------------
# records


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    kind: str
    source: str = ""
    digits: int | None = None
    lhs: dict | None = None
    rhs: dict | None = None
    parameters: dict | None = None
    rule: str | None = None
    samples: int | None = None
    seed: int | None = None
    points: tuple[dict, ...] | None = None
    chain: str | None = None
    b_values: tuple[Fraction, ...] | None = None


_COMMON_FIELDS = {"id", "kind", "source", "digits"}
_KIND_FIELDS = {
    "point-evaluation": {"lhs", "rhs"},
    "parametric-family": {"lhs", "rhs", "parameters"},
    "transform-rule": {"rule", "samples", "seed", "points"},
    "proof-chain": {"chain", "b"},
}
_RHS_KINDS = {"gamma_expr", "gamma_expr_sum", "rational", "exact_product"}


def _check_names(text, variables: set[str], where: str) -> None:
    bad = expr_names(text) - variables
    if bad:
        raise CatalogError(f"{where}: unknown names {sorted(bad)} in {text!r}")


def _validate_gamma_expr_template(data: dict, variables: set[str], where: str) -> None:
    unknown = set(data) - {"rat", "pi", "gamma", "surd"}
    if unknown:
        raise CatalogError(f"{where}: unknown gamma_expr fields {sorted(unknown)}")
    for b, e in data.get("rat", ()):
        _check_names(b, variables, where)
        _check_names(e, variables, where)
    _check_names(data.get("pi", "0"), variables, where)
    for a, e in data.get("gamma", ()):
        _check_names(a, variables, where)
        int(e)
    for p, q, d, e in data.get("surd", ()):
        for part in (p, q, d):
            _check_names(part, variables, where)
        int(e)
    if not variables:
        # concrete expression: instantiating now rejects Gamma poles and
        # nonpositive bases at load time
        try:
            _gamma_expr_template(data, {})
        except GammaExprError as e:
            raise CatalogError(f"{where}: {e}") from None


def _validate_rhs(rhs: dict, variables: set[str], where: str) -> None:
    if not isinstance(rhs, dict) or len(rhs) != 1:
        raise CatalogError(f"{where}: rhs must have exactly one of {sorted(_RHS_KINDS)}")
    (key, value), = rhs.items()
    if key not in _RHS_KINDS:
        raise CatalogError(f"{where}: unknown rhs kind {key!r}")
    if key == "gamma_expr":
        _validate_gamma_expr_template(value, variables, where)
    elif key == "gamma_expr_sum":
        for i, term in enumerate(value):
            if set(term) != {"sign", "expr"}:
                raise CatalogError(f"{where}: sum term {i} needs sign and expr")
            if term["sign"] not in (1, -1):
                raise CatalogError(f"{where}: sum term sign must be 1 or -1")
            _validate_gamma_expr_template(term["expr"], variables, f"{where} term {i}")
    elif key == "rational":
        _check_names(value, variables, where)
    elif key == "exact_product":
        unknown = set(value) - {"pow_base", "pow_exp", "poch_ratio"}
        if unknown:
            raise CatalogError(f"{where}: unknown exact_product fields {sorted(unknown)}")
        _check_names(value.get("pow_base", "1"), variables, where)
        _check_names(value.get("pow_exp", "0"), variables, where)
        pr = value.get("poch_ratio")
        if pr is not None:
            PochRatio(
                upper=tuple(rational(u) for u in pr["upper"]),
                lower=tuple(rational(l) for l in pr["lower"]),
            )
            _check_names(pr["n"], variables, where)


def _parse_record(data: dict, index: int) -> IdentityRecord:
    where = f"record #{index}"
    if not isinstance(data, dict):
        raise CatalogError(f"{where}: not an object")
    rid = data.get("id")
    if not isinstance(rid, str) or not rid:
        raise CatalogError(f"{where}: missing string id")
    where = f"record {rid!r}"
    kind = data.get("kind")
    if kind not in KINDS:
        raise CatalogError(f"{where}: unknown kind {kind!r}")
    allowed = _COMMON_FIELDS | _KIND_FIELDS[kind]
    unknown = set(data) - allowed
    if unknown:
        raise CatalogError(f"{where}: unknown fields {sorted(unknown)}")
    digits = data.get("digits")
    if digits is not None and (not isinstance(digits, int) or digits < 1):
        raise CatalogError(f"{where}: digits must be a positive integer")

    lhs = data.get("lhs")
    rhs = data.get("rhs")
    parameters = data.get("parameters")
    variables: set[str] = set()

    if kind in ("point-evaluation", "parametric-family"):
        if not isinstance(lhs, dict) or set(lhs) != {"a", "b", "c", "z"}:
            raise CatalogError(f"{where}: lhs must define a, b, c, z")
        if kind == "parametric-family":
            if not isinstance(parameters, dict):
                raise CatalogError(f"{where}: parametric-family needs parameters")
            unknown = set(parameters) - {"vars", "sampler", "count", "seed", "grid"}
            if unknown:
                raise CatalogError(f"{where}: unknown parameters fields {sorted(unknown)}")
            variables = set(parameters.get("vars", ()))
            if not variables:
                raise CatalogError(f"{where}: parameters.vars must be nonempty")
            if ("grid" in parameters) == ("sampler" in parameters):
                raise CatalogError(f"{where}: need exactly one of grid or sampler")
            if "grid" in parameters:
                grid = parameters["grid"]
                if set(grid) != variables:
                    raise CatalogError(f"{where}: grid keys must match vars")
                for var, spec in grid.items():
                    if isinstance(spec, dict):
                        if set(spec) != {"from", "to"}:
                            raise CatalogError(f"{where}: grid range needs from/to")
                    elif not isinstance(spec, list) or not spec:
                        raise CatalogError(f"{where}: grid for {var} must be a list")
            else:
                if parameters["sampler"] not in SAMPLERS:
                    raise CatalogError(
                        f"{where}: unknown sampler {parameters['sampler']!r}"
                    )
        for key in ("a", "b", "c", "z"):
            bad = expr_names(lhs[key]) - variables
            if bad:
                raise CatalogError(f"{where}: lhs.{key} uses unknown names {sorted(bad)}")
        if rhs is None:
            raise CatalogError(f"{where}: missing rhs")
        _validate_rhs(rhs, variables, where)

    points = None
    if kind == "transform-rule":
        rule = data.get("rule")
        if not isinstance(rule, str):
            raise CatalogError(f"{where}: transform-rule needs a rule name")
        if data.get("points") is not None:
            points = tuple(data["points"])
            for pt in points:
                if set(pt) != {"a", "b", "z"}:
                    raise CatalogError(f"{where}: split points need a, b, z")

    b_values = None
    if kind == "proof-chain":
        chain = data.get("chain")
        if not isinstance(chain, str):
            raise CatalogError(f"{where}: proof-chain needs a chain name")
        if data.get("b") is not None:
            b_values = tuple(rational(x) for x in data["b"])

    return IdentityRecord(
        id=rid,
        kind=kind,
        source=data.get("source", ""),
        digits=digits,
        lhs=lhs,
        rhs=rhs,
        parameters=parameters,
        rule=data.get("rule"),
        samples=data.get("samples"),
        seed=data.get("seed"),
        points=points,
        chain=data.get("chain"),
        b_values=b_values,
    )


def catalog_load(path: str | Path) -> list[IdentityRecord]:
    """Load and validate a catalog file; raises CatalogError with the
    offending record named."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise CatalogError(f"catalog file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise CatalogError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise CatalogError(f"{path}: top level must be an object")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise CatalogError(
            f"{path}: schema_version must be {SCHEMA_VERSION}, "
            f"got {data.get('schema_version')!r}"
        )
    unknown = set(data) - {"schema_version", "records"}
    if unknown:
        raise CatalogError(f"{path}: unknown top-level fields {sorted(unknown)}")
    records = [
        _parse_record(r, i) for i, r in enumerate(data.get("records", []))
    ]
    seen: dict[str, int] = {}
    for i, r in enumerate(records):
        if r.id in seen:
            raise CatalogError(
                f"duplicate id {r.id!r} (records #{seen[r.id]} and #{i})"
            )
        seen[r.id] = i
    return records


# ---------------------------------------------------------------------------
# deterministic samplers for the random parametric families


def _rand_fraction(rng: random.Random, lo: Fraction, hi: Fraction, den_max: int = 24) -> Fraction:
    den = rng.randint(2, den_max)
    lo_n = int(lo * den) + 1
    hi_n = int(hi * den) - 1
    if hi_n < lo_n:
        lo_n = hi_n = int((lo + hi) / 2 * den)
    return Fraction(rng.randint(lo_n, hi_n), den)


def _sample_gauss(rng: random.Random) -> dict[str, Fraction]:
    a = _rand_fraction(rng, Fraction(-3, 2), Fraction(3, 2))
    b = _rand_fraction(rng, Fraction(1, 8), Fraction(3, 2))
    gap = _rand_fraction(rng, Fraction(1, 5), Fraction(2))
    c = b + max(a, Fraction(0)) + gap  # c > b > 0 and c - a - b >= gap > 1/10
    return {"a": a, "b": b, "c": c}


def _sample_gauss_second(rng: random.Random) -> dict[str, Fraction]:
    a = _rand_fraction(rng, Fraction(-1, 2), Fraction(2))
    b = _rand_fraction(rng, Fraction(-1, 2), Fraction(2))
    return {"a": a, "b": b}


def _sample_bailey(rng: random.Random) -> dict[str, Fraction]:
    while True:
        a = _rand_fraction(rng, Fraction(-3, 4), Fraction(3, 4))
        c = _rand_fraction(rng, Fraction(1, 2), Fraction(3))
        if c + a != 0:  # (c+a)/2 would sit exactly on a Gamma pole
            return {"a": a, "c": c}


def _sample_kummer(rng: random.Random) -> dict[str, Fraction]:
    a = _rand_fraction(rng, Fraction(1, 20), Fraction(19, 20), 20)
    b = _rand_fraction(rng, Fraction(1, 20), Fraction(19, 20), 20)
    return {"a": a, "b": b}


def _sample_gosper_quarter(rng: random.Random) -> dict[str, Fraction]:
    return {"b": _rand_fraction(rng, Fraction(-2), Fraction(5, 6), 24)}


SAMPLERS: dict[str, Callable[[random.Random], dict[str, Fraction]]] = {
    "gauss": _sample_gauss,
    "gauss-second": _sample_gauss_second,
    "bailey": _sample_bailey,
    "kummer": _sample_kummer,
    "gosper-quarter": _sample_gosper_quarter,
}


def _family_envs(record: IdentityRecord) -> list[dict[str, Fraction]]:
    params = record.parameters or {}
    if "grid" in params:
        axes: list[tuple[str, list[Fraction]]] = []
        for var in params["vars"]:
            spec = params["grid"][var]
            if isinstance(spec, dict):
                values = [Fraction(n) for n in range(int(spec["from"]), int(spec["to"]) + 1)]
            else:
                values = [rational(v) for v in spec]
            axes.append((var, values))
        envs: list[dict[str, Fraction]] = [{}]
        for var, values in axes:
            envs = [dict(e, **{var: v}) for e in envs for v in values]
        return envs
    sampler = SAMPLERS[params["sampler"]]
    rng = random.Random(params.get("seed", 0))
    count = int(params.get("count", 20))
    envs = []
    guard = 0
    while len(envs) < count:
        guard += 1
        if guard > 100 * count:
            raise CatalogError(f"sampler for {record.id} failed to produce samples")
        env = sampler(rng)
        if set(env) == set(params["vars"]):
            envs.append(env)
    return envs


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class ReportEntry:
    id: str
    verdict: str  # pass | fail | inconclusive | skipped
    digits: int | str | None
    seconds: float
    precision_digits: int
    detail: str = ""
    interval_lhs: str = ""
    interval_rhs: str = ""

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "verdict": self.verdict,
            "digits": self.digits,
            "seconds": round(self.seconds, 3),
            "precision_digits": self.precision_digits,
        }
        if self.detail:
            out["detail"] = self.detail
        if self.interval_lhs:
            out["interval_lhs"] = self.interval_lhs
            out["interval_rhs"] = self.interval_rhs
        return out


@dataclass(frozen=True)
class VerificationReport:
    entries: tuple[ReportEntry, ...]

    @property
    def counts(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "inconclusive": 0, "skipped": 0}
        for e in self.entries:
            out[e.verdict] += 1
        return out

    @property
    def exit_code(self) -> int:
        c = self.counts
        if c["fail"]:
            return EXIT_FAIL
        if c["inconclusive"]:
            return EXIT_INCONCLUSIVE
        return EXIT_PASS

    def to_text(self) -> str:
        lines = []
        for e in self.entries:
            digits = "exact" if e.digits == "exact" else (
                f"{e.digits} digits" if e.digits is not None else "-"
            )
            lines.append(
                f"{e.verdict.upper():12s} {e.id:32s} {digits:>12s} "
                f"({e.precision_digits}-digit run, {e.seconds:.2f}s)"
                + (f"  {e.detail}" if e.verdict != "pass" and e.detail else "")
            )
        c = self.counts
        lines.append(
            f"total: {len(self.entries)}  pass: {c['pass']}  fail: {c['fail']}  "
            f"inconclusive: {c['inconclusive']}  skipped: {c['skipped']}"
        )
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "entries": [e.to_json() for e in self.entries],
            "counts": self.counts,
            "exit_code": self.exit_code,
        }


def _interval_text(x: BigReal) -> str:
    return x.to_decimal()


def _eval_rhs(rhs: dict, env: dict[str, Fraction], prec: Precision) -> BigReal:
    (key, value), = rhs.items()
    if key == "gamma_expr":
        return ge_eval(_gamma_expr_template(value, env), prec)
    if key == "gamma_expr_sum":
        total = BigReal.from_int(0, prec.work_bits)
        for term in value:
            piece = ge_eval(_gamma_expr_template(term["expr"], env), prec)
            total = total + (piece if term["sign"] > 0 else -piece)
        return total
    if key == "rational":
        return BigReal.from_fraction(expr_eval(value, env), prec.work_bits)
    raise UnverifiableRecord(f"rhs kind {key!r} is not numeric")


def _exact_rhs_value(rhs: dict, env: dict[str, Fraction]) -> Fraction:
    value = rhs["exact_product"]
    base = expr_eval(value.get("pow_base", "1"), env)
    expo = expr_eval(value.get("pow_exp", "0"), env)
    if expo.denominator != 1:
        raise CatalogError("exact_product exponent must be an integer")
    out = base ** int(expo)
    pr = value.get("poch_ratio")
    if pr is not None:
        n = expr_eval(pr["n"], env)
        if n.denominator != 1 or n < 0:
            raise CatalogError("poch_ratio index must be a nonnegative integer")
        ratio = PochRatio(
            upper=tuple(rational(u) for u in pr["upper"]),
            lower=tuple(rational(l) for l in pr["lower"]),
        )
        out *= ratio.value(int(n))
    return out


def _lhs_instance(lhs: dict, env: dict[str, Fraction]) -> tuple[HypParams, Fraction]:
    p = HypParams(
        expr_eval(lhs["a"], env), expr_eval(lhs["b"], env), expr_eval(lhs["c"], env)
    )
    return p, expr_eval(lhs["z"], env)


def _verify_numeric_samples(
    record: IdentityRecord, envs: Sequence[dict[str, Fraction]], prec: Precision
) -> tuple[Verdict, int | None, str, str, str]:
    worst: Verdict = Verdict.EQUAL
    min_digits: int | None = None
    for env in envs:
        p, z = _lhs_instance(record.lhs, env)
        lhs_val = f21_eval(p, z, prec)
        rhs_val = _eval_rhs(record.rhs, env, prec)
        verdict = num_equal(lhs_val, rhs_val, prec)
        d = achieved_digits(lhs_val, rhs_val)
        if d is not None:
            min_digits = d if min_digits is None else min(min_digits, d)
        if verdict is Verdict.DISTINCT:
            at = ", ".join(f"{k}={rational_str(v)}" for k, v in env.items())
            return (
                Verdict.DISTINCT,
                min_digits,
                f"distinct at {at}" if at else "intervals disjoint",
                _interval_text(lhs_val),
                _interval_text(rhs_val),
            )
        if verdict is Verdict.INCONCLUSIVE:
            worst = Verdict.INCONCLUSIVE
    return worst, min_digits, "", "", ""


def _verify_exact_family(
    record: IdentityRecord, envs: Sequence[dict[str, Fraction]]
) -> tuple[Verdict, str]:
    for env in envs:
        p, z = _lhs_instance(record.lhs, env)
        got = f21_terminating(p, z)
        want = _exact_rhs_value(record.rhs, env)
        if got != want:
            at = ", ".join(f"{k}={rational_str(v)}" for k, v in env.items())
            return Verdict.DISTINCT, (
                f"exact mismatch at {at}: {rational_str(got)} != {rational_str(want)}"
            )
    return Verdict.EQUAL, ""


def _rule_sample_params(rule_name: str, rng: random.Random) -> HypParams:
    if rule_name == "euler":
        return HypParams(
            Fraction(rng.randint(-8, 8), 4),
            Fraction(rng.randint(-8, 8), 4),
            Fraction(rng.randint(1, 12), 4),
        )
    if rule_name == "quadratic-c-2b":
        b = Fraction(rng.randint(1, 12), 8)
        return HypParams(Fraction(rng.randint(-8, 8), 8), b, 2 * b)
    if rule_name == "quadratic-mean":
        a = Fraction(rng.randint(1, 10), 8)
        b = Fraction(rng.randint(1, 10), 8)
        return HypParams(a, b, (a + b + 1) / 2)
    if rule_name == "cubic":
        a = Fraction(rng.randint(1, 12), 16)
        return HypParams(a, a + Fraction(1, 2), (4 * a + 5) / 6)
    raise UnverifiableRecord(f"no parameter sampler for rule {rule_name!r}")


def _verify_rule_record(
    record: IdentityRecord, prec: Precision
) -> tuple[Verdict, int | None, str, str, str]:
    if record.rule == "zj-split":
        worst = Verdict.EQUAL
        for pt in record.points or ():
            verdict = verify_zj_split(
                rational(pt["a"]), rational(pt["b"]), rational(pt["z"]), prec
            )
            if verdict is Verdict.DISTINCT:
                return verdict, None, f"split distinct at {pt}", "", ""
            if verdict is Verdict.INCONCLUSIVE:
                worst = Verdict.INCONCLUSIVE
        return worst, None, "", "", ""
    if record.rule not in RULES:
        raise UnverifiableRecord(f"unknown transform rule {record.rule!r}")
    rule = RULES[record.rule]
    rng = random.Random(record.seed or 0)
    lo, hi = rule.sample_region
    worst = Verdict.EQUAL
    min_digits: int | None = None
    for _ in range(record.samples or 20):
        w = lo + (hi - lo) * Fraction(rng.randint(1, 79), 80)
        if w == 0:
            continue
        p = _rule_sample_params(record.rule, rng)
        term = HypTerm((), p, RatFunc.x())
        out = apply_rule(rule, term)
        lhs_val = f21_eval(p, w, prec, cross_check=False)
        rhs_val = out.evaluate(w, prec)
        verdict = num_equal(lhs_val, rhs_val, prec)
        d = achieved_digits(lhs_val, rhs_val)
        if d is not None:
            min_digits = d if min_digits is None else min(min_digits, d)
        if verdict is Verdict.DISTINCT:
            return (
                verdict,
                min_digits,
                f"rule {record.rule} unsound at params "
                f"({rational_str(p.a)},{rational_str(p.b)};{rational_str(p.c)}), "
                f"w={rational_str(w)}",
                _interval_text(lhs_val),
                _interval_text(rhs_val),
            )
        if verdict is Verdict.INCONCLUSIVE:
            worst = Verdict.INCONCLUSIVE
    return worst, min_digits, "", "", ""


def _verify_chain_record(
    record: IdentityRecord, prec: Precision
) -> tuple[Verdict, int | None, str]:
    if record.chain == "main-derivation":
        trace = derive_main(prec)
        return trace.verdict, trace.agreement_digits, ""
    if record.chain == "gosper-proof":
        worst = Verdict.EQUAL
        for b in record.b_values or (Fraction(5, 8),):
            verdicts = verify_gosper_proof(b, prec)
            for step, verdict in verdicts.items():
                if verdict is Verdict.DISTINCT:
                    return verdict, None, f"step {step} distinct at b={rational_str(b)}"
                if verdict is Verdict.INCONCLUSIVE:
                    worst = Verdict.INCONCLUSIVE
        return worst, None, ""
    raise UnverifiableRecord(f"unknown proof chain {record.chain!r}")


def _verify_once(record: IdentityRecord, prec: Precision) -> ReportEntry:
    start = time.perf_counter()
    verdict_map = {
        Verdict.EQUAL: "pass",
        Verdict.DISTINCT: "fail",
        Verdict.INCONCLUSIVE: "inconclusive",
    }
    digits: int | str | None = None
    detail = lhs_text = rhs_text = ""
    try:
        if record.kind == "point-evaluation":
            v, digits, detail, lhs_text, rhs_text = _verify_numeric_samples(
                record, [{}], prec
            )
        elif record.kind == "parametric-family":
            envs = _family_envs(record)
            if next(iter(record.rhs)) == "exact_product":
                v, detail = _verify_exact_family(record, envs)
                digits = "exact"
            else:
                v, digits, detail, lhs_text, rhs_text = _verify_numeric_samples(
                    record, envs, prec
                )
        elif record.kind == "transform-rule":
            v, digits, detail, lhs_text, rhs_text = _verify_rule_record(record, prec)
        elif record.kind == "proof-chain":
            v, digits, detail = _verify_chain_record(record, prec)
        else:  # pragma: no cover - load() rejects unknown kinds
            raise UnverifiableRecord(record.kind)
    except UnverifiableRecord as e:
        return ReportEntry(
            record.id, "skipped", None, time.perf_counter() - start,
            prec.target_digits, detail=str(e),
        )
    except (HyperError, MPRealError, TransformError, DerivationError, CatalogError) as e:
        return ReportEntry(
            record.id, "fail", None, time.perf_counter() - start,
            prec.target_digits, detail=f"{type(e).__name__}: {e}",
        )
    return ReportEntry(
        record.id,
        verdict_map[v],
        digits,
        time.perf_counter() - start,
        prec.target_digits,
        detail=detail,
        interval_lhs=lhs_text,
        interval_rhs=rhs_text,
    )


def verify_identity(record: IdentityRecord, prec: Precision) -> ReportEntry:
    """Verify one record; an inconclusive result is retried once at doubled
    precision before being reported."""
    entry = _verify_once(record, prec)
    if entry.verdict == "inconclusive":
        retry = _verify_once(record, Precision.of(2 * prec.target_digits))
        if retry.verdict != "inconclusive":
            return retry
        return ReportEntry(
            retry.id, "inconclusive", retry.digits,
            entry.seconds + retry.seconds, retry.precision_digits,
            detail=(retry.detail + " (after doubled-precision retry)").strip(),
        )
    return entry


def record_precision(record: IdentityRecord, default_digits: int) -> Precision:
    """Per-record pins override the run default."""
    return Precision.of(record.digits if record.digits else default_digits)


def run_all(
    catalog: str | Path | Sequence[IdentityRecord],
    digits: int = DEFAULT_DIGITS,
    jobs: int = 1,
    only: str | None = None,
) -> VerificationReport:
    """Verify a catalog and return a deterministic, id-ordered report."""
    if isinstance(catalog, (str, Path)):
        records = catalog_load(catalog)
    else:
        records = list(catalog)
    if only is not None:
        records = [r for r in records if r.id == only]
        if not records:
            raise CatalogError(f"no record with id {only!r}")

    def job(record: IdentityRecord) -> ReportEntry:
        return verify_identity(record, record_precision(record, digits))

    if jobs > 1 and len(records) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(job, records))
    else:
        entries = [job(r) for r in records]
    entries.sort(key=lambda e: e.id)
    return VerificationReport(tuple(entries))
