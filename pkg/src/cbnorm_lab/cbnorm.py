"""Sandwich bounds for the completely bounded norm of a holomorphic function.

The lower bound maximizes the amplified norm over sampled-and-ascended
matrices at a sparse schedule of levels, with zero-padding used to transfer
witnesses upward (padding cannot change the amplified norm because every
function vanishes at 0).  The upper bound is the minimum over certified
analytic rules: exact coefficient sums, quotient and geometric-functional
bounds, and product/sum/scale combination rules.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from . import holofun, matcore, opspace
from ._search import Budget, ascend
from .errors import InvalidInputError, SandwichViolationError
from .holofun import (
    Blaschke,
    Composite,
    GeometricPhi,
    HoloFunction,
    MoebiusQuotient,
    PowerSeries,
    Product,
    Scale,
    Sum,
)

# Search stays strictly inside the open ball while approaching the supremum.
RADIUS_CAP = 1.0 - 1e-6
DEFAULT_LEVELS = (1, 2, 4, 8)

_WIENER_TRUNCATION = 256
# Allowance for Fourier extraction error in coefficient-sum bounds.
_WIENER_PAD = _WIENER_TRUNCATION * 1e-9


@dataclass(frozen=True)
class Witness:
    """A feasible matrix certifying a lower bound at one level."""

    level: int
    matrix: object  # ndarray for disk functions, OpSpaceMatrix over a space
    value: float


@dataclass(frozen=True)
class LevelEntry:
    value: float
    witness: Witness
    samples: int


@dataclass(frozen=True)
class CbEstimate:
    lower: float
    upper: float | None
    level_table: dict
    seed: int
    budget: int
    provenance: str


def serialize_matrix(mat) -> str:
    """Canonical string form used for deterministic tie-breaking."""
    if isinstance(mat, opspace.OpSpaceMatrix):
        arr = mat.entries
    else:
        arr = np.asarray(mat)
    flat = [[float(v.real), float(v.imag)] for v in arr.ravel()]
    return json.dumps([list(arr.shape), flat], separators=(",", ":"))


def _encode(arr: np.ndarray) -> np.ndarray:
    return np.concatenate([arr.real.ravel(), arr.imag.ravel()])


def _decode(vec: np.ndarray, shape) -> np.ndarray:
    half = vec.size // 2
    return (vec[:half] + 1j * vec[half:]).reshape(shape)


def _disk_problem(f: HoloFunction, m: int):
    shape = (m, m)

    def objective(vec):
        z = _decode(vec, shape)
        nrm = matcore.operator_norm(z)
        if nrm > RADIUS_CAP:
            z = z * (RADIUS_CAP / nrm)
        return matcore.operator_norm(holofun._eval_array(f, z))

    def project(vec):
        return _encode(matcore.project_ball(_decode(vec, shape), RADIUS_CAP))

    def start(rng, radius):
        return _encode(matcore._random_ball(rng, m, radius))

    def witness_matrix(vec):
        return _decode(vec, shape)

    return objective, project, start, witness_matrix


def _space_problem(f: HoloFunction, m: int):
    space = f.domain_space
    d, amb = space.dim, space.ambient
    shape = (m, m, d)
    flat_basis = np.ascontiguousarray(space.basis.reshape(d, amb * amb))

    def realized_norm(entries):
        blocks = (entries.reshape(m * m, d) @ flat_basis).reshape(m, m, amb, amb)
        return matcore.operator_norm(
            blocks.transpose(0, 2, 1, 3).reshape(m * amb, m * amb)
        )

    def objective(vec):
        entries = _decode(vec, shape)
        nrm = realized_norm(entries)
        if nrm > RADIUS_CAP:
            entries = entries * (RADIUS_CAP / nrm)
        return matcore.operator_norm(holofun._amplify_space_entries(f, entries))

    def project(vec):
        entries = _decode(vec, shape)
        nrm = realized_norm(entries)
        if nrm > RADIUS_CAP:
            entries = entries * (RADIUS_CAP / nrm)
        return _encode(entries)

    def start(rng, radius):
        return _encode(opspace._random_matrix_ball(rng, space, m, radius).entries)

    def witness_matrix(vec):
        return opspace.OpSpaceMatrix(space, _decode(vec, shape))

    return objective, project, start, witness_matrix


def level_sup(f: HoloFunction, m: int, budget: int, seed) -> Witness:
    """Best found amplified norm over the level-m ball of radius 1 − 1e-6.

    Always a valid lower bound for the level-m supremum; budget counts
    objective evaluations across random restarts.
    """
    if m < 1:
        raise InvalidInputError("level must be >= 1")
    if budget < 1:
        raise InvalidInputError("budget must be >= 1")
    matcore.check_seed(seed)
    if f.domain_space is None:
        objective, project, start, witness_matrix = _disk_problem(f, m)
    else:
        objective, project, start, witness_matrix = _space_problem(f, m)

    state = Budget(budget)
    best_value = -np.inf
    best_vec = None
    restart = 0
    while state.left > 0:
        rng = matcore.derive_rng(seed, m, restart)
        u = float(rng.uniform(0.0, 1.0))
        radius = RADIUS_CAP * (1.0 - 0.999 * u * u)
        vec, value = ascend(objective, start(rng, radius), project, state)
        if vec is not None:
            if value > best_value:
                best_value, best_vec = value, vec
            elif value == best_value and best_vec is not None:
                if _tie_key(witness_matrix(vec)) < _tie_key(witness_matrix(best_vec)):
                    best_vec = vec
        restart += 1
    mat = witness_matrix(best_vec)
    return Witness(level=m, matrix=mat, value=float(best_value))


def _tie_key(mat) -> str:
    return serialize_matrix(mat)


def witness_value(f: HoloFunction, w: Witness) -> float:
    """Recompute the amplified norm at a stored witness."""
    return matcore.operator_norm(holofun.amplify(f, w.matrix))


def lift_witness(w: Witness) -> Witness:
    """Pad the witness with one zero row/column: same value, level + 1."""
    if isinstance(w.matrix, opspace.OpSpaceMatrix):
        m, d = w.matrix.level, w.matrix.space.dim
        padded = np.zeros((m + 1, m + 1, d), dtype=np.complex128)
        padded[:m, :m] = w.matrix.entries
        mat = opspace.OpSpaceMatrix(w.matrix.space, padded)
    else:
        mat = np.pad(np.asarray(w.matrix), ((0, 1), (0, 1)))
    return Witness(level=w.level + 1, matrix=mat, value=w.value)


def _lift_to(w: Witness, level: int) -> Witness:
    while w.level < level:
        w = lift_witness(w)
    return w


def _lower_table(f: HoloFunction, levels, budget: int, seed) -> dict:
    # level_sup restarts until its per-level budget is gone, so each level
    # spends exactly `budget` evaluations.
    table = {}
    running = None
    for m in levels:
        w = level_sup(f, m, budget, seed)
        if running is not None and running.value > w.value:
            w = _lift_to(running, m)
        elif running is not None and running.value == w.value:
            lifted = _lift_to(running, m)
            if _tie_key(lifted.matrix) < _tie_key(w.matrix):
                w = lifted
        running = w
        table[m] = LevelEntry(value=w.value, witness=w, samples=budget)
    return table


def cb_lower_bound(f: HoloFunction, max_level: int, budget: int, seed) -> CbEstimate:
    """Max of level sups over the schedule (1, 2, 4, 8) capped at max_level,
    with zero-pad lifting keeping the level table nondecreasing."""
    if max_level < 1:
        raise InvalidInputError("max_level must be >= 1")
    levels = [m for m in DEFAULT_LEVELS if m <= max_level]
    table = _lower_table(f, levels, budget, seed)
    lower = max(entry.value for entry in table.values())
    provenance = (
        f"lower: projected-ascent level sups at levels {levels}, "
        f"budget {budget} per level, radius cap {RADIUS_CAP}"
    )
    return CbEstimate(
        lower=float(lower),
        upper=None,
        level_table=table,
        seed=int(seed),
        budget=int(budget),
        provenance=provenance,
    )


# ---------------------------------------------------------------------------
# Certified upper bounds


def _wiener_bound(f: HoloFunction) -> float | None:
    tc = holofun.taylor_coefficients(f, _WIENER_TRUNCATION)
    if tc.tail_bound is None:
        return None
    return float(np.sum(np.abs(tc.coeffs))) + tc.tail_bound + _WIENER_PAD


def _upper_rules(f: HoloFunction):
    """Minimum over the certified rules that apply to the variant.

    Returns (bound or None, description of the winning rule).
    """
    if isinstance(f, PowerSeries):
        return float(np.sum(np.abs(f.coeffs))), "coefficient-sum (exact polynomial)"
    if isinstance(f, Blaschke):
        if f.zeros.size == 0:
            return 1.0, "coefficient-sum (monomial)"
        candidates = []
        wiener = _wiener_bound(f)
        if wiener is not None:
            candidates.append((wiener, "coefficient-sum (fourier + cauchy tail)"))
        expanded, _ = _upper_rules(holofun.rescale_argument(f, 1.0))
        if expanded is not None:
            candidates.append((expanded, "expanded numerator over quotient factors"))
        if not candidates:
            return None, "no certified rule"
        return min(candidates, key=lambda c: c[0])
    if isinstance(f, MoebiusQuotient):
        inner, _ = _upper_rules(f.inner)
        if inner is None:
            return None, "no certified rule (inner unknown)"
        return inner / (1.0 - abs(f.a)), "quotient rule inner/(1-|a|)"
    if isinstance(f, GeometricPhi):
        r = f.certified_norm
        return r / (1.0 - r), "geometric functional r/(1-r)"
    if isinstance(f, Composite):
        r = f.certified_norm
        if r == 0.0:
            return 0.0, "composite with zero functional"
        bound, rule = _upper_rules(holofun.rescale_argument(f.scalar, r))
        if bound is None:
            return None, "no certified rule (rescaled scalar part unknown)"
        return bound, f"composite via rescaled scalar part [{rule}]"
    if isinstance(f, Product):
        lb, _ = _upper_rules(f.left)
        rb, _ = _upper_rules(f.right)
        if lb is None or rb is None:
            return None, "no certified rule (factor unknown)"
        return lb * rb, "product of factor bounds"
    if isinstance(f, Sum):
        lb, _ = _upper_rules(f.left)
        rb, _ = _upper_rules(f.right)
        if lb is None or rb is None:
            return None, "no certified rule (summand unknown)"
        return lb + rb, "sum of summand bounds"
    if isinstance(f, Scale):
        inner, rule = _upper_rules(f.inner)
        if inner is None:
            return None, "no certified rule (inner unknown)"
        return abs(f.c) * inner, f"scaled [{rule}]"
    return None, "no certified rule"


def cb_upper_bound(f: HoloFunction) -> float | None:
    """Certified upper bound for the cb norm, or None when no rule applies."""
    bound, _ = _upper_rules(f)
    return bound


def sandwich(f: HoloFunction, max_level: int, budget: int, seed) -> CbEstimate:
    """Both bounds, with the consistency check lower <= upper + 1e-6."""
    est = cb_lower_bound(f, max_level, budget, seed)
    upper, rule = _upper_rules(f)
    if upper is not None and est.lower > upper + 1e-6:
        raise SandwichViolationError(
            f"lower bound {est.lower} exceeds certified upper bound {upper}; "
            "one of the two computations is wrong"
        )
    return replace(
        est,
        upper=upper,
        provenance=est.provenance + f"; upper: {rule}" + ("" if upper is None else f" = {upper}"),
    )


# ---------------------------------------------------------------------------
# Property checks


@dataclass(frozen=True)
class CheckReport:
    name: str
    passed: bool
    trials: int
    worst_slack: float
    detail: str


def schwarz_check(f: HoloFunction, estimate: CbEstimate, trials: int, seed) -> CheckReport:
    """Sample (level, X) pairs and test ‖f_m(X)‖ <= upper·‖X‖ + 1e-8."""
    if estimate.upper is None:
        raise InvalidInputError("schwarz check needs an estimate with a finite upper bound")
    if trials < 1:
        raise InvalidInputError("trials must be >= 1")
    upper = float(estimate.upper)
    space = f.domain_space
    worst = np.inf
    worst_detail = ""
    failures = 0
    for t in range(int(trials)):
        rng = matcore.derive_rng(seed, t)
        m = int(rng.integers(1, 5))
        radius = float(rng.uniform(0.05, RADIUS_CAP))
        if space is None:
            x = matcore._random_ball(rng, m, radius)
        else:
            x = opspace._random_matrix_ball(rng, space, m, radius)
        actual = matcore.operator_norm(holofun.amplify(f, x))
        slack = upper * radius - actual
        if slack < worst:
            worst = slack
            worst_detail = f"level {m}, radius {radius:.6f}, amplified norm {actual:.12f}"
        if actual > upper * radius + 1e-8:
            failures += 1
    return CheckReport(
        name="schwarz",
        passed=failures == 0,
        trials=int(trials),
        worst_slack=float(worst),
        detail=f"{failures} violations; tightest trial: {worst_detail}",
    )


def algebra_check(f: HoloFunction, g: HoloFunction, max_level: int, budget: int, seed) -> CheckReport:
    """Test the algebra inequality lower(f·g) <= upper(f)·upper(g) + 1e-6."""
    uf = cb_upper_bound(f)
    ug = cb_upper_bound(g)
    if uf is None or ug is None:
        return CheckReport(
            name="algebra",
            passed=True,
            trials=0,
            worst_slack=np.inf,
            detail="vacuous: a factor has no certified upper bound",
        )
    lower = cb_lower_bound(Product(f, g), max_level, budget, seed).lower
    slack = uf * ug - lower
    return CheckReport(
        name="algebra",
        passed=lower <= uf * ug + 1e-6,
        trials=1,
        worst_slack=float(slack),
        detail=f"lower(product) = {lower:.12f} vs bound product {uf * ug:.12f}",
    )


@dataclass(frozen=True)
class ProbeReport:
    levels: tuple
    values: tuple
    slope: float
    relative_growth: float
    verdict: str
    note: str


def question_probe(f: HoloFunction, max_level: int, budget: int, seed, schedule=None) -> ProbeReport:
    """Level-sup growth table with a least-squares trend on value vs log(level).

    The verdict is HEURISTIC EVIDENCE about boundedness of the amplified sups,
    never a proof in either direction.
    """
    if f.domain_space is not None:
        raise InvalidInputError("growth probe applies to disk-domain functions")
    if schedule is None:
        schedule = [m for m in DEFAULT_LEVELS if m <= max_level]
    levels = sorted(set(int(m) for m in schedule))
    if not levels or levels[0] < 1:
        raise InvalidInputError("schedule must contain positive levels")
    table = _lower_table(f, levels, budget, seed)
    values = [table[m].value for m in levels]
    if len(levels) < 2:
        slope = 0.0
        rel = 0.0
        verdict = "inconclusive"
    else:
        logs = np.log(np.asarray(levels, dtype=float))
        slope = float(np.polyfit(logs, np.asarray(values), 1)[0])
        span = slope * (logs[-1] - logs[0])
        rel = float(span / max(max(values), 1e-12))
        if rel <= 0.02:
            verdict = "bounded"
        elif rel >= 0.15:
            verdict = "growing"
        else:
            verdict = "inconclusive"
    return ProbeReport(
        levels=tuple(levels),
        values=tuple(float(v) for v in values),
        slope=slope,
        relative_growth=rel,
        verdict=verdict,
        note="HEURISTIC EVIDENCE from finite sampling; not a proof",
    )
