"""Finite-n certification of the recurrence argument for symmetric walks.

For a symmetric law with m2 = E|X|^2 > 0 and n >= 1 the checks are

    V1  E|S_n|^2 == n * m2
    V2  P[S_2n = 0] == sum_x P[S_n = x]^2
    V3  P[S_n in B_n] >= 1/2,   B_n = {x : |x|^2 < 2 n m2}
    V4  P[S_2n = 0] >= P[S_n in B_n]^2 / |B_n|
    V5  P[S_2n = 0] >= 1 / (4 |B_n|)

plus the two-walk reduction: P[S1_n = S2_n] == P[D_n = 0] where D is driven by
the difference law. Every flag is an exact rational comparison.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from .engine import (
    DEFAULT_EXACT_CAP,
    ExactDist,
    ball_points,
    exact_power,
    iter_exact,
    mass_in_ball,
    origin_convolution,
    return_prob,
    return_series,
    second_moment_of_dist,
    sum_of_squares,
)
from .errors import AsymmetricLaw, ZeroSecondMoment
from .lattice import ORIGIN, StepLaw, difference_law, is_symmetric, law_to_json, second_moment

CHECKS = ("v1", "v2", "v3", "v4", "v5")


@dataclass(frozen=True)
class VerificationRecord:
    n: int
    v1_moment_ok: bool
    v2_symmetry_identity_ok: bool
    v3_markov_mass: Fraction
    v3_ok: bool
    v4_cs_bound: Fraction
    v4_ok: bool
    v5_floor: Fraction
    v5_ok: bool
    p_return_2n: Fraction
    ball_size: int
    ball_ratio: float

    @property
    def flags(self) -> Dict[str, bool]:
        return {"v1": self.v1_moment_ok, "v2": self.v2_symmetry_identity_ok,
                "v3": self.v3_ok, "v4": self.v4_ok, "v5": self.v5_ok}

    @property
    def ok(self) -> bool:
        return all(self.flags.values())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "v1_moment_ok": self.v1_moment_ok,
            "v2_symmetry_identity_ok": self.v2_symmetry_identity_ok,
            "v3_markov_mass": _rational(self.v3_markov_mass),
            "v3_ok": self.v3_ok,
            "v4_cs_bound": _rational(self.v4_cs_bound),
            "v4_ok": self.v4_ok,
            "v5_floor": _rational(self.v5_floor),
            "v5_ok": self.v5_ok,
            "p_return_2n": _rational(self.p_return_2n),
            "ball_size": self.ball_size,
            "ball_ratio": self.ball_ratio,
        }


@dataclass(frozen=True)
class ReductionReport:
    law: StepLaw
    diff_law: StepLaw
    symmetric_ok: bool
    equality_ns: List[int]
    failed_ns: List[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.symmetric_ok and not self.failed_ns

    def to_json(self) -> dict:
        return {
            "law": law_to_json(self.law),
            "diff_law": law_to_json(self.diff_law),
            "symmetric_ok": self.symmetric_ok,
            "equality_ns": self.equality_ns,
            "failed_ns": self.failed_ns,
        }


@dataclass(frozen=True)
class AuditResult:
    """|B_n| <= K n for n <= n_max, and the certified floor P[S_2n = 0] >= C / (4n)."""

    K: float
    C: float
    K_exact: Fraction
    n_max: int
    ok: bool
    first_failure: Optional[int]

    def to_json(self) -> dict:
        return {"K": self.K, "C": self.C, "K_exact": _rational(self.K_exact),
                "n_max": self.n_max, "ok": self.ok, "first_failure": self.first_failure}


def _rational(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator)}


def _require_symmetric(law: StepLaw) -> None:
    if not is_symmetric(law):
        raise AsymmetricLaw("the check assumes X and -X have the same law")


def _require_m2(law: StepLaw) -> Fraction:
    m2 = second_moment(law)
    if m2 == 0:
        raise ZeroSecondMoment("E|X|^2 = 0: degenerate walk, B_n is undefined")
    return m2


# -- single-n checks -------------------------------------------------------------

def verify_moment_identity(law: StepLaw, n: int, cap: int = DEFAULT_EXACT_CAP) -> bool:
    _require_symmetric(law)
    return second_moment_of_dist(exact_power(law, n, cap)) == n * second_moment(law)


def verify_symmetry_identity(law: StepLaw, n: int, cap: int = DEFAULT_EXACT_CAP) -> bool:
    """P[S_2n = 0], from the full doubled distribution, against sum_x P[S_n = x]^2."""
    _require_symmetric(law)
    if n < 1:
        raise ValueError("n must be >= 1")
    dist = exact_power(law, n, cap)
    squares = Fraction(sum_of_squares(dist), law.denominator ** (2 * n))
    return return_prob(law, 2 * n, cap) == squares


def verify_markov_mass(law: StepLaw, n: int, cap: int = DEFAULT_EXACT_CAP) -> Tuple[Fraction, bool]:
    _require_symmetric(law)
    m2 = _require_m2(law)
    mass = mass_in_ball(exact_power(law, n, cap), ball_points(n, m2))
    return mass, mass >= Fraction(1, 2)


def _record(dist: ExactDist, m2: Fraction, stepped_p2n: Optional[int] = None) -> VerificationRecord:
    """Checks V1..V5 at n = dist.n. ``stepped_p2n``, when known, is the numerator
    of P[S_2n = 0] from an independent stepping route and must agree too."""
    n = dist.n
    den2 = dist.denominator ** 2
    # Origin of the self-convolution: sum_x P[S_n = x] P[S_n = -x]. No symmetry used.
    p2n_num = int(origin_convolution(dist, dist))
    p2n = Fraction(p2n_num, den2)
    v1 = second_moment_of_dist(dist) == n * m2
    v2 = sum_of_squares(dist) == p2n_num
    if stepped_p2n is not None:
        v2 = v2 and stepped_p2n == p2n_num
    ball = ball_points(n, m2)
    size = len(ball)
    mass = mass_in_ball(dist, ball)
    cs = mass * mass / size
    floor = Fraction(1, 4 * size)
    return VerificationRecord(
        n=n,
        v1_moment_ok=v1,
        v2_symmetry_identity_ok=v2,
        v3_markov_mass=mass,
        v3_ok=mass >= Fraction(1, 2),
        v4_cs_bound=cs,
        v4_ok=p2n >= cs,
        v5_floor=floor,
        v5_ok=p2n >= floor,
        p_return_2n=p2n,
        ball_size=size,
        ball_ratio=size / n,
    )


def verify_cs_chain(law: StepLaw, n: int, cap: int = DEFAULT_EXACT_CAP) -> VerificationRecord:
    _require_symmetric(law)
    m2 = _require_m2(law)
    if n < 1:
        raise ValueError("n must be >= 1")
    dist = exact_power(law, n, cap)
    stepped = exact_power(law, 2 * n, cap).numerator(ORIGIN)
    return _record(dist, m2, stepped)


# -- sweeps ------------------------------------------------------------------------

def verify_sweep(law: StepLaw, n_max: int, cap: int = DEFAULT_EXACT_CAP) -> List[VerificationRecord]:
    """Records for n = 1..n_max from a single stepping pass.

    Where 2n <= n_max, P[S_2n = 0] read off the stepped distribution is also
    compared with the self-convolution value inside the V2 flag.
    """
    _require_symmetric(law)
    m2 = _require_m2(law)
    origins: List[int] = []
    records: List[VerificationRecord] = []
    for dist in iter_exact(law, n_max, cap):
        origins.append(dist.numerator(ORIGIN))
        if dist.n:
            records.append(_record(dist, m2))
    for i, rec in enumerate(records):
        if 2 * rec.n > n_max:
            break
        stepped = Fraction(origins[2 * rec.n], law.denominator ** (2 * rec.n))
        if stepped != rec.p_return_2n:
            records[i] = replace(rec, v2_symmetry_identity_ok=False)
    return records


def summarize(records: Iterable[VerificationRecord], extra: Optional[dict] = None) -> dict:
    records = list(records)
    first: Dict[str, Optional[int]] = {c: None for c in CHECKS}
    for rec in records:
        for c, ok in rec.flags.items():
            if not ok and first[c] is None:
                first[c] = rec.n
    summary = {
        "summary": True,
        "records": len(records),
        "n_max": records[-1].n if records else 0,
        "first_failure": first,
        "all_pass": all(v is None for v in first.values()),
    }
    if extra:
        summary.update(extra)
    return summary


def records_to_jsonl(records: Iterable[VerificationRecord], summary: dict) -> str:
    lines = [json.dumps(r.to_json(), sort_keys=True) for r in records]
    lines.append(json.dumps(summary, sort_keys=True))
    return "\n".join(lines) + "\n"


def constant_audit(law: StepLaw, n_max: int, cap: int = DEFAULT_EXACT_CAP) -> AuditResult:
    """K = max_{n<=n_max} |B_n|/n, C = 1/K, and an exact check of
    P[S_2n = 0] >= C / (4n) for every n <= n_max."""
    _require_symmetric(law)
    m2 = _require_m2(law)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    K = max(Fraction(len(ball_points(n, m2)), n) for n in range(1, n_max + 1))
    C = 1 / K
    first_failure = None
    for dist in iter_exact(law, n_max, cap):
        if dist.n == 0:
            continue
        p2n = Fraction(int(origin_convolution(dist, dist)), dist.denominator ** 2)
        if p2n < C / (4 * dist.n) and first_failure is None:
            first_failure = dist.n
    return AuditResult(float(K), float(C), K, n_max, first_failure is None, first_failure)


def verify_reduction(law: StepLaw, n_max: int, cap: int = DEFAULT_EXACT_CAP) -> ReductionReport:
    """Two i.i.d. walks meet at time n exactly as often as the difference walk
    sits at 0: sum_x P[S_n = x]^2 == P[D_n = 0] for n = 0..n_max."""
    diff = difference_law(law)
    equal, failed = [], []
    for dist, ddist in zip(iter_exact(law, n_max, cap), iter_exact(diff, n_max, cap)):
        meet = Fraction(sum_of_squares(dist), dist.denominator ** 2)
        if meet == ddist.probability(ORIGIN):
            equal.append(dist.n)
        else:
            failed.append(dist.n)
    return ReductionReport(law, diff, is_symmetric(diff), equal, failed)


def divergence_increment(law: StepLaw, n_lo: int, n_hi: int, backend: str = "float") -> float:
    """partial_sum(n_hi) - partial_sum(n_lo) of the return-probability series."""
    rows = return_series(law, n_hi, backend)
    return rows[n_hi].partial_sum - rows[n_lo].partial_sum
