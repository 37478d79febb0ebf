"""Closed-form amplification schedules and sample counts.

Everything here is a pure function of the input dimension and circuit
parameters: initial angles, the maximum useful number of amplification
rounds, per-stage measurement budgets, the powers-of-two stage lists used
by the trainers, pre-amplification parameters for the k-junta circuit,
and the sample-count ratio curves against the coupon-collector baseline.

Shot counts are rounded up (a shot is indivisible) and floored at 5, which
keeps the (1/2)**5 <= 0.05 bound on stopping while misclassified inputs
remain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class StagePlan:
    """One schedule stage: m amplification rounds, then `shots` measurements."""

    m: int
    shots: int


@dataclass(frozen=True, slots=True)
class Schedule:
    variant: str  # "naive" | "generic" | "refined(m0)" | "junta(k)"
    n: int
    stages: tuple[StagePlan, ...]

    @property
    def m_list(self) -> list[int]:
        return [s.m for s in self.stages]

    @property
    def total_shots(self) -> int:
        return sum(s.shots for s in self.stages)


@dataclass(frozen=True, slots=True)
class PreampPlan:
    """Amplification of the inputs with Hamming weight at most k."""

    k: int
    n_leq_k: int  # number of such inputs
    phi: float  # initial angle, arcsin(sqrt(n_leq_k / 2**n))
    p_leq_k: int  # diffusion iterations


def _argmin_rounds(theta: float) -> int:
    """argmin over m of |(2m+1)*theta - pi/2|, ties broken toward smaller m."""
    best_m, best_v = 0, abs(theta - math.pi / 2)
    for m in range(1, math.ceil(math.pi / (4 * theta)) + 3):
        v = abs((2 * m + 1) * theta - math.pi / 2)
        if v < best_v:
            best_m, best_v = m, v
    return best_m


def theta_min(n: int) -> float:
    """Initial angle at the smallest non-zero error rate: arcsin(2**(-n/2))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.asin(2 ** (-n / 2))


def m_max(n: int) -> int:
    """Rounds bringing the smallest non-zero error amplitude closest to 1."""
    return _argmin_rounds(theta_min(n))


def _shots(n_expected: float) -> int:
    """ceil(max(5, N*ln N)) measurements for an expected N marked inputs."""
    if n_expected <= 0:
        return 5
    return math.ceil(max(5.0, n_expected * math.log(n_expected)))


def generic_stage(n: int, m: int) -> StagePlan:
    """Stage plan at m rounds: N_m = sin^2(pi/(2(2m+3))) * 2**n marked inputs."""
    if not 0 <= m <= m_max(n):
        raise ValueError(f"m={m} out of range [0, {m_max(n)}] for n={n}")
    n_m = math.sin(math.pi / (2 * (2 * m + 3))) ** 2 * 2**n
    return StagePlan(m, _shots(n_m))


def _pow2_mlist(start: int, last: int) -> list[int]:
    """start, then powers of two strictly above it, capped and ended by last."""
    ms = [start]
    p = 1
    while p <= start:
        p *= 2
    while p < last:
        ms.append(p)
        p *= 2
    if last > start:
        ms.append(last)
    return ms


def generic_schedule(n: int) -> Schedule:
    """Powers-of-two stage list [0, 1, 2, 4, ...] capped by m_max(n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ms = _pow2_mlist(0, m_max(n))
    return Schedule("generic", n, tuple(generic_stage(n, m) for m in ms))


def theta_m0(m0: int) -> float:
    """Rotation angle of the second-ancilla gate: pi / (2(2*m0+1))."""
    if m0 < 0:
        raise ValueError("m0 must be >= 0")
    return math.pi / (2 * (2 * m0 + 1))


def refined_params(n: int, m0: int) -> tuple[float, int]:
    """(theta_min_m0, m_max_m0) for the two-ancilla circuit.

    theta_min_m0 = arcsin(sin(theta_m0) / sqrt(2**n)) is the angle at the
    smallest non-zero marked probability; m_max_m0 the matching round cap.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    t = math.asin(math.sin(theta_m0(m0)) / math.sqrt(2**n))
    return t, _argmin_rounds(t)


def _refined_stage_shots(n: int, m: int, m0: int) -> int:
    n_mm0 = math.sin(math.pi / (2 * (2 * m + 3))) ** 2 * 2**n / math.sin(theta_m0(m0)) ** 2
    return _shots(n_mm0)


def refined_schedule(n: int, m0: int) -> Schedule:
    """Stage list [m0, next powers of two, ..., m_max_m0] with shot budgets.

    m0 = 0 degenerates to the generic powers-of-two schedule.
    """
    _, last = refined_params(n, m0)
    ms = _pow2_mlist(m0, last)
    stages = tuple(StagePlan(m, _refined_stage_shots(n, m, m0)) for m in ms)
    return Schedule(f"refined({m0})", n, stages)


def S_m0_total(n: int, m0: int) -> int:
    """Total measurements of one update phase of the two-ancilla trainer."""
    return refined_schedule(n, m0).total_shots


def naive_sample_count(n: int) -> int:
    """Coupon-collector budget floor(2**n * ln(2**n)) of the naive trainer."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.floor(2**n * math.log(2**n))


def naive_schedule(n: int) -> Schedule:
    return Schedule("naive", n, (StagePlan(0, naive_sample_count(n)),))


def junta_schedule(n: int, k: int) -> Schedule:
    """k-junta stage list: the refined(m0=2) m-list with 2**k shots per stage."""
    if not 1 <= k < n:
        raise ValueError(f"junta arity must satisfy 1 <= k < n, got k={k}, n={n}")
    ms = refined_schedule(n, 2).m_list
    return Schedule(f"junta({k})", n, tuple(StagePlan(m, 2**k) for m in ms))


def preamp_plan(n: int, k: int) -> PreampPlan:
    """Iteration count to concentrate mass on inputs of weight at most k."""
    if not 1 <= k < n:
        raise ValueError(f"junta arity must satisfy 1 <= k < n, got k={k}, n={n}")
    n_leq_k = sum(math.comb(n, j) for j in range(k + 1))
    phi = math.asin(math.sqrt(n_leq_k / 2**n))
    return PreampPlan(k, n_leq_k, phi, _argmin_rounds(phi))


def figure_ratios(
    n_values: list[int] | range, mode: str, m0: int | None = None
) -> list[tuple[int, float]]:
    """Per-phase sample counts relative to the coupon-collector baseline.

    mode "inc1" sums every stage m in [0, m_max]; "pow2" sums the
    powers-of-two stage list; "refined" sums the two-ancilla schedule for
    the given m0.
    """
    rows = []
    for n in n_values:
        if mode == "inc1":
            total = sum(generic_stage(n, m).shots for m in range(m_max(n) + 1))
        elif mode == "pow2":
            total = generic_schedule(n).total_shots
        elif mode == "refined":
            if m0 is None:
                raise ValueError("refined mode needs m0")
            total = S_m0_total(n, m0)
        else:
            raise ValueError(f"unknown mode {mode!r}")
        rows.append((n, total / naive_sample_count(n)))
    return rows
