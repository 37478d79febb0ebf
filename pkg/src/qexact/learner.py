"""Training loops that tune the network from amplified measurements.

Four trainers share one phase structure: measure against a frozen
hypothesis over the stage schedule, collect inputs, toggle gates at phase
end, stop on a clean phase.  They differ in the circuit sampled, the stage
schedule, and (for k-juntas) the update rule, which descends the filter
lattice using both misclassified and correctly classified measurements.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qsim
from .boolfun import BooleanFunction, Mask, monomial_eval
from .qsim import AmplificationSetup, MeasurementOutcome
from .schedule import Schedule, generic_schedule, junta_schedule, naive_schedule, refined_schedule
from .tnn import Network, hypothesis, toggle_gate

CONVERGED = "converged"
PHASE_CAP_HIT = "phase_cap_hit"


def default_phase_cap(n: int) -> int:
    return 10 * n


@dataclass(frozen=True, slots=True)
class StageLog:
    m: int
    shots: int
    errors_measured: int  # shots with read-out 1, with multiplicity


@dataclass(slots=True)
class PhaseLog:
    phase_index: int
    stages: list[StageLog]
    recorded_errors: frozenset[Mask]
    recorded_corrects: frozenset[Mask] | None
    toggled: frozenset[Mask]

    @property
    def shots(self) -> int:
        return sum(s.shots for s in self.stages)


@dataclass(slots=True)
class TrainingResult:
    final_network: Network
    phases: list[PhaseLog] = field(default_factory=list)
    total_shots: int = 0
    final_error_rate: float = 0.0
    terminated: str = CONVERGED

    @property
    def toggles_total(self) -> int:
        return sum(len(p.toggled) for p in self.phases)

    @property
    def update_phase_count(self) -> int:
        """Phases that changed the network (a clean final phase does not)."""
        return sum(1 for p in self.phases if p.toggled)


def error_rate(c: BooleanFunction, h: BooleanFunction) -> float:
    """Exact disagreement fraction |E(h)| / 2**n."""
    if c.n != h.n:
        raise ValueError(f"dimension mismatch: {c.n} != {h.n}")
    return int(np.count_nonzero(c.table ^ h.table)) / (1 << c.n)


def oracle_preparations(result: TrainingResult) -> int:
    """Example-state preparations, counting m+1 per shot at m rounds."""
    return sum(s.shots * (s.m + 1) for p in result.phases for s in p.stages)


def _run_error_driven(
    c: BooleanFunction,
    setup: AmplificationSetup,
    sched: Schedule,
    rng: np.random.Generator,
    phase_cap: int | None,
) -> TrainingResult:
    """Shared loop of the trainers that record only misclassified inputs."""
    cap = phase_cap if phase_cap is not None else default_phase_cap(c.n)
    net = Network.empty(c.n)
    phases: list[PhaseLog] = []
    total = 0
    terminated = PHASE_CAP_HIT
    for phase_index in range(cap):
        h = hypothesis(net)
        errors: set[Mask] = set()
        stages = []
        for stage in sched.stages:
            outcomes = qsim.sample(c, h, setup, stage.m, stage.shots, rng)
            hits = [o.x for o in outcomes if o.readout == 1]
            errors.update(hits)
            stages.append(StageLog(stage.m, stage.shots, len(hits)))
            total += stage.shots
        toggled = frozenset(errors)
        phases.append(PhaseLog(phase_index, stages, frozenset(errors), None, toggled))
        if not errors:
            terminated = CONVERGED
            break
        for u in sorted(toggled, key=lambda v: v.bits):
            net = toggle_gate(net, u)
    return TrainingResult(
        final_network=net,
        phases=phases,
        total_shots=total,
        final_error_rate=error_rate(c, hypothesis(net)),
        terminated=terminated,
    )


def run_naive(
    c: BooleanFunction, rng: np.random.Generator, phase_cap: int | None = None
) -> TrainingResult:
    """Coupon-collector trainer: floor(2**n ln 2**n) direct measurements."""
    return _run_error_driven(c, AmplificationSetup.naive(c.n), naive_schedule(c.n), rng, phase_cap)


def run_improved(
    c: BooleanFunction, rng: np.random.Generator, phase_cap: int | None = None
) -> TrainingResult:
    """Single-ancilla trainer over the powers-of-two amplification schedule."""
    return _run_error_driven(
        c, AmplificationSetup.improved(c.n), generic_schedule(c.n), rng, phase_cap
    )


def run_refined(
    c: BooleanFunction, m0: int, rng: np.random.Generator, phase_cap: int | None = None
) -> TrainingResult:
    """Two-ancilla trainer; any read-out 1 is recorded, whatever the rot bit."""
    return _run_error_driven(
        c, AmplificationSetup.refined(c.n, m0), refined_schedule(c.n, m0), rng, phase_cap
    )


def junta_update(
    measurements: list[MeasurementOutcome], actives: frozenset[Mask] | set[Mask]
) -> set[Mask]:
    """Filter-lattice update rule for k-junta training.

    Distinct measured inputs are bucketed by Hamming weight and treated in
    ascending order, misclassified before correctly classified at each
    weight.  A misclassified input joins the update set when it lies in the
    filters of an even number of already-listed updates, a correctly
    classified one when that count is odd; either way the active gates
    dominated by the input (those in its filter) join too.
    """
    errors: set[Mask] = set()
    corrects: set[Mask] = set()
    for o in measurements:
        (errors if o.readout == 1 else corrects).add(o.x)
    if not measurements:
        return set()
    n = next(iter(measurements)).x.n

    to_update: list[Mask] = []
    listed: set[Mask] = set()

    def _push(v: Mask) -> None:
        if v not in listed:
            to_update.append(v)
            listed.add(v)
        for g in sorted(actives, key=lambda w: w.bits):
            if monomial_eval(v, g):  # active gate inside the filter of v
                if g not in listed:
                    to_update.append(g)
                    listed.add(g)

    for level in range(n + 1):
        for x in sorted((v for v in errors if v.weight() == level), key=lambda v: v.bits):
            count = sum(1 for upd in to_update if monomial_eval(upd, x))
            if count % 2 == 0:
                _push(x)
        for x in sorted((v for v in corrects if v.weight() == level), key=lambda v: v.bits):
            count = sum(1 for upd in to_update if monomial_eval(upd, x))
            if count % 2 == 1:
                _push(x)
    return set(to_update)


def run_junta(
    c: BooleanFunction, k: int, rng: np.random.Generator, phase_cap: int | None = None
) -> TrainingResult:
    """k-junta trainer: pre-amplified circuit, 2**k shots per stage.

    All outcomes are recorded; the update rule consumes the correctly
    classified inputs as well as the misclassified ones.
    """
    n = c.n
    cap = phase_cap if phase_cap is not None else default_phase_cap(n)
    setup = AmplificationSetup.junta(n, k)
    sched = junta_schedule(n, k)
    net = Network.empty(n)
    phases: list[PhaseLog] = []
    total = 0
    terminated = PHASE_CAP_HIT
    for phase_index in range(cap):
        h = hypothesis(net)
        measurements: list[MeasurementOutcome] = []
        stages = []
        for stage in sched.stages:
            outcomes = qsim.sample(c, h, setup, stage.m, stage.shots, rng)
            measurements.extend(outcomes)
            stages.append(StageLog(stage.m, stage.shots, sum(o.readout for o in outcomes)))
            total += stage.shots
        errors = frozenset(o.x for o in measurements if o.readout == 1)
        corrects = frozenset(o.x for o in measurements if o.readout == 0)
        if not errors:
            phases.append(PhaseLog(phase_index, stages, errors, corrects, frozenset()))
            terminated = CONVERGED
            break
        toggled = frozenset(junta_update(measurements, net.active_gates))
        phases.append(PhaseLog(phase_index, stages, errors, corrects, toggled))
        for u in sorted(toggled, key=lambda v: v.bits):
            net = toggle_gate(net, u)
    return TrainingResult(
        final_network=net,
        phases=phases,
        total_shots=total,
        final_error_rate=error_rate(c, hypothesis(net)),
        terminated=terminated,
    )
