"""Exact measurement distributions for every training circuit, two ways.

The analytic backend produces each circuit's outcome distribution in closed
form, organised by outcome class (marked error, unmarked error, correct)
and, for the k-junta circuit, by Hamming-weight stratum; sampling from it
costs the same at every dimension.  The dense backend builds the full
statevector, applies the diffusion operator literally, and serves as ground
truth for the analytic formulas.

The diffusion operator composes the network, the reflection about the
prepared example state and a phase flip on the last measured ancilla.  Two
reflection conventions ship: ``joint_state`` (default) reflects about the
single prepared state including the rotation ancilla, which realises
textbook amplitude amplification; ``paper_literal`` reflects only on the
example registers and tensors identity on the rotation ancilla, a rank-2
reflection whose dynamics leave the amplification plane.  The ``validate``
report measures the difference instead of hiding it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .boolfun import BooleanFunction, Mask
from .schedule import preamp_plan, theta_m0

# Circuit variants.
NAIVE_DIRECT = "naive_direct"
IMPROVED = "improved"
REFINED = "refined"
JUNTA = "junta"

# Reflection conventions for the dense backend.
JOINT_STATE = "joint_state"
PAPER_LITERAL = "paper_literal"

# Outcome classes.
ERR_MARKED = "err_rot1"  # readout 1 and rotation ancilla 1 (or no rot ancilla)
ERR_UNMARKED = "err_rot0"  # readout 1, rotation ancilla 0
CORRECT = "correct"  # readout 0
LEAK = "leak"  # readout 0 with rotation ancilla 1; paper_literal artifact

# Hamming-weight strata (k-junta circuit only).
ALL = "all"
LOW = "low"  # weight <= k
HIGH = "high"

DENSE_MAX_N = 12  # resource guard: statevectors up to 2**(n+2) amplitudes


@dataclass(frozen=True, slots=True)
class AmplificationSetup:
    """Which circuit is simulated, plus its derived parameters."""

    variant: str
    n: int
    m0: int = 0
    k: int | None = None
    reflection_mode: str = JOINT_STATE

    def __post_init__(self) -> None:
        if self.variant not in (NAIVE_DIRECT, IMPROVED, REFINED, JUNTA):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.reflection_mode not in (JOINT_STATE, PAPER_LITERAL):
            raise ValueError(f"unknown reflection mode {self.reflection_mode!r}")
        if self.variant == JUNTA:
            if self.k is None or not 1 <= self.k < self.n:
                raise ValueError(f"junta needs 1 <= k < n, got k={self.k}, n={self.n}")

    @classmethod
    def naive(cls, n: int) -> "AmplificationSetup":
        return cls(NAIVE_DIRECT, n)

    @classmethod
    def improved(cls, n: int) -> "AmplificationSetup":
        return cls(IMPROVED, n)

    @classmethod
    def refined(cls, n: int, m0: int, reflection_mode: str = JOINT_STATE) -> "AmplificationSetup":
        return cls(REFINED, n, m0=m0, reflection_mode=reflection_mode)

    @classmethod
    def junta(
        cls, n: int, k: int, m0: int = 2, reflection_mode: str = JOINT_STATE
    ) -> "AmplificationSetup":
        return cls(JUNTA, n, m0=m0, k=k, reflection_mode=reflection_mode)

    @property
    def has_rot(self) -> bool:
        return self.variant in (REFINED, JUNTA)

    def label(self) -> str:
        if self.variant == REFINED:
            return f"refined({self.m0})"
        if self.variant == JUNTA:
            return f"junta({self.k})"
        return self.variant


@dataclass(frozen=True, slots=True)
class MeasurementOutcome:
    """One shot: measured input, read-out bit, optional rotation-ancilla bit."""

    x: Mask
    readout: int
    rot: int | None = None


@dataclass(slots=True)
class Cell:
    """All outcomes of one (class, stratum) carry the same probability."""

    klass: str
    stratum: str
    count: int
    prob: float
    per_elem: float
    members: np.ndarray | None  # None: complement of the errors within the stratum


@lru_cache(maxsize=64)
def _popcounts(n: int) -> np.ndarray:
    xs = np.arange(1 << n, dtype=np.uint32)
    counts = np.zeros(1 << n, dtype=np.uint8)
    for i in range(n):
        counts += (xs >> i & 1).astype(np.uint8)
    counts.setflags(write=False)
    return counts


@lru_cache(maxsize=128)
def _stratum_members(n: int, k: int | None, stratum: str) -> np.ndarray:
    if stratum == ALL:
        out = np.arange(1 << n, dtype=np.int64)
    elif stratum == LOW:
        out = np.flatnonzero(_popcounts(n) <= k).astype(np.int64)
    else:
        out = np.flatnonzero(_popcounts(n) > k).astype(np.int64)
    out.setflags(write=False)
    return out


class OutcomeDistribution:
    """Exact distribution over (x, readout[, rot]) for one circuit and m."""

    def __init__(
        self,
        setup: AmplificationSetup,
        good_prob: float,
        base_marked_prob: float,
        cells: list[Cell],
        err_lookup: np.ndarray,
        dense: np.ndarray | None = None,
    ) -> None:
        self.setup = setup
        self.n = setup.n
        self.good_prob = good_prob
        self.base_marked_prob = base_marked_prob
        self.cells = sorted(cells, key=lambda c: (c.klass, c.stratum))
        self._err_lookup = err_lookup
        self._dense = dense
        total = self.total_prob()
        if abs(total - 1.0) > 1e-12:
            raise AssertionError(f"probability mass {total} != 1")
        if setup.has_rot:
            bound = math.sin(theta_m0(setup.m0)) ** 2
            if base_marked_prob > bound + 1e-12:
                raise AssertionError(
                    f"initial marked probability {base_marked_prob} exceeds "
                    f"sin^2(theta_m0) = {bound}"
                )

    def total_prob(self) -> float:
        return float(sum(c.prob for c in self.cells))

    def class_prob(self, klass: str) -> float:
        return float(sum(c.prob for c in self.cells if c.klass == klass))

    def prob_readout1(self) -> float:
        return self.class_prob(ERR_MARKED) + self.class_prob(ERR_UNMARKED)

    def _cell_members(self, cell: Cell) -> np.ndarray:
        if cell.members is not None:
            return cell.members
        stratum = _stratum_members(self.n, self.setup.k, cell.stratum)
        return stratum[~self._err_lookup[stratum]]

    def _outcome_bits(self, klass: str) -> tuple[int, int | None]:
        rot: int | None
        if self.setup.has_rot:
            rot = {ERR_MARKED: 1, ERR_UNMARKED: 0, CORRECT: 0, LEAK: 1}[klass]
        else:
            rot = None
        readout = 1 if klass in (ERR_MARKED, ERR_UNMARKED) else 0
        return readout, rot

    def outcome_probs(self) -> dict[tuple[int, int, int | None], float]:
        """Materialise (x, readout, rot) -> probability; for tests at small n."""
        if self._dense is not None:
            out: dict[tuple[int, int, int | None], float] = {}
            if self.setup.has_rot:
                for (x, b, r), p in np.ndenumerate(self._dense):
                    if p > 0.0:
                        out[(int(x), int(b), int(r))] = float(p)
            else:
                for (x, b), p in np.ndenumerate(self._dense):
                    if p > 0.0:
                        out[(int(x), int(b), None)] = float(p)
            return out
        out = {}
        for cell in self.cells:
            if cell.per_elem <= 0.0:
                continue
            readout, rot = self._outcome_bits(cell.klass)
            for x in self._cell_members(cell):
                out[(int(x), readout, rot)] = cell.per_elem
        return out

    def x_marginal(self) -> np.ndarray:
        """Probability of measuring each input, regardless of the ancillas."""
        if self._dense is not None:
            axes = tuple(range(1, self._dense.ndim))
            return self._dense.sum(axis=axes)
        out = np.zeros(1 << self.n)
        for cell in self.cells:
            if cell.per_elem > 0.0:
                out[self._cell_members(cell)] += cell.per_elem
        return out

    def draw(self, shots: int, rng: np.random.Generator) -> list[MeasurementOutcome]:
        """`shots` independent draws; deterministic given the rng state."""
        if shots == 0:
            return []
        live = [c for c in self.cells if c.prob > 0.0]
        probs = np.array([c.prob for c in live])
        probs /= probs.sum()
        which = rng.choice(len(live), size=shots, p=probs)
        xs = np.empty(shots, dtype=np.int64)
        for ci, cell in enumerate(live):
            pos = np.flatnonzero(which == ci)
            if pos.size == 0:
                continue
            if cell.members is not None:
                xs[pos] = rng.choice(cell.members, size=pos.size)
            else:
                xs[pos] = self._draw_complement(cell, pos.size, rng)
        outcomes = []
        for i in range(shots):
            cell = live[which[i]]
            readout, rot = self._outcome_bits(cell.klass)
            outcomes.append(MeasurementOutcome(Mask(int(xs[i]), self.n), readout, rot))
        return outcomes

    def _draw_complement(self, cell: Cell, count: int, rng: np.random.Generator) -> np.ndarray:
        stratum = _stratum_members(self.n, self.setup.k, cell.stratum)
        out = np.empty(count, dtype=np.int64)
        filled = 0
        for _ in range(50):
            cand = rng.choice(stratum, size=max(64, 2 * (count - filled)))
            cand = cand[~self._err_lookup[cand]][: count - filled]
            out[filled : filled + cand.size] = cand
            filled += cand.size
            if filled == count:
                return out
        # Rejection starves only when nearly every stratum member is an error.
        members = self._cell_members(cell)
        out[filled:] = rng.choice(members, size=count - filled)
        return out


def tv_distance(d1: OutcomeDistribution, d2: OutcomeDistribution) -> float:
    """Total-variation distance between two outcome distributions."""
    p1, p2 = d1.outcome_probs(), d2.outcome_probs()
    return 0.5 * sum(abs(p1.get(key, 0.0) - p2.get(key, 0.0)) for key in p1.keys() | p2.keys())


def _check_args(c: BooleanFunction, h: BooleanFunction, setup: AmplificationSetup, m: int) -> None:
    if not (c.n == h.n == setup.n):
        raise ValueError(f"dimension mismatch: c.n={c.n}, h.n={h.n}, setup.n={setup.n}")
    if m < 0:
        raise ValueError("m must be >= 0")
    if setup.variant == NAIVE_DIRECT and m != 0:
        raise ValueError("the direct-measurement circuit performs no amplification")


def _amplified(base_prob: float, m: int) -> float:
    """Marked-class probability after m amplification rounds."""
    if base_prob <= 0.0:
        return 0.0
    theta = math.asin(math.sqrt(min(base_prob, 1.0)))
    return math.sin((2 * m + 1) * theta) ** 2


def analytic_distribution(
    c: BooleanFunction, h: BooleanFunction, setup: AmplificationSetup, m: int
) -> OutcomeDistribution:
    """Closed-form outcome distribution after m amplification rounds."""
    _check_args(c, h, setup, m)
    n = setup.n
    size = 1 << n
    diff = c.table ^ h.table
    err = np.flatnonzero(diff).astype(np.int64)
    err_lookup = diff.astype(bool)
    ne = err.size

    cells: list[Cell] = []
    if not setup.has_rot:
        base = ne / size
        g = _amplified(base, m)
        if ne:
            cells.append(Cell(ERR_MARKED, ALL, ne, g, g / ne, err))
        if ne < size:
            per = (1.0 - g) / (size - ne)
            cells.append(Cell(CORRECT, ALL, size - ne, 1.0 - g, per, None))
        return OutcomeDistribution(setup, g, base, cells, err_lookup)

    st = math.sin(theta_m0(setup.m0)) ** 2
    ct = 1.0 - st
    if setup.variant == REFINED:
        p11 = st * ne / size
        g = _amplified(p11, m)
        residual = 1.0 - p11
        if ne:
            cells.append(Cell(ERR_MARKED, ALL, ne, g, g / ne if g else 0.0, err))
            per = (1.0 - g) * ct / (size * residual) if residual > 0.0 else 0.0
            cells.append(Cell(ERR_UNMARKED, ALL, ne, per * ne, per, err))
        if ne < size:
            per = (1.0 - g) / (size * residual) if residual > 0.0 else 0.0
            cells.append(Cell(CORRECT, ALL, size - ne, per * (size - ne), per, None))
        return OutcomeDistribution(setup, g, p11, cells, err_lookup)

    # k-junta circuit: inputs carry a weight-dependent probability after
    # the pre-amplification rounds.
    plan = preamp_plan(n, setup.k)
    amp = math.sin((2 * plan.p_leq_k + 1) * plan.phi)
    w_low = amp**2 / plan.n_leq_k
    w_high = (1.0 - amp**2) / (size - plan.n_leq_k)
    weights = _popcounts(n) <= setup.k
    err_low = err[weights[err]]
    err_high = err[~weights[err]]
    w_err = err_low.size * w_low + err_high.size * w_high
    p11 = st * w_err
    g = _amplified(p11, m)
    residual = 1.0 - p11
    for stratum, members, w in ((LOW, err_low, w_low), (HIGH, err_high, w_high)):
        if members.size == 0:
            continue
        per_marked = g * w / w_err if w_err > 0.0 else 0.0
        cells.append(Cell(ERR_MARKED, stratum, members.size, per_marked * members.size, per_marked, members))
        per = (1.0 - g) * w * ct / residual if residual > 0.0 else 0.0
        cells.append(Cell(ERR_UNMARKED, stratum, members.size, per * members.size, per, members))
    n_low = plan.n_leq_k
    for stratum, total, n_err, w in ((LOW, n_low, err_low.size, w_low), (HIGH, size - n_low, err_high.size, w_high)):
        n_ok = total - n_err
        if n_ok == 0:
            continue
        per = (1.0 - g) * w / residual if residual > 0.0 else 0.0
        cells.append(Cell(CORRECT, stratum, n_ok, per * n_ok, per, None))
    return OutcomeDistribution(setup, g, p11, cells, err_lookup)


def sample(
    c: BooleanFunction,
    h: BooleanFunction,
    setup: AmplificationSetup,
    m: int,
    shots: int,
    rng: np.random.Generator,
) -> list[MeasurementOutcome]:
    """Draw `shots` full circuit executions (preparation, m rounds, measure)."""
    return analytic_distribution(c, h, setup, m).draw(shots, rng)


# --- dense statevector backend ------------------------------------------------


def _example_state(c: BooleanFunction) -> np.ndarray:
    """|psi(c)>: the uniform superposition of (x, c(x)), shape (2**n, 2)."""
    size = 1 << c.n
    state = np.zeros((size, 2), dtype=np.complex128)
    state[np.arange(size), c.table] = 2 ** (-c.n / 2)
    return state


def _preamplify(psi: np.ndarray, k: int, n: int) -> np.ndarray:
    """Amplify the weight-<=k inputs: [X_psi (X_<=k (x) I)]^p applied to psi."""
    plan = preamp_plan(n, k)
    low = _popcounts(n) <= k
    ref = psi.copy().reshape(-1)
    state = psi.copy()
    for _ in range(plan.p_leq_k):
        state[low] *= -1.0
        flat = state.reshape(-1)
        flat[:] = 2.0 * np.vdot(ref, flat) * ref - flat
    return state


def _apply_network(state: np.ndarray, h_ones: np.ndarray) -> None:
    """Read-out semantics: |x, b> -> |x, b ^ h(x)> (in place)."""
    state[h_ones] = state[h_ones, ::-1]


def _apply_rotation(state: np.ndarray, cos_t: float, sin_t: float, adjoint: bool = False) -> None:
    """y-rotation on the rot ancilla, controlled on readout=1 (in place)."""
    if adjoint:
        sin_t = -sin_t
    a = state[:, 1, 0].copy()
    b = state[:, 1, 1]
    state[:, 1, 0] = cos_t * a - sin_t * b
    state[:, 1, 1] = sin_t * a + cos_t * b


def dense_distribution(
    c: BooleanFunction, h: BooleanFunction, setup: AmplificationSetup, m: int
) -> OutcomeDistribution:
    """Ground-truth Born distribution from the full statevector."""
    _check_args(c, h, setup, m)
    n = setup.n
    if n > DENSE_MAX_N:
        raise ValueError(f"dense backend capped at n <= {DENSE_MAX_N}")
    size = 1 << n
    h_ones = h.table.astype(bool)

    psi = _example_state(c)
    if setup.variant == JUNTA:
        psi = _preamplify(psi, setup.k, n)

    if not setup.has_rot:
        prepared = psi.reshape(-1)  # reflection reference
        state = psi.copy()
        _apply_network(state, h_ones)
        for _ in range(m):
            state[:, 1] *= -1.0  # phase flip on the read-out ancilla
            _apply_network(state, h_ones)
            flat = state.reshape(-1)
            flat -= 2.0 * np.vdot(prepared, flat) * prepared  # I - 2|psi><psi|
            _apply_network(state, h_ones)
        probs = np.abs(state) ** 2
        return _from_dense(probs, c, h, setup)

    cos_t = math.cos(theta_m0(setup.m0))
    sin_t = math.sin(theta_m0(setup.m0))
    state = np.zeros((size, 2, 2), dtype=np.complex128)
    state[:, :, 0] = psi  # rot ancilla starts in |0>
    prepared = state.copy().reshape(-1)
    psi_flat = psi.reshape(-1)

    _apply_network(state, h_ones)
    _apply_rotation(state, cos_t, sin_t)

    marked0 = float(np.sum(np.abs(state[:, :, 1]) ** 2))
    bound = sin_t**2
    if marked0 > bound + 1e-12:
        raise AssertionError(f"initial marked probability {marked0} exceeds {bound}")

    for _ in range(m):
        state[:, :, 1] *= -1.0  # phase flip on the rot ancilla
        _apply_rotation(state, cos_t, sin_t, adjoint=True)
        _apply_network(state, h_ones)
        if setup.reflection_mode == JOINT_STATE:
            flat = state.reshape(-1)
            flat[:] = flat - 2.0 * np.vdot(prepared, flat) * prepared
        else:
            # Literal convention: reflect on the example registers only,
            # identity on the rot ancilla (a rank-2 reflection).
            view = state.reshape(-1, 2)
            for r in (0, 1):
                col = view[:, r]
                col -= 2.0 * np.vdot(psi_flat, col) * psi_flat
        _apply_network(state, h_ones)
        _apply_rotation(state, cos_t, sin_t)
    probs = np.abs(state) ** 2
    return _from_dense(probs, c, h, setup, base_marked_prob=marked0)


def _from_dense(
    probs: np.ndarray,
    c: BooleanFunction,
    h: BooleanFunction,
    setup: AmplificationSetup,
    base_marked_prob: float | None = None,
) -> OutcomeDistribution:
    n = setup.n
    diff = c.table ^ h.table
    err_lookup = diff.astype(bool)
    err = np.flatnonzero(diff).astype(np.int64)
    ok = np.flatnonzero(~err_lookup).astype(np.int64)

    cells: list[Cell] = []
    if not setup.has_rot:
        stray = probs[err, 0].sum() + probs[ok, 1].sum()
        if stray > 1e-12:
            raise AssertionError(f"read-out bit disagrees with c^h (mass {stray})")
        g = float(probs[err, 1].sum())
        if err.size:
            cells.append(Cell(ERR_MARKED, ALL, err.size, g, g / err.size, err))
        if ok.size:
            p_ok = float(probs[ok, 0].sum())
            cells.append(Cell(CORRECT, ALL, ok.size, p_ok, p_ok / ok.size, None))
        return OutcomeDistribution(setup, g, err.size / (1 << n), cells, err_lookup, dense=probs)

    stray = probs[err, 0, :].sum() + probs[ok, 1, :].sum()
    if stray > 1e-12:
        raise AssertionError(f"read-out bit disagrees with c^h (mass {stray})")

    if setup.variant == JUNTA:
        low = _popcounts(n) <= setup.k
        groups = [(LOW, err[low[err]], ok[low[ok]]), (HIGH, err[~low[err]], ok[~low[ok]])]
    else:
        groups = [(ALL, err, ok)]

    g_total = float(probs[err, 1, 1].sum())
    for stratum, err_s, ok_s in groups:
        if err_s.size:
            p = float(probs[err_s, 1, 1].sum())
            cells.append(Cell(ERR_MARKED, stratum, err_s.size, p, p / err_s.size, err_s))
            p = float(probs[err_s, 1, 0].sum())
            cells.append(Cell(ERR_UNMARKED, stratum, err_s.size, p, p / err_s.size, err_s))
        if ok_s.size:
            p = float(probs[ok_s, 0, 0].sum())
            cells.append(Cell(CORRECT, stratum, ok_s.size, p, p / ok_s.size, None))
            p_leak = float(probs[ok_s, 0, 1].sum())
            if p_leak > 1e-15:
                # Unreachable under joint_state; the literal reflection
                # populates readout=0, rot=1.
                cells.append(Cell(LEAK, stratum, ok_s.size, p_leak, p_leak / ok_s.size, None))
    if base_marked_prob is None:
        base_marked_prob = g_total
    return OutcomeDistribution(setup, g_total, base_marked_prob, cells, err_lookup, dense=probs)
