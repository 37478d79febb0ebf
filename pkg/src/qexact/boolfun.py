"""Boolean function core: truth tables, ANF, monomial filters and k-juntas.

Functions on n-bit inputs are stored as dense truth tables (one byte per
input, indexed by the integer value of the input mask, bit 0 = least
significant).  The algebraic normal form is obtained with the GF(2)
Moebius transform, which is an involution, so the same butterfly converts
both ways.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

# Dense tables stay small at desk scale; everything here assumes n <= MAX_N.
MAX_N = 16


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise ValueError(f"variable count must be in [1, {MAX_N}], got {n}")


@dataclass(frozen=True, slots=True)
class Mask:
    """An n-bit input/monomial mask; bit i is variable i."""

    bits: int
    n: int

    def __post_init__(self) -> None:
        _check_n(self.n)
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"mask {self.bits:#x} out of range for n={self.n}")

    def weight(self) -> int:
        """Hamming weight."""
        return self.bits.bit_count()

    def flip(self, i: int) -> "Mask":
        return Mask(self.bits ^ (1 << i), self.n)

    def ones(self) -> tuple[int, ...]:
        """Indices of the set bits (the index set of the mask)."""
        return tuple(i for i in range(self.n) if self.bits >> i & 1)

    def __index__(self) -> int:
        return self.bits


def monomial_eval(u: Mask, x: Mask) -> int:
    """Evaluate the monomial of u at x: 1 iff every bit of u is set in x.

    Equivalently, 1 iff x lies in the filter generated by u (the upward
    closure of u in the subset lattice).
    """
    if u.n != x.n:
        raise ValueError(f"dimension mismatch: {u.n} != {x.n}")
    return int(u.bits & x.bits == u.bits)


class BooleanFunction:
    """A total function on n-bit inputs, stored as a 2**n truth table."""

    __slots__ = ("n", "table", "_key")

    def __init__(self, n: int, table: np.ndarray | list[int]) -> None:
        _check_n(n)
        t = np.asarray(table, dtype=np.uint8)
        if t.shape != (1 << n,):
            raise ValueError(f"table length {t.shape} does not match n={n}")
        if t.max(initial=0) > 1:
            raise ValueError("truth table entries must be bits")
        t = t.copy()
        t.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "_key", (n, t.tobytes()))

    def __setattr__(self, name, value):  # immutable after construction
        raise AttributeError("BooleanFunction is immutable")

    @classmethod
    def zero(cls, n: int) -> "BooleanFunction":
        return cls(n, np.zeros(1 << n, dtype=np.uint8))

    @classmethod
    def constant_one(cls, n: int) -> "BooleanFunction":
        return cls(n, np.ones(1 << n, dtype=np.uint8))

    @classmethod
    def monomial(cls, u: Mask) -> "BooleanFunction":
        xs = np.arange(1 << u.n, dtype=np.uint32)
        return cls(u.n, ((xs & u.bits) == u.bits).astype(np.uint8))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "BooleanFunction":
        return cls(n, rng.integers(0, 2, size=1 << n, dtype=np.uint8))

    def evaluate(self, x: Mask | int) -> int:
        if isinstance(x, Mask):
            if x.n != self.n:
                raise ValueError(f"dimension mismatch: {x.n} != {self.n}")
            x = x.bits
        return int(self.table[x])

    __call__ = evaluate

    def __xor__(self, other: "BooleanFunction") -> "BooleanFunction":
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} != {other.n}")
        return BooleanFunction(self.n, self.table ^ other.table)

    def is_positive(self) -> bool:
        """True when the function vanishes at the all-zero input."""
        return self.table[0] == 0

    def ones_count(self) -> int:
        return int(self.table.sum())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BooleanFunction) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"BooleanFunction({self.to_string()!r})"

    def to_string(self) -> str:
        """Serialize as e.g. "n=3;tt=0x6a" (bit x of tt is the value at x)."""
        value = 0
        for x in np.flatnonzero(self.table):
            value |= 1 << int(x)
        return f"n={self.n};tt={value:#x}"

    @classmethod
    def from_string(cls, s: str) -> "BooleanFunction":
        try:
            n_part, tt_part = s.split(";")
            n = int(n_part.removeprefix("n="))
            value = int(tt_part.removeprefix("tt="), 16)
        except ValueError as exc:
            raise ValueError(f"bad function literal {s!r}") from exc
        _check_n(n)
        table = np.array([value >> x & 1 for x in range(1 << n)], dtype=np.uint8)
        return cls(n, table)


@dataclass(frozen=True, slots=True)
class Anf:
    """Algebraic normal form: the XOR of the monomials of `monomials`."""

    n: int
    monomials: frozenset[Mask]

    def __post_init__(self) -> None:
        _check_n(self.n)
        for u in self.monomials:
            if u.n != self.n:
                raise ValueError("monomial width does not match ANF dimension")


def _moebius(table: np.ndarray, n: int) -> np.ndarray:
    """GF(2) Moebius transform (self-inverse butterfly)."""
    t = table.copy()
    for i in range(n):
        half = 1 << i
        t = t.reshape(-1, 2 * half)
        t[:, half:] ^= t[:, :half]
    return t.reshape(-1)

def anf_of(f: BooleanFunction) -> Anf:
    coeffs = _moebius(f.table, f.n)
    mons = frozenset(Mask(int(u), f.n) for u in np.flatnonzero(coeffs))
    return Anf(f.n, mons)


def function_of(a: Anf) -> BooleanFunction:
    coeffs = np.zeros(1 << a.n, dtype=np.uint8)
    for u in a.monomials:
        coeffs[u.bits] = 1
    return BooleanFunction(a.n, _moebius(coeffs, a.n))


def error_set(c: BooleanFunction, h: BooleanFunction) -> set[Mask]:
    """All inputs where the hypothesis disagrees with the target."""
    if c.n != h.n:
        raise ValueError(f"dimension mismatch: {c.n} != {h.n}")
    return {Mask(int(x), c.n) for x in np.flatnonzero(c.table ^ h.table)}


def relevant_variables(f: BooleanFunction) -> set[int]:
    """Variables i with f(x) != f(x with bit i flipped) for some x."""
    xs = np.arange(1 << f.n, dtype=np.uint32)
    out = set()
    for i in range(f.n):
        if np.any(f.table != f.table[xs ^ (1 << i)]):
            out.add(i)
    return out


def random_positive_kjunta(n: int, k: int, rng: np.random.Generator) -> BooleanFunction:
    """Draw a uniform positive k-junta: at most k relevant variables, 0 at 0.

    A uniformly random k-subset of variables is chosen, then a uniformly
    random non-zero truth table on those variables conditioned on value 0
    at the all-zero restriction.  Dependence on all k variables is not
    enforced.
    """
    _check_n(n)
    if not 1 <= k < n:
        raise ValueError(f"junta arity must satisfy 1 <= k < n, got k={k}, n={n}")
    rho = np.sort(rng.choice(n, size=k, replace=False))
    while True:
        sub = rng.integers(0, 2, size=1 << k, dtype=np.uint8)
        sub[0] = 0
        if sub.any():
            break
    xs = np.arange(1 << n, dtype=np.uint32)
    idx = reduce(
        lambda acc, ji: acc | ((xs >> int(rho[ji]) & 1) << ji),
        range(k),
        np.zeros(1 << n, dtype=np.uint32),
    )
    return BooleanFunction(n, sub[idx])
