"""Shared brute-force oracles, kept independent of the library internals."""

from __future__ import annotations

import numpy as np
import pytest


def brute_anf_coeffs(table: np.ndarray) -> np.ndarray:
    """O(4**n) XOR-expansion oracle: coeff(u) = XOR of f(x) over x subset of u."""
    size = len(table)
    coeffs = np.zeros(size, dtype=np.uint8)
    for u in range(size):
        acc = 0
        for x in range(size):
            if x & u == x:
                acc ^= int(table[x])
        coeffs[u] = acc
    return coeffs


def brute_eval_anf(coeffs: np.ndarray, x: int) -> int:
    """Evaluate the XOR of monomials at x directly from the coefficient vector."""
    acc = 0
    for u in range(len(coeffs)):
        if coeffs[u] and u & x == u:
            acc ^= 1
    return acc


def all_tables(n: int):
    """Every truth table on n variables, as uint8 arrays."""
    size = 1 << n
    for value in range(1 << size):
        yield np.array([value >> x & 1 for x in range(size)], dtype=np.uint8)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
