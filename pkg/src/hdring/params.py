"""Truncation window that makes the completed ring finite."""
from __future__ import annotations

from typing import NamedTuple


class Truncation(NamedTuple):
    """Bounds (n, K, m) for a finite slice of the ring.

    n bounds every column index (theta columns, e-index entries, h and zeta
    columns), K bounds every row index (h rows 1..K, zeta rows 0..K), and m
    bounds the total h-plus-zeta degree: monomials of degree >= m are zero.
    """

    n: int
    K: int
    m: int

    def check(self) -> "Truncation":
        if self.n < 1 or self.K < 1 or self.m < 1:
            raise ValueError(f"truncation bounds must be positive, got {self!r}")
        return self

    def resize(self, *, n: int | None = None, K: int | None = None, m: int | None = None) -> "Truncation":
        return Truncation(
            self.n if n is None else n,
            self.K if K is None else K,
            self.m if m is None else m,
        ).check()
