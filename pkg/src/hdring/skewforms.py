"""Skew-symmetric coefficient families and the theta-extension step.

A family of degree q assigns a theta/e coefficient (a ring element) to every
strictly increasing q-tuple of columns; all other index tuples are computed
views, extended by the sign of the sorting permutation and zero on repeats.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .fields import QQ, Field
from .params import Truncation
from .ring import Element, theta_gen


def _sort_sign(idx: tuple[int, ...]):
    """(sign, sorted tuple), or None when an index repeats."""
    if len(set(idx)) != len(idx):
        return None
    sign = 1
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                sign = -sign
    return sign, tuple(sorted(idx))


@dataclass(frozen=True)
class SkewFamily:
    degree: int
    params: Truncation
    field: Field
    increasing: dict[tuple[int, ...], Element]

    def value(self, idx: tuple[int, ...]) -> Element:
        """Coefficient at an arbitrary index tuple, by skew extension."""
        if len(idx) != self.degree:
            raise ValueError(f"expected a {self.degree}-tuple, got {idx}")
        ss = _sort_sign(idx)
        if ss is None:
            return Element.zero(self.params, self.field)
        sign, key = ss
        base = self.increasing.get(key, Element.zero(self.params, self.field))
        return base if sign == 1 else -base

    def is_skew(self) -> bool:
        """Exhaustive full-symmetry check over all tuples and permutations."""
        from itertools import permutations, product

        for idx in product(range(1, self.params.n + 1), repeat=self.degree):
            base = self.value(idx)
            for perm in permutations(range(self.degree)):
                sign = _perm_sign(perm)
                permuted = tuple(idx[p] for p in perm)
                expected = base if sign == 1 else -base
                if self.value(permuted) != expected:
                    return False
        return True


def _perm_sign(perm: tuple[int, ...]) -> int:
    sign = 1
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                sign = -sign
    return sign


def rho1_symmetrize(q: int, values: dict[tuple[int, ...], Element], params: Truncation, field: Field = QQ) -> SkewFamily:
    """Build the full skew family from values on strictly increasing tuples."""
    clean: dict[tuple[int, ...], Element] = {}
    for idx, val in values.items():
        if len(idx) != q:
            raise ValueError(f"expected {q}-tuples, got {idx}")
        if any(idx[a] >= idx[a + 1] for a in range(len(idx) - 1)):
            raise ValueError(f"tuple {idx} is not strictly increasing")
        if not val.is_zero():
            clean[tuple(idx)] = val
    return SkewFamily(q, params, field, clean)


def higgs_extend(x: SkewFamily) -> SkewFamily:
    """Degree-raising step: the new coefficient at (i_1 .. i_{q+1}) is the
    alternating sum over k of theta_{i_k} times the old coefficient with i_k
    deleted.  Preserves skew symmetry."""
    params, field = x.params, x.field
    out: dict[tuple[int, ...], Element] = {}
    for idx in combinations(range(1, params.n + 1), x.degree + 1):
        acc = Element.zero(params, field)
        for k in range(len(idx)):
            term = theta_gen(idx[k], params, field) * x.value(idx[:k] + idx[k + 1 :])
            if k % 2:
                term = -term
            acc = acc + term
        if not acc.is_zero():
            out[idx] = acc
    return SkewFamily(x.degree + 1, params, field, out)
