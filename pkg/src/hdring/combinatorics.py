"""Index bookkeeping for the solution formula.

The summation data of the explicit solution consists of triples
``(jmat, svec, iseq)``:

* ``jmat``: a sparse matrix of nonnegative divided-power exponents, rows are
  simplex levels k >= 1, columns are form directions l <= n;
* ``svec``: row multiplicities of the odd generators, indexed from row 0,
  stored as a dense tuple with trailing zeros stripped;
* ``iseq``: for each row with multiplicity s_l > 0 a strictly increasing
  block of column indices, stored as a tuple of tuples aligned with svec.

Upper sequences ``(i^1, ..., i^r)`` pick one supported column per jmat row.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Iterator

from .params import Truncation

JMat = dict[tuple[int, int], int]  # (row, col) -> exponent > 0
SVec = tuple[int, ...]  # s_0, s_1, ... (trailing zeros stripped)
ISeq = tuple[tuple[int, ...], ...]  # block of columns per svec row
Upper = tuple[int, ...]  # i^1 ... i^r, all >= 1


def freeze_jmat(j: JMat) -> tuple[tuple[tuple[int, int], int], ...]:
    return tuple(sorted((kl, x) for kl, x in j.items() if x))


def normalize_svec(svec) -> SVec:
    s = list(svec)
    while s and s[-1] == 0:
        s.pop()
    return tuple(s)


def jmat_row_sums(j: JMat) -> dict[int, int]:
    out: dict[int, int] = {}
    for (k, _), x in j.items():
        out[k] = out.get(k, 0) + x
    return out


def solution_weight(j: JMat, svec) -> Fraction:
    """Rational weight attached to (jmat, svec).

    Numerator: product of the s_l factorials.  Denominator: over every level
    p >= 1 and every q = 0..s_{p-1} (both endpoints included) the factor
    max(1, q + tail_j(p) + tail_s(p)), where the tails sum the jmat rows >= p
    and the svec entries >= p.  Depends on jmat only through its row sums.
    """
    svec = normalize_svec(svec)
    rows = jmat_row_sums(j)
    return weight_from_row_sums(rows, svec)


def weight_from_row_sums(rows: dict[int, int], svec: SVec) -> Fraction:
    num = 1
    for sl in svec:
        num *= factorial(sl)
    den = 1
    max_p = max([len(svec)] + [k for k in rows] + [1])
    for p in range(1, max_p + 1):
        tail_j = sum(x for k, x in rows.items() if k >= p)
        tail_s = sum(svec[p:])
        s_prev = svec[p - 1] if p - 1 < len(svec) else 0
        for q in range(0, s_prev + 1):
            den *= max(1, q + tail_j + tail_s)
    return Fraction(num, den)


def flatten(iseq: ISeq) -> tuple[int, ...]:
    return tuple(i for block in iseq for i in block)


def first_position(i: int, iseq: ISeq) -> int:
    """Zero-based position of the first occurrence of column i in the
    flattened sequence (blocks in row order)."""
    for pos, val in enumerate(flatten(iseq)):
        if val == i:
            return pos
    raise ValueError(f"column {i} does not occur in {iseq}")


def entry_position(iseq: ISeq, row: int, q: int) -> int:
    """Zero-based flat position of block entry q (1-based) of the given row."""
    if row >= len(iseq) or q < 1 or q > len(iseq[row]):
        raise ValueError(f"no entry ({row},{q}) in {iseq}")
    return sum(len(b) for b in iseq[:row]) + (q - 1)


def e_symbol(iseq_values, upper: Upper):
    """Signed e-generator from lower and upper column data.

    Concatenates the flattened lower values with the upper values; a repeated
    column gives zero (returned as None), otherwise the result is
    (sign of the sorting permutation, sorted column tuple).  Both empty gives
    the empty-set generator with sign +1.
    """
    seq = tuple(iseq_values) + tuple(upper)
    if len(set(seq)) != len(seq):
        return None
    sign = 1
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                sign = -sign
    return sign, tuple(sorted(seq))


def delete_value(i: int, iseq: ISeq) -> ISeq:
    """Remove the first occurrence of column i from the flattened sequence."""
    return delete_entry_at(iseq, first_position(i, iseq))


def delete_entry_at(iseq: ISeq, pos: int) -> ISeq:
    out: list[tuple[int, ...]] = []
    seen = 0
    for block in iseq:
        if seen <= pos < seen + len(block):
            k = pos - seen
            out.append(block[:k] + block[k + 1 :])
        else:
            out.append(block)
        seen += len(block)
    if seen <= pos:
        raise ValueError(f"position {pos} out of range for {iseq}")
    return tuple(out)


def delete_jrow(j: JMat, q: int) -> JMat:
    """Drop row q (q >= 1) and shift the rows above it down."""
    out: JMat = {}
    for (k, l), x in j.items():
        if k < q:
            out[(k, l)] = x
        elif k > q:
            out[(k - 1, l)] = out.get((k - 1, l), 0) + x
    return out


def merge_jrows(j: JMat, q: int) -> JMat:
    """Add row q+1 into row q (q >= 1) and shift the rows above down."""
    out: JMat = {}
    for (k, l), x in j.items():
        if k < q:
            key = (k, l)
        elif k in (q, q + 1):
            key = (q, l)
        else:
            key = (k - 1, l)
        out[key] = out.get(key, 0) + x
    return out


def delete_svec_entry(svec, q: int) -> SVec:
    """Remove index q (q >= 0) from the multiplicity vector."""
    s = list(normalize_svec(svec))
    if q < len(s):
        del s[q]
    return normalize_svec(s)


def delete_upper(upper: Upper, q: int) -> Upper:
    """Remove the q-th entry (1-based) of an upper sequence."""
    return upper[: q - 1] + upper[q:]


def svec_of_length(svec, rows: int) -> tuple[int, ...]:
    s = normalize_svec(svec)
    return s + (0,) * (rows - len(s))


def compositions(total: int, slots: int) -> Iterator[tuple[int, ...]]:
    if slots == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in compositions(total - first, slots - 1):
            yield (first,) + rest


def _jmats(r: int, n: int, degree: int) -> Iterator[JMat]:
    cells = [(k, l) for k in range(1, r + 1) for l in range(1, n + 1)]
    for comp in compositions(degree, len(cells)):
        yield {cell: x for cell, x in zip(cells, comp) if x}


def iseq_blocks(svec: SVec, n: int) -> Iterator[ISeq]:
    blocks = [list(combinations(range(1, n + 1), sl)) for sl in svec]
    def rec(idx: int):
        if idx == len(blocks):
            yield ()
            return
        for choice in blocks[idx]:
            for rest in rec(idx + 1):
                yield (choice,) + rest
    yield from rec(0)


def solution_indices(r: int, s: int, params: Truncation) -> Iterator[tuple[JMat, SVec, ISeq]]:
    """Triples feeding the solution formula at (r, s), in a fixed order.

    Every jmat row 1..r must carry support (rows without support admit no
    upper sequence and contribute nothing), the svec entries live on rows
    0..r and sum to s, and the total degree respects the bound m.
    """
    yield from _indices(r, s, params, require_row_support=True)


def lemma_basis_indices(r: int, s: int, params: Truncation) -> Iterator[tuple[JMat, SVec, ISeq]]:
    """All printed triples at (r, s) within the degree bound, including jmat
    rows without support; this is the index set of the basis vectors that the
    level-by-level decomposition is quantified over."""
    yield from _indices(r, s, params, require_row_support=False)


def _indices(r: int, s: int, params: Truncation, require_row_support: bool):
    n, _, m = params
    if r < 0 or s < 0:
        return
    svecs = [normalize_svec(c) for c in compositions(s, r + 1)]
    for jdeg in range(0, max(0, m - s)):
        for j in _jmats(r, n, jdeg):
            if require_row_support:
                rows = jmat_row_sums(j)
                if any(rows.get(k, 0) == 0 for k in range(1, r + 1)):
                    continue
            for svec in svecs:
                for iseq in iseq_blocks(svec, n):
                    yield j, svec, iseq


def upper_sequences(r: int, j: JMat) -> Iterator[Upper]:
    """Upper sequences with i^k running over the supported columns of jmat
    row k; rows without support admit none.  r = 0 yields the empty sequence."""
    supports = []
    for k in range(1, r + 1):
        cols = sorted(l for (kk, l), x in j.items() if kk == k and x > 0)
        if not cols:
            return
        supports.append(cols)
    def rec(idx: int):
        if idx == len(supports):
            yield ()
            return
        for col in supports[idx]:
            for rest in rec(idx + 1):
                yield (col,) + rest
    yield from rec(0)
