"""Dense linear algebra over GF(2) with bit-packed rows.

Each row is a Python ``int`` whose bit ``c`` holds the entry in column ``c``,
so row operations are single XORs. Vectors handed to the packed helpers use
the same convention: bit ``i`` is coordinate ``i`` (coordinate 0 is the top
signal level in the deterministic channel models).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidShiftError, ShapeError


def _bits_to_int(bits: Iterable[int]) -> int:
    value = 0
    for i, b in enumerate(bits):
        b = int(b)
        if b not in (0, 1):
            raise ValueError(f"GF(2) entries must be 0 or 1, got {b}")
        if b:
            value |= 1 << i
    return value


def _int_to_bits(value: int, length: int) -> np.ndarray:
    return np.array([(value >> i) & 1 for i in range(length)], dtype=np.uint8)


class Gf2Matrix:
    """Immutable binary matrix.

    Build one from a nested sequence or array of 0/1 values, or from
    packed rows with :meth:`from_rows`.
    """

    __slots__ = ("_rows", "_nrows", "_ncols")

    def __init__(self, entries, ncols: int | None = None):
        arr = np.asarray(entries, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0 if ncols is None else ncols)
        if arr.ndim != 2:
            raise ShapeError(f"expected a 2-D array, got shape {arr.shape}")
        if ncols is not None and arr.shape[1] != ncols:
            raise ShapeError(f"expected {ncols} columns, got {arr.shape[1]}")
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError("GF(2) entries must be 0 or 1")
        self._nrows, self._ncols = int(arr.shape[0]), int(arr.shape[1])
        self._rows = tuple(_bits_to_int(r) for r in arr)

    @classmethod
    def from_rows(cls, rows: Sequence[int], ncols: int) -> "Gf2Matrix":
        """Wrap already-packed rows (bit ``c`` of each int is column ``c``)."""
        if ncols < 0:
            raise ShapeError("column count must be nonnegative")
        limit = 1 << ncols
        for r in rows:
            if r < 0 or r >= limit:
                raise ValueError(f"packed row {r} does not fit in {ncols} columns")
        m = cls.__new__(cls)
        m._rows = tuple(int(r) for r in rows)
        m._nrows = len(m._rows)
        m._ncols = int(ncols)
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return self._nrows, self._ncols

    @property
    def rows(self) -> tuple[int, ...]:
        return self._rows

    @property
    def nrows(self) -> int:
        return self._nrows

    @property
    def ncols(self) -> int:
        return self._ncols

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        for j, r in enumerate(self._rows):
            out[j] = _int_to_bits(r, self._ncols)
        return out

    def __getitem__(self, idx: tuple[int, int]) -> int:
        j, c = idx
        if not (0 <= j < self._nrows and 0 <= c < self._ncols):
            raise IndexError(idx)
        return (self._rows[j] >> c) & 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.shape, self._rows))

    def __repr__(self) -> str:
        body = "; ".join("".join(str(b) for b in row) for row in self.to_array())
        return f"Gf2Matrix({self._nrows}x{self._ncols}: [{body}])"

    @property
    def T(self) -> "Gf2Matrix":
        cols = []
        for c in range(self._ncols):
            v = 0
            for j, r in enumerate(self._rows):
                if (r >> c) & 1:
                    v |= 1 << j
            cols.append(v)
        return Gf2Matrix.from_rows(cols, self._nrows)

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        if self._ncols != other._nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for r in self._rows:
            acc = 0
            c = 0
            while r:
                if r & 1:
                    acc ^= other._rows[c]
                r >>= 1
                c += 1
            out.append(acc)
        return Gf2Matrix.from_rows(out, other._ncols)

    def matvec(self, bits: Sequence[int]) -> np.ndarray:
        """Multiply by a bit vector, returning the image as a 0/1 array."""
        if len(bits) != self._ncols:
            raise ShapeError(f"vector of length {len(bits)} for {self.shape} matrix")
        v = _bits_to_int(bits)
        return _int_to_bits(self.apply_int(v), self._nrows)

    def apply_int(self, v: int) -> int:
        """Multiply by one packed vector."""
        out = 0
        for j, r in enumerate(self._rows):
            if bin(r & v).count("1") & 1:
                out |= 1 << j
        return out

    def apply_packed(self, values: np.ndarray) -> np.ndarray:
        """Vectorised product with an array of packed vectors (``uint64``)."""
        if self._ncols > 64 or self._nrows > 64:
            raise ShapeError("packed application supports at most 64 rows and columns")
        vals = np.asarray(values, dtype=np.uint64)
        out = np.zeros(vals.shape, dtype=np.uint64)
        for j, r in enumerate(self._rows):
            if r:
                parity = np.bitwise_count(vals & np.uint64(r)) & np.uint8(1)
                out |= parity.astype(np.uint64) << np.uint64(j)
        return out


def identity(q: int) -> Gf2Matrix:
    return Gf2Matrix.from_rows([1 << i for i in range(q)], q)


def zeros(nrows: int, ncols: int) -> Gf2Matrix:
    return Gf2Matrix.from_rows([0] * nrows, ncols)


def downshift_power(q: int, k: int) -> Gf2Matrix:
    """Return ``D**k`` for the ``q x q`` down-shift matrix ``D``.

    Entry ``(j, i)`` is 1 exactly when ``j == i + k``, so the top ``k``
    output levels are zero and the bottom ``k`` input levels are dropped.
    """
    if q < 0:
        raise ShapeError("dimension must be nonnegative")
    if k < 0 or k > q:
        raise InvalidShiftError(f"shift {k} outside [0, {q}]")
    return Gf2Matrix.from_rows([0 if j < k else 1 << (j - k) for j in range(q)], q)


def hstack(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    if a.nrows != b.nrows:
        raise ShapeError(f"hstack needs equal row counts, got {a.shape} and {b.shape}")
    shift = a.ncols
    return Gf2Matrix.from_rows([ra | (rb << shift) for ra, rb in zip(a.rows, b.rows)],
                               a.ncols + b.ncols)


def vstack(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    if a.ncols != b.ncols:
        raise ShapeError(f"vstack needs equal column counts, got {a.shape} and {b.shape}")
    return Gf2Matrix.from_rows(a.rows + b.rows, a.ncols)


def _eliminate(rows: list[int], ncols: int, tracked: list[int] | None = None):
    """Gauss-Jordan elimination in place; returns the pivot column list.

    Pivots are taken leftmost column first, topmost eligible row first.
    ``tracked`` (if given) receives the same row operations.
    """
    pivots = []
    prow = 0
    n = len(rows)
    for c in range(ncols):
        if prow == n:
            break
        bit = 1 << c
        sel = next((i for i in range(prow, n) if rows[i] & bit), None)
        if sel is None:
            continue
        if sel != prow:
            rows[prow], rows[sel] = rows[sel], rows[prow]
            if tracked is not None:
                tracked[prow], tracked[sel] = tracked[sel], tracked[prow]
        for i in range(n):
            if i != prow and rows[i] & bit:
                rows[i] ^= rows[prow]
                if tracked is not None:
                    tracked[i] ^= tracked[prow]
        pivots.append(c)
        prow += 1
    return pivots


def rank(m: Gf2Matrix) -> int:
    """Dimension of the row space; 0 for empty or all-zero matrices."""
    rows = [r for r in m.rows if r]
    rk = 0
    while rows:
        pivot = rows.pop()
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
        rk += 1
    return rk


def nullity(m: Gf2Matrix) -> int:
    return m.ncols - rank(m)


@dataclass(frozen=True)
class AffineSolver:
    """Linear maps that solve ``basis @ x = target`` for a fixed ``basis``.

    ``check @ target`` is zero iff the system is consistent, and then
    ``particular @ target`` is the solution with every free variable at 0.
    """

    particular: Gf2Matrix
    check: Gf2Matrix
    pivots: tuple[int, ...]


def affine_solver(basis: Gf2Matrix) -> AffineSolver:
    nr, nc = basis.shape
    rows = list(basis.rows)
    ops = [1 << i for i in range(nr)]
    pivots = _eliminate(rows, nc, ops)
    r = len(pivots)
    part = [0] * nc
    for k, c in enumerate(pivots):
        part[c] = ops[k]
    return AffineSolver(
        particular=Gf2Matrix.from_rows(part, nr),
        check=Gf2Matrix.from_rows(ops[r:], nr),
        pivots=tuple(pivots),
    )


def solve_in_affine(target: Sequence[int], basis: Gf2Matrix) -> np.ndarray | None:
    """Find ``x`` with ``basis @ x == target``, or ``None`` if there is none.

    The returned solution sets every free variable to 0, so the output is a
    deterministic function of the inputs.
    """
    if len(target) != basis.nrows:
        raise ShapeError(f"target of length {len(target)} for {basis.shape} basis")
    t = _bits_to_int(target)
    solver = affine_solver(basis)
    if solver.check.apply_int(t):
        return None
    return _int_to_bits(solver.particular.apply_int(t), basis.ncols)


def column_space_basis(m: Gf2Matrix) -> tuple[int, ...]:
    """Reduced basis of the column space, as packed length-``nrows`` vectors."""
    cols = list(m.T.rows)
    pivots = _eliminate(cols, m.nrows)
    return tuple(cols[: len(pivots)])


def span_table(basis: Sequence[int]) -> np.ndarray:
    """All ``2**len(basis)`` combinations; entry ``k`` XORs the basis vectors set in ``k``."""
    table = np.zeros(1, dtype=np.uint64)
    for v in basis:
        table = np.concatenate([table, table ^ np.uint64(v)])
    return table
