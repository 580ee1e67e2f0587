"""Dense matrices over the two-element field, stored as bit-packed rows.

Row ``i`` of an :class:`F2Matrix` is a Python ``int`` whose bit ``j`` is the
entry in column ``j``.  XOR of rows is then a single big-integer operation,
which keeps Gaussian elimination fast enough for the Khovanov blocks.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np


def iter_bits(x: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class F2Matrix:
    """An ``nrows`` x ``ncols`` matrix over F2.

    Instances are treated as immutable; every operation returns a new matrix.
    """

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[int] | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            self.rows = (0,) * nrows
        else:
            rows = tuple(rows)
            if len(rows) != nrows:
                raise ValueError(f"expected {nrows} rows, got {len(rows)}")
            limit = 1 << ncols
            for r in rows:
                if r < 0 or r >= limit:
                    raise ValueError("row data exceeds the column count")
            self.rows = rows

    # -- constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> "F2Matrix":
        return cls(nrows, nrows if ncols is None else ncols)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_dense(cls, data) -> "F2Matrix":
        arr = np.asarray(data, dtype=np.int64) % 2
        if arr.ndim != 2:
            if arr.size == 0:
                return cls(0, 0)
            raise ValueError("expected a 2-d array")
        nrows, ncols = arr.shape
        rows = []
        for i in range(nrows):
            r = 0
            for j in np.flatnonzero(arr[i]):
                r |= 1 << int(j)
            rows.append(r)
        return cls(nrows, ncols, rows)

    @classmethod
    def from_entries(cls, nrows: int, ncols: int,
                     entries: Iterable[tuple[int, int]]) -> "F2Matrix":
        """Build from (row, col) positions; repeated positions cancel mod 2."""
        rows = [0] * nrows
        for i, j in entries:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i}, {j}) out of range")
            rows[i] ^= 1 << j
        return cls(nrows, ncols, rows)

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[int]) -> "F2Matrix":
        """Build from column bitsets (bit ``i`` of a column is row ``i``)."""
        return cls(len(columns), nrows, columns).T

    @classmethod
    def block_diag(cls, blocks: Sequence["F2Matrix"]) -> "F2Matrix":
        rows = []
        c0 = 0
        for b in blocks:
            rows.extend(r << c0 for r in b.rows)
            c0 += b.ncols
        return cls(len(rows), c0, rows)

    # -- basic protocol -----------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        return (self.rows[i] >> j) & 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, F2Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.nrows, self.ncols, self.rows))

    def __repr__(self) -> str:
        if self.nrows * self.ncols <= 64:
            body = "; ".join(
                "".join(str((r >> j) & 1) for j in range(self.ncols)) for r in self.rows)
            return f"F2Matrix({self.nrows}x{self.ncols}: {body})"
        return f"F2Matrix({self.nrows}x{self.ncols}, nnz={self.nnz})"

    def to_numpy(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in iter_bits(r):
                out[i, j] = 1
        return out

    def entries(self) -> Iterator[tuple[int, int]]:
        for i, r in enumerate(self.rows):
            for j in iter_bits(r):
                yield i, j

    @property
    def nnz(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def is_zero(self) -> bool:
        return not any(self.rows)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: "F2Matrix") -> "F2Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return F2Matrix(self.nrows, self.ncols,
                        [a ^ b for a, b in zip(self.rows, other.rows)])

    __sub__ = __add__

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        orows = other.rows
        out = []
        for r in self.rows:
            acc = 0
            while r:
                low = r & -r
                acc ^= orows[low.bit_length() - 1]
                r ^= low
            out.append(acc)
        return F2Matrix(self.nrows, other.ncols, out)

    def apply(self, vec: int) -> int:
        """Multiply by a column vector packed as an int (bit ``j`` = entry ``j``)."""
        out = 0
        for i, r in enumerate(self.rows):
            if (r & vec).bit_count() & 1:
                out |= 1 << i
        return out

    @property
    def T(self) -> "F2Matrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            bit = 1 << i
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= bit
                r ^= low
        return F2Matrix(self.ncols, self.nrows, cols)

    def columns(self) -> list[int]:
        """Column bitsets (bit ``i`` of column ``j`` is entry ``(i, j)``)."""
        return list(self.T.rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "F2Matrix":
        out = []
        for i in rows:
            r = self.rows[i]
            v = 0
            for k, j in enumerate(cols):
                if (r >> j) & 1:
                    v |= 1 << k
            out.append(v)
        return F2Matrix(len(rows), len(cols), out)

    def hstack(self, other: "F2Matrix") -> "F2Matrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        s = self.ncols
        return F2Matrix(self.nrows, s + other.ncols,
                        [a | (b << s) for a, b in zip(self.rows, other.rows)])

    def vstack(self, other: "F2Matrix") -> "F2Matrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return F2Matrix(self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    # -- linear algebra -----------------------------------------------------
    def rank(self) -> int:
        return len(row_basis(self.rows))

    def kernel(self) -> "F2Matrix":
        """Matrix whose columns form a basis of ``{x : self @ x = 0}``."""
        return F2Matrix.from_columns(self.ncols, kernel_vectors(self.columns(), self.ncols))

    def inverse(self) -> "F2Matrix":
        if not self.is_square():
            raise ValueError("only square matrices are invertible")
        n = self.nrows
        work = [r | (1 << (n + i)) for i, r in enumerate(self.rows)]
        mask = (1 << n) - 1
        for col in range(n):
            bit = 1 << col
            piv = next((k for k in range(col, n) if work[k] & bit), None)
            if piv is None:
                raise ZeroDivisionError("matrix is singular")
            work[col], work[piv] = work[piv], work[col]
            prow = work[col]
            for k in range(n):
                if k != col and work[k] & bit:
                    work[k] ^= prow
        return F2Matrix(n, n, [(r >> n) & mask for r in work])


def row_basis(vectors: Iterable[int]) -> dict[int, int]:
    """Echelon basis of the span of ``vectors`` keyed by each row's lowest bit.

    Every stored row has a distinct lowest set bit, and no stored row has a
    bit set at another row's pivot position below its own pivot.
    """
    basis: dict[int, int] = {}
    for v in vectors:
        v = reduce_vector(v, basis)
        if v:
            basis[v & -v] = v
    return basis


def reduce_vector(v: int, basis: dict[int, int]) -> int:
    """Reduce ``v`` against an echelon basis from :func:`row_basis`."""
    while v:
        low = v & -v
        b = basis.get(low)
        if b is None:
            return v
        v ^= b
    return 0


def rank_of(vectors: Iterable[int]) -> int:
    return len(row_basis(vectors))


def kernel_vectors(columns: Sequence[int], ncols: int | None = None) -> list[int]:
    """Basis of the null space of the matrix with the given column bitsets.

    Returns vectors packed as ints indexed by column number.
    """
    if ncols is not None and ncols != len(columns):
        raise ValueError("column count mismatch")
    shift = max((c.bit_length() for c in columns), default=0)
    basis: dict[int, int] = {}
    kernel = []
    low_mask = (1 << shift) - 1
    for j, c in enumerate(columns):
        v = c | (1 << (shift + j))
        while v & low_mask:
            low = v & -v
            b = basis.get(low)
            if b is None:
                break
            v ^= b
        if v & low_mask:
            basis[v & -v] = v
        else:
            kernel.append(v >> shift)
    return kernel


class Coordinates:
    """Express vectors in a fixed basis, modulo an optional subspace.

    Used to read off homology classes: the basis is a set of homology
    representatives and the subspace is the boundaries.
    """

    def __init__(self, basis: Sequence[int], modulo: Sequence[int] = ()):
        self.size = len(basis)
        self._modulo = row_basis(modulo)
        shift = max([v.bit_length() for v in list(basis) + list(modulo)] + [0])
        self._shift = shift
        self._mask = (1 << shift) - 1
        tracked: dict[int, int] = dict(self._modulo)
        for k, v in enumerate(basis):
            w = v | (1 << (shift + k))
            while w & self._mask:
                low = w & -w
                b = tracked.get(low)
                if b is None:
                    break
                w ^= b
            if not w & self._mask:
                raise ValueError("basis vectors are dependent modulo the subspace")
            tracked[w & -w] = w
        self._tracked = tracked

    def __call__(self, v: int) -> int:
        """Coordinates (as a bitset over basis indices) of ``v``.

        Raises ``ValueError`` if ``v`` is not in the span.
        """
        if v >> self._shift:
            raise ValueError("vector outside the ambient space")
        w = v
        while w & self._mask:
            low = w & -w
            b = self._tracked.get(low)
            if b is None:
                raise ValueError("vector is not in the span of the basis")
            w ^= b
        return w >> self._shift
