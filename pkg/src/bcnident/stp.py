"""Semi-tensor product algebra over logical matrices.

Logical matrices are stored as 1-based column-index tuples: column ``j`` of
``LogicalMatrix(rows, cols)`` is ``delta_rows^{cols[j]}``. Nothing here is
expanded to a dense array unless :meth:`LogicalMatrix.dense` is called.
Dense operands (numpy integer arrays) go through the textbook definition
``(A kron I_{s/n}) (B kron I_{s/p})`` with ``s = lcm(n, p)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Sequence, Union

import numpy as np

#: Largest row or column count any product may produce.
MAX_DIM = 2**20


class DimensionError(ValueError):
    """An operand has the wrong shape, or a product would exceed :data:`MAX_DIM`."""


def _check_cap(*dims: int) -> None:
    for d in dims:
        if d > MAX_DIM:
            raise DimensionError(f"dimension {d} exceeds cap {MAX_DIM}")


@dataclass(frozen=True)
class DeltaVector:
    """The column ``delta_dim^index`` of ``I_dim``."""

    dim: int
    index: int

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError(f"delta dimension must be positive, got {self.dim}")
        if not 1 <= self.index <= self.dim:
            raise DimensionError(f"delta index {self.index} outside [1, {self.dim}]")

    def dense(self) -> np.ndarray:
        v = np.zeros((self.dim, 1), dtype=np.int64)
        v[self.index - 1, 0] = 1
        return v

    def as_matrix(self) -> LogicalMatrix:
        return LogicalMatrix(self.dim, (self.index,))

    def __repr__(self):
        return f"δ_{self.dim}^{self.index}"


@dataclass(frozen=True)
class LogicalMatrix:
    """A matrix in ``L_{rows x len(cols)}`` stored by column indices."""

    rows: int
    cols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "cols", tuple(int(c) for c in self.cols))
        if self.rows < 1 or not self.cols:
            raise DimensionError("logical matrix needs at least one row and one column")
        _check_cap(self.rows, len(self.cols))
        for c in self.cols:
            if not 1 <= c <= self.rows:
                raise DimensionError(f"column index {c} outside [1, {self.rows}]")

    @property
    def ncols(self) -> int:
        return len(self.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, len(self.cols)

    def column(self, j: int) -> int:
        """Row index of the 1 in (1-based) column ``j``."""
        return self.cols[j - 1]

    def dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int64)
        out[np.asarray(self.cols) - 1, np.arange(len(self.cols))] = 1
        return out

    @classmethod
    def identity(cls, k: int) -> LogicalMatrix:
        return cls(k, tuple(range(1, k + 1)))

    @classmethod
    def from_dense(cls, a: np.ndarray) -> LogicalMatrix:
        a = np.asarray(a)
        if a.ndim != 2 or not np.all((a == 0) | (a == 1)) or not np.all(a.sum(axis=0) == 1):
            raise DimensionError("dense matrix is not logical")
        return cls(a.shape[0], tuple(int(i) + 1 for i in a.argmax(axis=0)))

    def __repr__(self):
        return f"δ_{self.rows}[{' '.join(map(str, self.cols))}]"


def delta(dim: int, *indices: int) -> LogicalMatrix:
    """Shorthand for ``delta_dim[i_1 ... i_k]``."""
    return LogicalMatrix(dim, indices)


Operand = Union[LogicalMatrix, DeltaVector, np.ndarray]


def _as_logical(a) -> LogicalMatrix | None:
    if isinstance(a, LogicalMatrix):
        return a
    if isinstance(a, DeltaVector):
        return a.as_matrix()
    return None


def _as_dense(a) -> np.ndarray:
    if isinstance(a, (LogicalMatrix, DeltaVector)):
        return a.dense()
    a = np.asarray(a)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise DimensionError("operands must be matrices")
    return a


def _kron_logical(a: LogicalMatrix, b: LogicalMatrix) -> LogicalMatrix:
    _check_cap(a.rows * b.rows, a.ncols * b.ncols)
    return LogicalMatrix(
        a.rows * b.rows,
        tuple((ia - 1) * b.rows + ib for ia in a.cols for ib in b.cols),
    )


def _compose(a: LogicalMatrix, b: LogicalMatrix) -> LogicalMatrix:
    # ordinary product when a.ncols == b.rows: column selection
    return LogicalMatrix(a.rows, tuple(a.cols[j - 1] for j in b.cols))


def kron(a: Operand, b: Operand):
    """Kronecker product; logical operands stay logical."""
    la, lb = _as_logical(a), _as_logical(b)
    if la is not None and lb is not None:
        out = _kron_logical(la, lb)
        if isinstance(a, DeltaVector) and isinstance(b, DeltaVector):
            return DeltaVector(out.rows, out.cols[0])
        return out
    da, db = _as_dense(a), _as_dense(b)
    _check_cap(da.shape[0] * db.shape[0], da.shape[1] * db.shape[1])
    return np.kron(da, db)


def _stp2(a, b):
    la, lb = _as_logical(a), _as_logical(b)
    if la is not None and lb is not None:
        n, p = la.ncols, lb.rows
        s = math.lcm(n, p)
        _check_cap(la.rows * s // n, lb.ncols * s // p, s)
        left = la if s == n else _kron_logical(la, LogicalMatrix.identity(s // n))
        right = lb if s == p else _kron_logical(lb, LogicalMatrix.identity(s // p))
        out = _compose(left, right)
        if isinstance(b, DeltaVector) and out.ncols == 1:
            return DeltaVector(out.rows, out.cols[0])
        return out
    da, db = _as_dense(a), _as_dense(b)
    n, p = da.shape[1], db.shape[0]
    s = math.lcm(n, p)
    _check_cap(da.shape[0] * s // n, db.shape[1] * s // p, s)
    if n == p:
        return da @ db
    return np.kron(da, np.eye(s // n, dtype=da.dtype)) @ np.kron(db, np.eye(s // p, dtype=db.dtype))


def stp(a: Operand, b: Operand, *rest: Operand):
    """Left-to-right semi-tensor product ``a ⋉ b ⋉ ...``.

    With logical (or delta) operands the result is a :class:`LogicalMatrix`,
    or a :class:`DeltaVector` when the last factor is a delta vector and the
    product has a single column. Any dense operand makes the result dense.
    """
    return reduce(_stp2, rest, _stp2(a, b))


def khatri_rao(a: LogicalMatrix, b: LogicalMatrix, *rest: LogicalMatrix) -> LogicalMatrix:
    """Column-wise Kronecker product ``a * b * ...``."""

    def pair(x: LogicalMatrix, y: LogicalMatrix) -> LogicalMatrix:
        if x.ncols != y.ncols:
            raise DimensionError(f"Khatri-Rao needs equal column counts, got {x.ncols} and {y.ncols}")
        _check_cap(x.rows * y.rows)
        return LogicalMatrix(
            x.rows * y.rows,
            tuple((i - 1) * y.rows + k for i, k in zip(x.cols, y.cols)),
        )

    return reduce(pair, rest, pair(a, b))


def index_row(h: LogicalMatrix) -> list[int]:
    """``[1 2 ... rows] @ h``: the superscripts of the columns of ``h``."""
    return list(h.cols)


def power_of_two(k: int) -> int:
    """Exponent ``e`` with ``2**e == k``; raises for anything else."""
    if k < 1 or k & (k - 1):
        raise DimensionError(f"{k} is not a power of two")
    return k.bit_length() - 1


def stack_indices(indices: Sequence[int], dims: Sequence[int]) -> int:
    """Index of ``delta_{d1}^{i1} ⋉ delta_{d2}^{i2} ⋉ ...`` in ``Delta_{d1 d2 ...}``."""
    out = 0
    for i, d in zip(indices, dims):
        out = out * d + (i - 1)
    return out + 1


def split_index(index: int, dims: Sequence[int]) -> tuple[int, ...]:
    """Inverse of :func:`stack_indices`."""
    rest = index - 1
    parts = []
    for d in reversed(dims):
        rest, r = divmod(rest, d)
        parts.append(r + 1)
    return tuple(reversed(parts))
