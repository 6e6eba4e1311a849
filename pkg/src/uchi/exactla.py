"""Exact linear algebra over a prime field F_p.

Scalars are plain Python ints reduced into ``[0, p)``; the modulus travels
with the container (matrix, polynomial), never with the scalar.  Sparse
vectors are ``dict[int, int]`` maps from coordinate to a nonzero residue.

Two kernel backends are provided:

* a sparse column-reduction kernel that records, for every column, the
  combination of original columns it was reduced to; columns that reduce to
  zero hand back kernel vectors directly.  A static fill-reducing column
  order (sparsest first, or a caller-supplied order) keeps fill-in low;
* a dense numpy row-reduction used as the oracle backend on small inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError

SparseVec = dict


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def check_prime(p: int) -> int:
    """Return ``p`` if it is an odd prime, raise :class:`InputError` otherwise."""
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise InputError(f"p={p} is not a prime")
    if p == 2:
        raise InputError("p=2 is not supported: characteristic must be > 2")
    return int(p)


def field_inverse(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse modulo {p}")
    return pow(a, p - 2, p)


def inverse_table(p: int) -> list[int]:
    return [0] + [pow(a, p - 2, p) for a in range(1, p)]


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FpPoly:
    """Polynomial over F_p, coefficients lowest degree first, no trailing zeros."""

    coeffs: tuple
    p: int

    def __post_init__(self):
        c = [int(x) % self.p for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_roots(cls, roots: Iterable[int], p: int) -> "FpPoly":
        f = cls((1,), p)
        for r in roots:
            f = f * cls((-r, 1), p)
        return f

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "FpPoly":
        if self.is_zero():
            return self
        inv = field_inverse(self.coeffs[-1], self.p)
        return FpPoly(tuple(c * inv for c in self.coeffs), self.p)

    def derivative(self) -> "FpPoly":
        return FpPoly(tuple(i * c for i, c in enumerate(self.coeffs))[1:], self.p)

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def __add__(self, other: "FpPoly") -> "FpPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return FpPoly(tuple(x + y for x, y in zip(a, b)), self.p)

    def __neg__(self) -> "FpPoly":
        return FpPoly(tuple(-c for c in self.coeffs), self.p)

    def __sub__(self, other: "FpPoly") -> "FpPoly":
        return self + (-other)

    def __mul__(self, other: "FpPoly") -> "FpPoly":
        if self.is_zero() or other.is_zero():
            return FpPoly((), self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return FpPoly(tuple(out), self.p)

    def divmod(self, other: "FpPoly") -> tuple["FpPoly", "FpPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        r = list(self.coeffs)
        q = [0] * max(len(r) - len(other.coeffs) + 1, 0)
        lead_inv = field_inverse(other.coeffs[-1], p)
        d = other.degree
        while len(r) - 1 >= d and r:
            shift = len(r) - 1 - d
            c = r[-1] * lead_inv % p
            q[shift] = c
            for i, b in enumerate(other.coeffs):
                r[shift + i] = (r[shift + i] - c * b) % p
            while r and r[-1] == 0:
                r.pop()
        return FpPoly(tuple(q), p), FpPoly(tuple(r), p)

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mon = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                terms.append(f"{c}{mon}" if c != 1 or i == 0 else mon)
        return " + ".join(reversed(terms))


def poly_gcd(f: FpPoly, g: FpPoly) -> FpPoly:
    while not g.is_zero():
        f, g = g, f.divmod(g)[1]
    return f.monic()


def is_squarefree(f: FpPoly) -> bool:
    """True iff gcd(f, f') = 1."""
    if f.is_zero():
        raise InputError("the zero polynomial has no squarefree test")
    return poly_gcd(f, f.derivative()).degree == 0


def poly_roots(f: FpPoly) -> list[int]:
    return [x for x in range(f.p) if f(x) == 0]


def splits_squarefree(f: FpPoly) -> bool:
    """f is a product of distinct linear factors over F_p."""
    return is_squarefree(f) and len(poly_roots(f)) == f.degree


def minimal_polynomial(M, p: int) -> FpPoly:
    """Monic polynomial of least degree annihilating the square matrix ``M``."""
    A = np.asarray(M, dtype=np.int64) % p
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError("minimal_polynomial needs a square matrix")
    n = A.shape[0]
    powers = [np.eye(n, dtype=np.int64)]
    for k in range(1, n + 1):
        powers.append(powers[-1] @ A % p)
        stack = np.stack([P.ravel() for P in powers], axis=1)
        ker = dense_kernel(stack, p)
        if len(ker):
            # first dependency: the kernel is a line and involves A^k
            v = ker[0]
            return FpPoly(tuple(int(c) for c in v), p).monic()
    raise AssertionError("Cayley-Hamilton violated")  # pragma: no cover


def matrix_power_mod(A, e: int, p: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64) % p
    R = np.eye(A.shape[0], dtype=np.int64)
    while e:
        if e & 1:
            R = R @ A % p
        A = A @ A % p
        e >>= 1
    return R


# ---------------------------------------------------------------------------
# dense backend
# ---------------------------------------------------------------------------

def _work_dtype(p: int):
    # products of two residues plus one residue must fit
    return np.int16 if p * p < 2 ** 14 else np.int64


def dense_rref(A, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``A`` over F_p; returns (nonzero rows, pivot columns)."""
    R = np.array(A, dtype=np.int64) % p
    R = R.astype(_work_dtype(p))
    m, n = R.shape
    inv = np.array(inverse_table(p), dtype=R.dtype)
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = R[r] * inv[R[r, c]] % p
        col = R[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            R[rows] = (R[rows] + (p - col[rows, None]) * R[r][None, :]) % p
        pivots.append(c)
        r += 1
    return R[:r].astype(np.int64), pivots


def dense_rank(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(dense_rref(A, p)[1])


def dense_kernel(A, p: int) -> np.ndarray:
    """Kernel basis as rows of an array, in reduced echelon form."""
    A = np.asarray(A, dtype=np.int64)
    m, n = A.shape
    if m == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = dense_rref(A, p)
    free = [c for c in range(n) if c not in set(pivots)]
    K = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        K[i, f] = 1
        for row, c in enumerate(pivots):
            K[i, c] = (-R[row, f]) % p
    if len(K):
        K = dense_rref(K, p)[0]
    return K


def dense_solve(A, b, p: int) -> np.ndarray | None:
    """One solution x of A x = b over F_p, or None if inconsistent."""
    A = np.asarray(A, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1) % p
    R, pivots = dense_rref(np.hstack([A, b]), p)
    n = A.shape[1]
    if pivots and pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for row, c in enumerate(pivots):
        x[c] = R[row, n]
    return x


def dense_inverse(A, p: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64) % p
    n = A.shape[0]
    R, pivots = dense_rref(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise InputError("matrix is singular modulo p")
    return R[:n, n:] % p


def batch_rank(As, p: int) -> np.ndarray:
    """Ranks over F_p of a stack of equally shaped matrices, shape (B, m, n)."""
    A = (np.array(As, dtype=np.int64) % p).astype(_work_dtype(p))
    B, m, n = A.shape
    inv = np.array(inverse_table(p), dtype=A.dtype)
    used = np.zeros((B, m), dtype=bool)
    rank = np.zeros(B, dtype=np.int64)
    ar = np.arange(B)
    for c in range(n):
        cand = (A[:, :, c] != 0) & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        idx = ar[has]
        piv = cand[idx].argmax(axis=1)
        prow = A[idx, piv, :]
        prow = prow * inv[prow[:, c]][:, None] % p
        A[idx, piv, :] = prow
        factors = A[idx, :, c].copy()
        factors[np.arange(idx.size), piv] = 0
        A[idx] = (A[idx] + (p - factors[:, :, None]) * prow[:, None, :]) % p
        used[idx, piv] = True
        rank[idx] += 1
    return rank


# ---------------------------------------------------------------------------
# sparse matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SparseMatFp:
    """Immutable sparse matrix over F_p stored column by column.

    ``columns[j]`` maps row index to a nonzero residue.
    """

    rows: int
    cols: int
    p: int
    columns: tuple

    def __post_init__(self):
        if len(self.columns) != self.cols:
            raise InputError("column count mismatch")
        for col in self.columns:
            for r, v in col.items():
                if not 0 <= r < self.rows:
                    raise InputError(f"row index {r} out of range")
                if not 0 < v < self.p:
                    raise InputError(f"entry {v} is not a nonzero residue mod {self.p}")

    @classmethod
    def from_columns(cls, rows: int, p: int, columns: Iterable[Mapping[int, int]]) -> "SparseMatFp":
        cols = []
        for col in columns:
            cols.append({int(r): int(v) % p for r, v in col.items() if int(v) % p})
        return cls(rows, len(cols), p, tuple(cols))

    @classmethod
    def from_entries(cls, rows: int, cols: int, p: int,
                     entries: Iterable[tuple[int, int, int]]) -> "SparseMatFp":
        out = [dict() for _ in range(cols)]
        for r, c, v in entries:
            if not 0 <= c < cols:
                raise InputError(f"column index {c} out of range")
            if r in out[c]:
                raise InputError(f"duplicate coordinate ({r}, {c})")
            v %= p
            if v:
                out[c][r] = v
        return cls(rows, cols, p, tuple(out))

    @classmethod
    def from_dense(cls, A, p: int) -> "SparseMatFp":
        A = np.asarray(A, dtype=np.int64) % p
        m, n = A.shape
        return cls(m, n, p, tuple({int(r): int(A[r, c]) for r in np.flatnonzero(A[:, c])}
                                  for c in range(n)))

    @classmethod
    def identity(cls, n: int, p: int) -> "SparseMatFp":
        return cls(n, n, p, tuple({i: 1} for i in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int, p: int) -> "SparseMatFp":
        return cls(rows, cols, p, tuple({} for _ in range(cols)))

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def entries(self) -> list[tuple[int, int, int]]:
        return sorted((r, c, v) for c, col in enumerate(self.columns) for r, v in col.items())

    def to_dense(self) -> np.ndarray:
        A = np.zeros((self.rows, self.cols), dtype=np.int64)
        for c, col in enumerate(self.columns):
            for r, v in col.items():
                A[r, c] = v
        return A

    def matvec(self, v: Mapping[int, int] | Sequence[int]) -> SparseVec:
        if not isinstance(v, Mapping):
            v = {i: x for i, x in enumerate(v) if x}
        p = self.p
        acc: dict[int, int] = {}
        for j, x in v.items():
            for r, y in self.columns[j].items():
                acc[r] = (acc.get(r, 0) + x * y) % p
        return {r: y for r, y in acc.items() if y}

    def restrict(self, basis: Sequence[Mapping[int, int]]) -> "SparseMatFp":
        """The matrix of M composed with the inclusion of span(basis)."""
        return SparseMatFp.from_columns(self.rows, self.p, (self.matvec(b) for b in basis))

    @staticmethod
    def vstack(Ms: Sequence["SparseMatFp"]) -> "SparseMatFp":
        _check_stack(Ms)
        p, ncols = Ms[0].p, Ms[0].cols
        cols = [dict() for _ in range(ncols)]
        offset = 0
        for M in Ms:
            for c, col in enumerate(M.columns):
                cols[c].update({offset + r: v for r, v in col.items()})
            offset += M.rows
        return SparseMatFp(offset, ncols, p, tuple(cols))


def _check_stack(Ms: Sequence[SparseMatFp]) -> None:
    if not Ms:
        raise InputError("empty matrix list")
    ncols, p = Ms[0].cols, Ms[0].p
    for M in Ms:
        if M.cols != ncols:
            raise InputError(f"mismatched column counts: {M.cols} != {ncols}")
        if M.p != p:
            raise InputError("mismatched moduli")


def sparsest_first(M: SparseMatFp) -> list[int]:
    return sorted(range(M.cols), key=lambda c: (len(M.columns[c]), c))


def column_reduce(columns: Sequence[Mapping[int, int]], p: int,
                  order: Iterable[int] | None = None) -> tuple[int, list[SparseVec]]:
    """Reduce columns against each other; return (rank, kernel vectors).

    Each kernel vector is the combination of original column indices that
    reduced to zero.  Pivot of a partially reduced column is its largest row
    index, so ``order`` together with the row numbering controls fill-in.
    """
    inv = inverse_table(p)
    pivots: dict[int, tuple[dict, dict]] = {}
    kernel: list[SparseVec] = []
    if order is None:
        order = range(len(columns))
    for ci in order:
        v = dict(columns[ci])
        t = {ci: 1}
        while v:
            lo = max(v)
            hit = pivots.get(lo)
            if hit is None:
                c = inv[v[lo]]
                if c != 1:
                    v = {k: x * c % p for k, x in v.items()}
                    t = {k: x * c % p for k, x in t.items()}
                pivots[lo] = (v, t)
                break
            w, wt = hit
            c = v[lo]
            for k, x in w.items():
                y = (v.get(k, 0) - c * x) % p
                if y:
                    v[k] = y
                else:
                    del v[k]
            for k, x in wt.items():
                y = (t.get(k, 0) - c * x) % p
                if y:
                    t[k] = y
                else:
                    del t[k]
        else:
            kernel.append(t)
    return len(pivots), kernel


def echelon_form(vectors: Iterable[Mapping[int, int]], p: int) -> list[SparseVec]:
    """Reduced echelon basis of span(vectors): pivot = lowest coordinate, normalised to 1."""
    inv = inverse_table(p)
    basis: dict[int, dict] = {}
    for vec in vectors:
        v = {k: x % p for k, x in vec.items() if x % p}
        for piv in [q for q in basis if q in v]:
            c = v.get(piv)
            if not c:
                continue
            for k, x in basis[piv].items():
                y = (v.get(k, 0) - c * x) % p
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
        if not v:
            continue
        piv = min(v)
        c = inv[v[piv]]
        v = {k: x * c % p for k, x in v.items()}
        for q, w in basis.items():
            c = w.get(piv)
            if c:
                for k, x in v.items():
                    y = (w.get(k, 0) - c * x) % p
                    if y:
                        w[k] = y
                    else:
                        w.pop(k, None)
        basis[piv] = v
    return [dict(sorted(basis[q].items())) for q in sorted(basis)]


def kernel_basis(M: SparseMatFp, *, order: Iterable[int] | None = None,
                 echelon: bool = True, verify: bool = True) -> list[SparseVec]:
    """Basis of {v : M v = 0}.

    With ``echelon`` the basis is in reduced echelon form, which makes it a
    canonical function of the subspace.
    """
    if order is None:
        order = sparsest_first(M)
    rank, ker = column_reduce(M.columns, M.p, order)
    if rank + len(ker) != M.cols:
        raise AssertionError("rank-nullity violated")  # pragma: no cover
    if echelon:
        ker = echelon_form(ker, M.p)
    if verify:
        for v in ker:
            if M.matvec(v):
                raise AssertionError("kernel vector not annihilated")  # pragma: no cover
    return ker


def rank(M: SparseMatFp) -> int:
    return M.cols - len(kernel_basis(M, echelon=False, verify=False))


def stacked_kernel(Ms: Sequence[SparseMatFp], *, method: str = "stack",
                   order: Iterable[int] | None = None,
                   echelon: bool = True, verify: bool = True) -> tuple[int, list[SparseVec]]:
    """dim and basis of the common kernel of matrices sharing a column count.

    ``method="stack"`` reduces the vertical concatenation in one pass;
    ``method="iterative"`` computes ker M_1, restricts M_2 to it, and so on.
    Both produce the same echelon basis.
    """
    _check_stack(Ms)
    p, ncols = Ms[0].p, Ms[0].cols
    if method == "stack":
        big = SparseMatFp.vstack(Ms)
        basis = kernel_basis(big, order=order, echelon=echelon, verify=False)
    elif method == "iterative":
        order = list(order) if order is not None else None
        basis = None
        for M in Ms:
            if basis is None:
                basis = kernel_basis(M, order=order, echelon=False, verify=False)
                continue
            if not basis:
                break
            R = M.restrict(basis)
            _, combos = column_reduce(R.columns, p, sparsest_first(R))
            basis = [_combine(basis, t, p) for t in combos]
        if echelon:
            basis = echelon_form(basis, p)
    else:
        raise InputError(f"unknown stacking method {method!r}")
    if verify:
        for M in Ms:
            for v in basis:
                if M.matvec(v):
                    raise AssertionError("kernel vector not annihilated")  # pragma: no cover
    return len(basis), basis


def _combine(vectors: Sequence[Mapping[int, int]], coeffs: Mapping[int, int], p: int) -> SparseVec:
    acc: dict[int, int] = {}
    for a, c in coeffs.items():
        for j, x in vectors[a].items():
            acc[j] = (acc.get(j, 0) + c * x) % p
    return {j: x for j, x in acc.items() if x}


def sparse_to_dense(vectors: Sequence[Mapping[int, int]], n: int) -> np.ndarray:
    out = np.zeros((len(vectors), n), dtype=np.int64)
    for i, v in enumerate(vectors):
        for j, x in v.items():
            out[i, j] = x
    return out
