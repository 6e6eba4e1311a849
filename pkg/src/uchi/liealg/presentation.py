"""Restricted Lie algebras given by structure constants over F_p."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .. import exactla
from ..errors import InputError


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LiePresentation:
    """A restricted Lie algebra with a fixed ordered basis x_0..x_{n-1}.

    ``structure[i, j, k]`` is the coefficient of x_k in [x_i, x_j];
    row ``pmap[i]`` holds the coordinates of x_i^[p]; ``gram`` is the Gram
    matrix of the chosen trace form.  ``cartan`` lists the basis elements
    spanning the fixed maximal torus (central elements included).
    ``realization`` optionally carries integer matrices of a faithful
    representation, used only as an independent oracle.
    """

    p: int
    labels: tuple
    structure: np.ndarray
    pmap: np.ndarray
    gram: np.ndarray
    rank: int
    cartan: tuple = ()
    name: str = ""
    realization: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        exactla.check_prime(self.p)
        n = len(self.labels)
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        object.__setattr__(self, "cartan", tuple(int(i) for i in self.cartan))
        object.__setattr__(self, "structure", _frozen(np.asarray(self.structure) % self.p))
        object.__setattr__(self, "pmap", _frozen(np.asarray(self.pmap) % self.p))
        object.__setattr__(self, "gram", _frozen(np.asarray(self.gram) % self.p))
        if self.structure.shape != (n, n, n):
            raise InputError(f"structure constants must have shape {(n, n, n)}")
        if self.pmap.shape != (n, n) or self.gram.shape != (n, n):
            raise InputError("pmap and gram must be n x n")
        if any(not 0 <= i < n for i in self.cartan):
            raise InputError("cartan index out of range")
        if len(set(self.labels)) != n:
            raise InputError("basis labels must be distinct")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"{self.name or 'algebra'} has no basis element {label!r}") from None

    def basis_vector(self, i: int | str) -> np.ndarray:
        if isinstance(i, str):
            i = self.index(i)
        v = np.zeros(self.n, dtype=np.int64)
        v[i] = 1
        return v

    def element(self, **coeffs) -> np.ndarray:
        """Element from label=coefficient keywords, e.g. ``g.element(e12=1, e23=1)``."""
        v = np.zeros(self.n, dtype=np.int64)
        for lab, c in coeffs.items():
            v[self.index(lab)] = c
        return v % self.p

    # -- derived data ----------------------------------------------------

    @cached_property
    def bracket_table(self) -> tuple:
        """Sparse [x_i, x_j] as ``table[i][j] = ((k, c), ...)``."""
        S = self.structure
        return tuple(
            tuple(tuple((int(k), int(S[i, j, k])) for k in np.flatnonzero(S[i, j]))
                  for j in range(self.n))
            for i in range(self.n))

    @cached_property
    def pmap_table(self) -> tuple:
        return tuple(tuple((int(k), int(self.pmap[i, k])) for k in np.flatnonzero(self.pmap[i]))
                     for i in range(self.n))

    @cached_property
    def weights(self) -> tuple:
        """weights[i][j] = eigenvalue of ad(x_cartan[j]) on x_i (meaningful once validated)."""
        S = self.structure
        return tuple(tuple(int(S[h, i, i]) for h in self.cartan) for i in range(self.n))

    @cached_property
    def central(self) -> tuple:
        """Basis elements bracketing to zero with every basis element."""
        S = self.structure
        return tuple(i for i in range(self.n) if not S[i].any())

    @cached_property
    def gram_inverse(self) -> np.ndarray:
        return _frozen(exactla.dense_inverse(self.gram, self.p))

    def with_name(self, name: str) -> "LiePresentation":
        return LiePresentation(self.p, self.labels, self.structure, self.pmap, self.gram,
                               self.rank, self.cartan, name, self.realization)

    def __repr__(self) -> str:
        return f"LiePresentation({self.name or '?'}, p={self.p}, n={self.n}, rank={self.rank})"


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass
class AxiomResult:
    name: str
    passed: bool
    witness: tuple | None = None
    detail: str = ""


@dataclass
class ValidationReport:
    results: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def failures(self) -> list:
        return [r for r in self.results if not r.passed]

    def summary(self) -> str:
        lines = []
        for r in self.results:
            tag = "PASS" if r.passed else "FAIL"
            extra = f" witness={r.witness}" if r.witness is not None else ""
            lines.append(f"{tag} {r.name}{extra}{(' ' + r.detail) if r.detail else ''}")
        return "\n".join(lines)


def ad_basis_matrices(g: LiePresentation) -> np.ndarray:
    """A[i] is the matrix of ad(x_i): column j holds [x_i, x_j]."""
    return np.transpose(g.structure, (0, 2, 1)).copy()


def validate_presentation(g: LiePresentation) -> ValidationReport:
    """Check every presentation axiom; failures carry a witness index tuple."""
    p, n, S = g.p, g.n, g.structure
    res = []

    anti = (S + np.transpose(S, (1, 0, 2))) % p
    bad = np.argwhere(anti)
    res.append(AxiomResult("antisymmetry", not len(bad), tuple(int(t) for t in bad[0]) if len(bad) else None))
    diag = np.argwhere(S[np.arange(n), np.arange(n)])
    res.append(AxiomResult("alternating", not len(diag), (int(diag[0][0]),) * 2 if len(diag) else None))

    # J[i,j,k,:] = [[x_i,x_j],x_k] + [[x_j,x_k],x_i] + [[x_k,x_i],x_j]
    t1 = np.einsum("ijm,mkl->ijkl", S, S)
    J = (t1 + np.transpose(t1, (1, 2, 0, 3)) + np.transpose(t1, (2, 0, 1, 3))) % p
    bad = np.argwhere(J.any(axis=3))
    res.append(AxiomResult("jacobi", not len(bad), tuple(int(t) for t in bad[0][:3]) if len(bad) else None))

    A = ad_basis_matrices(g)
    witness = None
    for i in range(n):
        lhs = np.einsum("k,kab->ab", g.pmap[i], A) % p
        rhs = exactla.matrix_power_mod(A[i], p, p)
        if not np.array_equal(lhs, rhs):
            witness = (i,)
            break
    res.append(AxiomResult("restrictedness", witness is None, witness, "ad(x^[p]) = ad(x)^p"))

    K = g.gram
    res.append(AxiomResult("gram_symmetric", bool(np.array_equal(K, K.T))))
    # K([x_i,x_j],x_k) == K(x_i,[x_j,x_k])
    lhs = np.einsum("ijm,mk->ijk", S, K) % p
    rhs = np.einsum("im,jkm->ijk", K, S) % p
    bad = np.argwhere(lhs != rhs)
    res.append(AxiomResult("gram_invariant", not len(bad), tuple(int(t) for t in bad[0]) if len(bad) else None))
    res.append(AxiomResult("gram_nondegenerate", exactla.dense_rank(K, p) == n))

    witness = None
    for h in g.cartan:
        off = A[h].copy()
        off[np.arange(n), np.arange(n)] = 0
        if off.any():
            r, c = np.argwhere(off)[0]
            witness = (h, int(c))
            break
    res.append(AxiomResult("cartan_diagonal", witness is None, witness))
    if g.cartan:
        res.append(AxiomResult("cartan_count", len(g.cartan) == g.rank,
                               detail=f"{len(g.cartan)} toral generators, rank {g.rank}"))
    return ValidationReport(res)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def to_json(g: LiePresentation) -> str:
    S = g.structure
    brackets = []
    for i in range(g.n):
        for j in range(g.n):
            ks = np.flatnonzero(S[i, j])
            if len(ks):
                brackets.append([i, j, [[int(k), int(S[i, j, k])] for k in ks]])
    doc = {
        "p": g.p,
        "n": g.n,
        "labels": list(g.labels),
        "brackets": brackets,
        "pmap": [[i, [[int(k), int(g.pmap[i, k])] for k in np.flatnonzero(g.pmap[i])]]
                 for i in range(g.n)],
        "gram": g.gram.tolist(),
        "rank": g.rank,
        "cartan": list(g.cartan),
    }
    return json.dumps(doc, separators=(",", ":"))


def from_json(text: str, name: str = "") -> LiePresentation:
    try:
        doc = json.loads(text)
        p, n = int(doc["p"]), int(doc["n"])
        S = np.zeros((n, n, n), dtype=np.int64)
        for i, j, terms in doc["brackets"]:
            for k, c in terms:
                S[i, j, k] = c
        P = np.zeros((n, n), dtype=np.int64)
        for i, terms in doc["pmap"]:
            for k, c in terms:
                P[i, k] = c
        return LiePresentation(p, tuple(doc["labels"]), S, P, np.array(doc["gram"]),
                               int(doc["rank"]), tuple(doc.get("cartan", ())), name)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed presentation document: {exc}") from exc
