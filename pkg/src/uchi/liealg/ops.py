"""Operations on presentations: brackets, p-th powers, the trace-form
identification g = g*, stabilisers, Jordan certificates and Levi subalgebras."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import exactla
from ..errors import CertificationError, ExtensionFieldRequired, InputError
from .presentation import LiePresentation, ad_basis_matrices, validate_presentation


def _vec(g: LiePresentation, x) -> np.ndarray:
    v = np.asarray(x, dtype=np.int64) % g.p
    if v.shape != (g.n,):
        raise InputError(f"expected a vector of length {g.n}, got shape {v.shape}")
    return v


def bracket(g: LiePresentation, x, y) -> np.ndarray:
    return np.einsum("i,j,ijk->k", _vec(g, x), _vec(g, y), g.structure) % g.p


def ad(g: LiePresentation, x) -> np.ndarray:
    """Matrix of ad(x) on the basis (column j is [x, x_j])."""
    return np.einsum("i,iab->ab", _vec(g, x), ad_basis_matrices(g)) % g.p


def _jacobson_s(g: LiePresentation, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Sum over i of s_i(a, b), where i*s_i is the t^(i-1) coefficient of ad(ta+b)^(p-1)(a)."""
    p = g.p
    coeffs = [a]
    for _ in range(p - 1):
        nxt = [np.zeros(g.n, dtype=np.int64) for _ in range(len(coeffs) + 1)]
        for d, v in enumerate(coeffs):
            nxt[d + 1] = (nxt[d + 1] + bracket(g, a, v)) % p
            nxt[d] = (nxt[d] + bracket(g, b, v)) % p
        coeffs = nxt
    total = np.zeros(g.n, dtype=np.int64)
    for i in range(1, p):
        total = (total + coeffs[i - 1] * exactla.field_inverse(i, p)) % p
    return total


def p_power(g: LiePresentation, x) -> np.ndarray:
    """x^[p] from the basis values of the p-mapping and Jacobson's formula.

    Uses (a x_i)^[p] = a^p x_i^[p] and
    (u + v)^[p] = u^[p] + v^[p] + sum_i s_i(u, v), adding one basis term at a time.
    """
    p = g.p
    x = _vec(g, x)
    acc = np.zeros(g.n, dtype=np.int64)
    acc_pp = np.zeros(g.n, dtype=np.int64)
    for i in np.flatnonzero(x):
        y = np.zeros(g.n, dtype=np.int64)
        y[i] = x[i]
        y_pp = pow(int(x[i]), p, p) * g.pmap[i] % p
        if acc.any():
            acc_pp = (acc_pp + y_pp + _jacobson_s(g, acc, y)) % p
        else:
            acc_pp = y_pp
        acc = (acc + y) % p
    return acc_pp



def jacobson_check(g: LiePresentation, pairs: int = 200, seed: int = 0) -> tuple[int, tuple | None]:
    """Compare p_power(x + y) with the p-th matrix power in the realization.

    Runs on ``pairs`` seeded random pairs; returns (pairs checked, first
    failing pair or None).
    """
    if g.realization is None:
        raise InputError(f"{g.name or 'presentation'} has no matrix realization")
    p = g.p
    mats = np.stack([np.asarray(m, dtype=np.int64) for m in g.realization])
    rng = np.random.default_rng(seed)
    for _ in range(pairs):
        x, y = rng.integers(0, p, size=(2, g.n))
        s = (x + y) % p
        M = exactla.matrix_power_mod(np.einsum("i,iab->ab", s, mats) % p, p, p)
        lhs = np.einsum("i,iab->ab", p_power(g, s), mats) % p
        if not np.array_equal(lhs, M):
            return pairs, (tuple(int(c) for c in x), tuple(int(c) for c in y))
    return pairs, None


def kappa(g: LiePresentation, x) -> np.ndarray:
    """The linear form y -> K(x, y), as coefficients chi(x_j)."""
    return g.gram @ _vec(g, x) % g.p


def kappa_inv(g: LiePresentation, chi) -> np.ndarray:
    return g.gram_inverse @ _vec(g, chi) % g.p


def form_matrix(g: LiePresentation, chi) -> np.ndarray:
    """B[j, i] = chi([x_i, x_j]); its kernel is the stabiliser g_chi."""
    return np.einsum("ijk,k->ji", g.structure, _vec(g, chi)) % g.p


def centralizer_of_form(g: LiePresentation, chi) -> tuple[int, np.ndarray]:
    K = exactla.dense_kernel(form_matrix(g, chi), g.p)
    return len(K), K


def centralizer_of_element(g: LiePresentation, x) -> tuple[int, np.ndarray]:
    K = exactla.dense_kernel(ad(g, x), g.p)
    return len(K), K


def stabilizer_dim(g: LiePresentation, chi) -> int:
    return g.n - exactla.dense_rank(form_matrix(g, chi), g.p)


def is_regular_form(g: LiePresentation, chi) -> bool:
    return stabilizer_dim(g, chi) == g.rank


def is_nilpotent_element(g: LiePresentation, x) -> bool:
    """ad(x) nilpotent and iterated p-th powers of x reach zero."""
    x = _vec(g, x)
    if exactla.matrix_power_mod(ad(g, x), g.n, g.p).any():
        return False
    for _ in range(g.n + 1):
        if not x.any():
            return True
        x = p_power(g, x)
    return not x.any()


def semisimple_certificate(g: LiePresentation, x) -> exactla.FpPoly:
    """Minimal polynomial of ad(x), checked squarefree and split over F_p."""
    m = exactla.minimal_polynomial(ad(g, x), g.p)
    if not exactla.is_squarefree(m):
        raise CertificationError("semisimple part", f"ad(x_s) is not semisimple (minimal polynomial {m})")
    if len(exactla.poly_roots(m)) != m.degree:
        raise ExtensionFieldRequired(
            f"ad(x_s) has minimal polynomial {m} with eigenvalues outside F_{g.p}: "
            "extension field required")
    return m


@dataclass(frozen=True)
class JordanPair:
    chi_s: tuple
    chi_n: tuple
    certified: bool = False

    @classmethod
    def of(cls, chi_s, chi_n) -> "JordanPair":
        return cls(tuple(int(c) for c in chi_s), tuple(int(c) for c in chi_n))

    def chi(self, p: int) -> np.ndarray:
        return (np.array(self.chi_s) + np.array(self.chi_n)) % p


def verify_jordan(g: LiePresentation, jp: JordanPair) -> JordanPair:
    """Certify chi = chi_s + chi_n; raises naming the failed clause."""
    xs = kappa_inv(g, jp.chi_s)
    xn = kappa_inv(g, jp.chi_n)
    semisimple_certificate(g, xs)
    if not is_nilpotent_element(g, xn):
        raise CertificationError("nilpotent part", "kappa^-1(chi_n) is not nilpotent")
    if bracket(g, xs, xn).any():
        raise CertificationError("commutation", "[x_s, x_n] != 0")
    return JordanPair(jp.chi_s, jp.chi_n, True)


# ---------------------------------------------------------------------------
# subalgebras
# ---------------------------------------------------------------------------

def _span_closure(g: LiePresentation, vectors) -> np.ndarray:
    """Echelon basis of the Lie subalgebra generated by ``vectors``."""
    p = g.p
    B = exactla.dense_rref(np.array(vectors, dtype=np.int64).reshape(-1, g.n), p)[0] \
        if len(vectors) else np.zeros((0, g.n), dtype=np.int64)
    while True:
        new = [bracket(g, a, b) for a in B for b in B]
        grown = exactla.dense_rref(np.vstack([B] + [np.array(new).reshape(-1, g.n)]), p)[0] \
            if len(new) else B
        if len(grown) == len(B):
            return B
        B = grown


def lie_generators(g: LiePresentation, toral=None) -> list[int]:
    """Greedy minimal set of non-toral basis indices that, with the toral
    ones, generate g as a Lie algebra (in basis order)."""
    toral = list(g.cartan if toral is None else toral)
    gens: list[int] = []
    span = _span_closure(g, [g.basis_vector(i) for i in toral])
    for i in range(g.n):
        if i in toral:
            continue
        if len(span) == g.n:
            break
        test = exactla.dense_rank(np.vstack([span, g.basis_vector(i)]) if len(span)
                                  else g.basis_vector(i)[None, :], g.p)
        if test > len(span):
            gens.append(i)
            span = _span_closure(g, [g.basis_vector(j) for j in toral + gens])
    return gens


def _coords_in(B: np.ndarray, v, p: int) -> np.ndarray | None:
    return exactla.dense_solve(B, v, p)


def subalgebra_presentation(g: LiePresentation, B: np.ndarray, labels, cartan=(),
                            rank: int | None = None, name: str = "") -> LiePresentation:
    """Presentation of the restricted subalgebra spanned by the columns of ``B``."""
    p = g.p
    m = B.shape[1]
    cols = [B[:, a] for a in range(m)]
    S = np.zeros((m, m, m), dtype=np.int64)
    for a in range(m):
        for b in range(m):
            c = _coords_in(B, bracket(g, cols[a], cols[b]), p)
            if c is None:
                raise InputError("span is not closed under the bracket")
            S[a, b] = c
    P = np.zeros((m, m), dtype=np.int64)
    for a in range(m):
        c = _coords_in(B, p_power(g, cols[a]), p)
        if c is None:
            raise InputError("span is not closed under the p-mapping")
        P[a] = c
    K = B.T @ g.gram @ B % p
    real = None
    if g.realization is not None:
        real = tuple(sum(int(B[k, a]) * g.realization[k] for k in range(g.n)) for a in range(m))
    return LiePresentation(p, tuple(labels), S, P, K, g.rank if rank is None else rank,
                           tuple(cartan), name, real)


def levi_subalgebra(g: LiePresentation, x_s) -> tuple[LiePresentation, np.ndarray]:
    """The centraliser of a split semisimple element, with its inclusion matrix.

    Basis vectors of g lying in the centraliser are reused (in order); any
    remainder is completed from an echelon kernel basis.  Returns the
    presentation and the n x m matrix whose columns are the Levi basis in g.
    """
    p = g.p
    x_s = _vec(g, x_s)
    semisimple_certificate(g, x_s)
    A = ad(g, x_s)
    reused = [j for j in range(g.n) if not A[:, j].any()]
    cols = [g.basis_vector(j) for j in reused]
    labels = [g.labels[j] for j in reused]
    K = exactla.dense_kernel(A, p)
    extra = 0
    for v in K:
        cur = np.array(cols).reshape(-1, g.n)
        if exactla.dense_rank(np.vstack([cur, v]), p) > len(cols):
            cols.append(v)
            extra += 1
            labels.append(f"y{extra}")
    B = np.array(cols, dtype=np.int64).T.reshape(g.n, len(cols))
    cartan = [a for a, j in enumerate(reused) if j in g.cartan] if extra == 0 else []
    levi = subalgebra_presentation(g, B, labels, cartan, g.rank, f"levi({g.name})")
    if exactla.dense_rank(levi.gram, p) < levi.n:
        raise InputError("trace form degenerates on the Levi subalgebra: p is not very good for it")
    return levi, B


def restrict_form(chi, inclusion: np.ndarray, p: int) -> np.ndarray:
    return inclusion.T @ np.asarray(chi, dtype=np.int64) % p


def zero_central_part(g: LiePresentation, chi) -> np.ndarray:
    """chi' agreeing with chi on [g, g] and vanishing on the centre."""
    chi = _vec(g, chi)
    central = list(g.central)
    rest = [i for i in range(g.n) if i not in central]
    derived = g.structure.reshape(-1, g.n)
    adapted = not derived[:, central].any() and exactla.dense_rank(derived, g.p) == len(rest)
    if not adapted:
        raise InputError("basis is not adapted to g = z(g) + [g, g]")
    out = chi.copy()
    out[central] = 0
    return out


def permute_basis(g: LiePresentation, perm) -> LiePresentation:
    """Presentation in the reordered basis y_a = x_perm[a]."""
    perm = list(perm)
    if sorted(perm) != list(range(g.n)):
        raise InputError("not a permutation")
    ix = np.array(perm)
    S = g.structure[np.ix_(ix, ix, ix)]
    P = g.pmap[np.ix_(ix, ix)]
    K = g.gram[np.ix_(ix, ix)]
    pos = {old: new for new, old in enumerate(perm)}
    real = tuple(g.realization[i] for i in perm) if g.realization is not None else None
    return LiePresentation(g.p, tuple(g.labels[i] for i in perm), S, P, K, g.rank,
                           tuple(sorted(pos[c] for c in g.cartan)), g.name, real)


@dataclass(frozen=True)
class InducedOrbit:
    orbit_dim: int
    codim_in_nilcone: int
    codim_in_levi_nilcone: int

    @property
    def codim_check(self) -> bool:
        return self.codim_in_nilcone == self.codim_in_levi_nilcone


def induced_orbit_dim(g: LiePresentation, levi: LiePresentation, e0) -> InducedOrbit:
    """Dimension of the orbit induced from the nilpotent e0 of a Levi.

    orbit_dim = dim g - dim (g_0)_{e0}; the codimensions use
    dim N(g) = dim g - rank g on both sides.
    """
    if not is_nilpotent_element(levi, e0):
        raise InputError("e0 is not nilpotent in the Levi subalgebra")
    c, _ = centralizer_of_element(levi, e0)
    orbit = g.n - c
    return InducedOrbit(orbit, (g.n - g.rank) - orbit, c - levi.rank)


def check_levi(levi: LiePresentation) -> bool:
    return validate_presentation(levi).passed
