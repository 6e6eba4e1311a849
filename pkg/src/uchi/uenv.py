"""The reduced enveloping algebra U_chi(g) in its PBW basis.

A basis monomial is an exponent tuple ``a`` with ``0 <= a_i < p``, standing
for x_0^a_0 x_1^a_1 ... x_{n-1}^a_{n-1} in the basis order of the
presentation.  Products are straightened by two independent rewriting
routes, left multiplication by a generator and right multiplication by a
generator, each memoised per (generator, monomial):

* x_i x_j^a = sum_k C(a,k) x_j^(a-k) ((-ad x_j)^k x_i)    (moving x_i right)
* x_j^a x_i = sum_k C(a,k) ((ad x_j)^k x_i) x_j^(a-k)     (moving x_i left)
* x_i^p = x_i^[p] + chi(x_i)^p

Multiplication uses the left route; the right route exists for the adjoint
action and doubles as a cross-check of the left one.
"""

from __future__ import annotations

import json
import sys
from contextlib import contextmanager
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import BudgetExceeded, InputError
from .exactla import SparseMatFp
from .liealg import LiePresentation

DEFAULT_BUDGET = 3 ** 10

Mono = tuple


@contextmanager
def deep_recursion(limit: int = 50000):
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, limit))
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


def _add(acc: dict, terms: Mapping, c: int, p: int) -> None:
    for m, v in terms.items():
        acc[m] = (acc.get(m, 0) + c * v) % p


def _clean(acc: dict) -> dict:
    return {m: v for m, v in acc.items() if v}


class ReducedEnveloping:
    """U_chi(g) for a fixed presentation g and p-character chi."""

    def __init__(self, g: LiePresentation, chi: Sequence[int] | None = None):
        self.g = g
        self.p = p = g.p
        self.n = n = g.n
        chi = np.zeros(n, dtype=np.int64) if chi is None else np.asarray(chi, dtype=np.int64)
        if chi.shape != (n,):
            raise InputError(f"chi must have length {n}")
        self.chi = tuple(int(c) % p for c in chi)
        self._chi_p = tuple(pow(c, p, p) for c in self.chi)
        self._pmap = g.pmap_table
        br = g.bracket_table
        # adpow[j][i][k] = (ad x_j)^k (x_i) as a dict, k = 0..p-1
        self._adpow = []
        for j in range(n):
            row = []
            for i in range(n):
                seq = [{i: 1}]
                for _ in range(p - 1):
                    nxt: dict = {}
                    for l, c in seq[-1].items():
                        for k, d in br[j][l]:
                            nxt[k] = (nxt.get(k, 0) + c * d) % p
                    seq.append(_clean(nxt))
                row.append(seq)
            self._adpow.append(row)
        self._binom = [[comb(a, k) % p for k in range(p)] for a in range(p)]
        self._place = tuple(p ** (n - 1 - k) for k in range(n))
        self._block = tuple(P * p for P in self._place)
        self._left: list = [dict() for _ in range(n)]
        self._right: list = [dict() for _ in range(n)]

    @property
    def dim(self) -> int:
        return self.p ** self.n

    # -- elements --------------------------------------------------------

    def element(self, terms: Mapping[Mono, int] | None = None) -> "UchiElement":
        return UchiElement(self, terms or {})

    def one(self) -> "UchiElement":
        return UchiElement(self, {(0,) * self.n: 1})

    def zero(self) -> "UchiElement":
        return UchiElement(self, {})

    def gen(self, i: int | str) -> "UchiElement":
        if isinstance(i, str):
            i = self.g.index(i)
        a = [0] * self.n
        a[i] = 1
        return UchiElement(self, {tuple(a): 1})

    def monomial(self, a: Sequence[int]) -> "UchiElement":
        a = tuple(int(x) for x in a)
        if len(a) != self.n or any(not 0 <= x < self.p for x in a):
            raise InputError(f"exponents must be {self.n} integers in [0, {self.p})")
        return UchiElement(self, {a: 1})

    def from_lie(self, x: Sequence[int]) -> "UchiElement":
        """Image of a Lie algebra element (coefficient vector) in U_chi(g)."""
        terms = {}
        for i, c in enumerate(x):
            if int(c) % self.p:
                a = [0] * self.n
                a[i] = 1
                terms[tuple(a)] = int(c) % self.p
        return UchiElement(self, terms)

    # -- straightening ---------------------------------------------------
    #
    # Internally a monomial is its lexicographic code sum_k a_k p^(n-1-k);
    # int keys keep the memo tables cheap.

    def encode(self, m: Sequence[int]) -> int:
        return mono_index(m, self.p)

    def decode(self, code: int) -> Mono:
        out = []
        for P in self._place:
            out.append(code // P % self.p)
        return tuple(out)

    def _lead(self, code: int) -> int:
        P = self._place
        j = 0
        n = self.n
        while j < n and code < P[j]:
            j += 1
        return j

    def _last(self, code: int) -> int:
        Q = self._block
        j = self.n - 1
        while j >= 0 and code % Q[j] == 0:
            j -= 1
        return j

    def _lgen(self, i: int, code: int) -> dict:
        """x_i * x^code."""
        memo = self._left[i]
        r = memo.get(code)
        if r is not None:
            return r
        p = self.p
        P = self._place
        j = self._lead(code)
        if i < j:
            r = {code + P[i]: 1}
        elif i == j:
            if code // P[i] + 1 < p:
                r = {code + P[i]: 1}
            else:
                w = code - (p - 1) * P[i]
                r = {w: self._chi_p[i]} if self._chi_p[i] else {}
                for k, c in self._pmap[i]:
                    for mm, x in self._lgen(k, w).items():
                        r[mm] = (r.get(mm, 0) + c * x) % p
                r = _clean(r)
        else:
            a = code // P[j]
            w = code - a * P[j]
            z = self._adpow[j][i]
            binom = self._binom[a]
            r = {}
            for k in range(a + 1):
                zk = z[k]
                if not zk:
                    continue
                v: dict = {}
                for l, c in zk.items():
                    for mm, x in self._lgen(l, w).items():
                        v[mm] = (v.get(mm, 0) + c * x) % p
                for _ in range(a - k):
                    v = self._lvec(j, v)
                coef = binom[k] if k % 2 == 0 else -binom[k]
                for mm, x in v.items():
                    r[mm] = (r.get(mm, 0) + coef * x) % p
            r = _clean(r)
        memo[code] = r
        return r

    def _rgen(self, code: int, i: int) -> dict:
        """x^code * x_i."""
        memo = self._right[i]
        r = memo.get(code)
        if r is not None:
            return r
        p = self.p
        P = self._place
        j = self._last(code)
        if i > j:
            r = {code + P[i]: 1}
        elif i == j:
            if code // P[i] % p + 1 < p:
                r = {code + P[i]: 1}
            else:
                w = code - (p - 1) * P[i]
                r = {w: self._chi_p[i]} if self._chi_p[i] else {}
                for k, c in self._pmap[i]:
                    for mm, x in self._rgen(w, k).items():
                        r[mm] = (r.get(mm, 0) + c * x) % p
                r = _clean(r)
        else:
            a = code // P[j] % p
            w = code - a * P[j]
            z = self._adpow[j][i]
            binom = self._binom[a]
            r = {}
            for k in range(a + 1):
                zk = z[k]
                if not zk:
                    continue
                v: dict = {}
                for l, c in zk.items():
                    for mm, x in self._rgen(w, l).items():
                        v[mm] = (v.get(mm, 0) + c * x) % p
                for _ in range(a - k):
                    v = self._rvec(v, j)
                coef = binom[k]
                for mm, x in v.items():
                    r[mm] = (r.get(mm, 0) + coef * x) % p
            r = _clean(r)
        memo[code] = r
        return r

    def _lvec(self, i: int, v: Mapping) -> dict:
        p = self.p
        acc: dict = {}
        for m, c in v.items():
            for mm, x in self._lgen(i, m).items():
                acc[mm] = (acc.get(mm, 0) + c * x) % p
        return _clean(acc)

    def _rvec(self, v: Mapping, i: int) -> dict:
        p = self.p
        acc: dict = {}
        for m, c in v.items():
            for mm, x in self._rgen(m, i).items():
                acc[mm] = (acc.get(mm, 0) + c * x) % p
        return _clean(acc)

    def _mono_left(self, a: Mono, v: Mapping) -> dict:
        """x^a * v, applying generators right to left."""
        for k in range(self.n - 1, -1, -1):
            for _ in range(a[k]):
                v = self._lvec(k, v)
        return dict(v)

    def _mono_right(self, v: Mapping, a: Mono) -> dict:
        """v * x^a, applying generators left to right."""
        for k in range(self.n):
            for _ in range(a[k]):
                v = self._rvec(v, k)
        return dict(v)

    def _check(self, u: "UchiElement") -> None:
        if u.algebra is not self:
            raise InputError("elements belong to different reduced enveloping algebras")

    def _codes(self, u: "UchiElement") -> dict:
        return {self.encode(m): c for m, c in u.terms.items()}

    def _from_codes(self, acc: Mapping) -> "UchiElement":
        return UchiElement(self, {self.decode(k): c for k, c in acc.items() if c})

    def multiply(self, u: "UchiElement", v: "UchiElement") -> "UchiElement":
        self._check(u)
        self._check(v)
        acc: dict = {}
        vc = self._codes(v)
        with deep_recursion():
            for a, c in u.terms.items():
                _add(acc, self._mono_left(a, vc), c, self.p)
        return self._from_codes(acc)

    def multiply_right_route(self, u: "UchiElement", v: "UchiElement") -> "UchiElement":
        """The same product computed only through right multiplications."""
        self._check(u)
        self._check(v)
        acc: dict = {}
        uc = self._codes(u)
        with deep_recursion():
            for a, c in v.terms.items():
                _add(acc, self._mono_right(uc, a), c, self.p)
        return self._from_codes(acc)

    def power(self, u: "UchiElement", k: int) -> "UchiElement":
        out = self.one()
        for _ in range(k):
            out = self.multiply(out, u)
        return out

    # -- adjoint action --------------------------------------------------

    def ad_code(self, i: int, code: int) -> dict:
        """ad_chi(x_i) on the monomial with the given code, as {code: coef}."""
        p = self.p
        acc = dict(self._lgen(i, code))
        for mm, c in self._rgen(code, i).items():
            acc[mm] = (acc.get(mm, 0) - c) % p
        return _clean(acc)

    def ad_mono(self, i: int, m: Mono) -> dict:
        """ad_chi(x_i) applied to the basis monomial m, as {exponents: coef}."""
        with deep_recursion():
            return {self.decode(k): c for k, c in self.ad_code(i, self.encode(m)).items()}

    def ad_apply(self, i: int, u: "UchiElement") -> "UchiElement":
        self._check(u)
        acc: dict = {}
        with deep_recursion():
            for m, c in u.terms.items():
                _add(acc, self.ad_code(i, self.encode(m)), c, self.p)
        return self._from_codes(acc)

    def ad_columns(self, i: int, codes: Iterable[int]) -> list[dict]:
        """Columns {row code: coef} of ad_chi(x_i) at the given monomial codes."""
        with deep_recursion():
            return [self.ad_code(i, int(c)) for c in codes]

    def ad_matrix(self, i: int, budget: int = DEFAULT_BUDGET) -> SparseMatFp:
        """Matrix of ad_chi(x_i) on all p^n monomials, indexed lexicographically."""
        N = self.dim
        if N > budget:
            raise BudgetExceeded(N, budget)
        return SparseMatFp.from_columns(N, self.p, self.ad_columns(i, range(N)))

    # -- structure -------------------------------------------------------

    def weight(self, m: Mono) -> tuple:
        w = self.g.weights
        return tuple(sum(m[k] * w[k][j] for k in range(self.n)) % self.p
                     for j in range(len(self.g.cartan)))

    def weight_zero_subspace(self) -> tuple[list, int]:
        """Monomials of weight 0 mod p for every toral generator, lexicographic."""
        if not self.g.cartan:
            raise InputError("presentation has no designated Cartan indices")
        monos = weight_space(self.g, (0,) * len(self.g.cartan))
        return monos, len(monos)

    def p_center_relation_check(self) -> list:
        """Check x_i^p = x_i^[p] + chi(x_i)^p for every generator; one row per index."""
        rows = []
        for i in range(self.n):
            lhs = self.power(self.gen(i), self.p)
            rhs = self.from_lie(self.g.pmap[i]) + self.one() * self._chi_p[i]
            rows.append((i, self.g.labels[i], lhs == rhs))
        return rows


def all_monomials(n: int, p: int) -> list:
    return [tuple(int(x) for x in row) for row in exponent_digits(np.arange(p ** n, dtype=np.int64), n, p).T]


def mono_index(m: Mono, p: int) -> int:
    idx = 0
    for a in m:
        idx = idx * p + a
    return idx


def exponent_digits(codes: np.ndarray, n: int, p: int) -> np.ndarray:
    dt = np.int16
    out = np.empty((n, codes.size), dtype=dt)
    c = codes.copy()
    for k in range(n - 1, -1, -1):
        out[k] = c % p
        c //= p
    return out


def weight_space_codes(g: LiePresentation, target: Sequence[int],
                       chunk: int = 1 << 20) -> tuple[np.ndarray, np.ndarray]:
    """Codes (ascending) and total degrees of monomials of toral weight ``target``."""
    p, n = g.p, g.n
    W = np.array(g.weights, dtype=np.int64).reshape(n, len(g.cartan))
    target = np.asarray(target, dtype=np.int64) % p
    codes_out, deg_out = [], []
    N = p ** n
    for start in range(0, N, chunk):
        codes = np.arange(start, min(N, start + chunk), dtype=np.int64)
        D = exponent_digits(codes, n, p).astype(np.int64)
        mask = np.all((W.T @ D) % p == target[:, None], axis=0)
        codes_out.append(codes[mask])
        deg_out.append(D[:, mask].sum(axis=0))
    return np.concatenate(codes_out), np.concatenate(deg_out)


def weight_space(g: LiePresentation, target: Sequence[int]) -> list:
    """All PBW monomials whose toral weight is ``target`` (mod p), lexicographic."""
    codes, _ = weight_space_codes(g, target)
    return [tuple(int(x) for x in col) for col in exponent_digits(codes, g.n, g.p).T]


class UchiElement:
    """An element of U_chi(g): sparse map from exponent tuples to residues."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: ReducedEnveloping, terms: Mapping[Mono, int]):
        p = algebra.p
        clean = {}
        for m, c in terms.items():
            m = tuple(m)
            if len(m) != algebra.n or any(not 0 <= x < p for x in m):
                raise InputError(f"exponent vector {m} out of range")
            c = int(c) % p
            if c:
                clean[m] = c
        self.algebra = algebra
        self.terms = clean

    def _lift(self, other) -> "UchiElement":
        if isinstance(other, UchiElement):
            self.algebra._check(other)
            return other
        return self.algebra.one() * int(other)

    def __add__(self, other):
        other = self._lift(other)
        acc = dict(self.terms)
        _add(acc, other.terms, 1, self.algebra.p)
        return UchiElement(self.algebra, acc)

    __radd__ = __add__

    def __neg__(self):
        return UchiElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, UchiElement):
            return self.algebra.multiply(self, other)
        return UchiElement(self.algebra, {m: c * int(other) for m, c in self.terms.items()})

    def __rmul__(self, other):
        return UchiElement(self.algebra, {m: c * int(other) for m, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, UchiElement):
            return self.algebra is other.algebra and self.terms == other.terms
        if isinstance(other, int):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def to_json(self) -> str:
        return json.dumps([[list(m), c] for m, c in sorted(self.terms.items())], separators=(",", ":"))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        labels = self.algebra.g.labels
        parts = []
        for m, c in sorted(self.terms.items()):
            word = "*".join(f"{labels[k]}^{a}" if a > 1 else labels[k] for k, a in enumerate(m) if a)
            parts.append(f"{c}*{word}" if word else str(c))
        return " + ".join(parts)


def element_from_json(U: ReducedEnveloping, text: str) -> UchiElement:
    return UchiElement(U, {tuple(m): c for m, c in json.loads(text)})


# functional forms

def multiply(u: UchiElement, v: UchiElement) -> UchiElement:
    return u.algebra.multiply(u, v)


def ad_chi_apply(U: ReducedEnveloping, i: int, u: UchiElement) -> UchiElement:
    return U.ad_apply(i, u)


def ad_chi_matrix(U: ReducedEnveloping, i: int, budget: int = DEFAULT_BUDGET) -> SparseMatFp:
    return U.ad_matrix(i, budget)


def random_element(U: ReducedEnveloping, rng: np.random.Generator, terms: int = 3) -> UchiElement:
    """A sum of ``terms`` random monomials with nonzero coefficients."""
    mons = rng.integers(0, U.p, size=(terms, U.n))
    coeffs = rng.integers(1, U.p, size=terms)
    return U.element({tuple(int(a) for a in m): int(c) for m, c in zip(mons, coeffs)})


def associativity_check(U: ReducedEnveloping, triples: int = 50, seed: int = 0,
                        terms: int = 3) -> tuple[int, tuple | None]:
    """(a*b)*c == a*(b*c) on seeded random triples; returns (count, first failure)."""
    rng = np.random.default_rng(seed)
    for _ in range(triples):
        a, b, c = (random_element(U, rng, terms) for _ in range(3))
        if (a * b) * c != a * (b * c):
            return triples, (a.to_json(), b.to_json(), c.to_json())
    return triples, None
