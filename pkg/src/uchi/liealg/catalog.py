"""Catalog of standard restricted Lie algebras in Chevalley bases.

Every catalog algebra is built from an explicit integer matrix realization:
structure constants, the p-mapping on basis vectors (the matrix p-th power)
and the trace form of the defining representation are all read off from the
matrices.  Basis order is negative root vectors, then the Cartan block, then
positive root vectors, with roots listed by height.
"""

from __future__ import annotations

import re

import numpy as np

from .. import exactla
from ..errors import InputError, NotVeryGoodPrime
from .presentation import LiePresentation, validate_presentation


def _unit(d: int, i: int, j: int) -> np.ndarray:
    M = np.zeros((d, d), dtype=np.int64)
    M[i, j] = 1
    return M


class _Coordinates:
    """Exact coordinates of matrices in the span of a basis, over F_p."""

    def __init__(self, mats, p: int):
        self.p = p
        self.B = np.stack([m.ravel() for m in mats], axis=1) % p

    def __call__(self, M) -> np.ndarray:
        x = exactla.dense_solve(self.B, np.asarray(M).ravel() % self.p, self.p)
        if x is None:
            raise InputError("matrix is not in the span of the basis")
        return x


def from_matrices(mats, labels, cartan, rank: int, p: int, name: str) -> LiePresentation:
    mats = [np.asarray(m, dtype=np.int64) for m in mats]
    n = len(mats)
    coords = _Coordinates(mats, p)
    S = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            c = coords(mats[i] @ mats[j] - mats[j] @ mats[i])
            S[i, j] = c
            S[j, i] = -c
    P = np.stack([coords(exactla.matrix_power_mod(m, p, p)) for m in mats])
    K = np.array([[np.trace(a @ b) for b in mats] for a in mats])
    return LiePresentation(p, tuple(labels), S, P, K, rank, tuple(cartan), name, tuple(mats))


def _positive_roots_sl(d: int) -> list[tuple[int, int]]:
    return sorted(((i, j) for i in range(d) for j in range(i + 1, d)), key=lambda t: (t[1] - t[0], t[0]))


def _root_label(i: int, j: int, d: int) -> str:
    return "" if d == 2 else f"{i + 1}{j + 1}"


def sl(d: int, p: int) -> LiePresentation:
    return _sl_gl(d, p, central=False)


def gl(d: int, p: int) -> LiePresentation:
    return _sl_gl(d, p, central=True)


def _sl_gl(d: int, p: int, central: bool) -> LiePresentation:
    exactla.check_prime(p)
    kind = "gl" if central else "sl"
    if d < 1 or (not central and d < 2):
        raise InputError(f"{kind}_{d} is not a catalog algebra")
    if d % p == 0:
        raise NotVeryGoodPrime(f"p={p} is not very good for {kind}_{d}: {p} divides {d}")
    roots = _positive_roots_sl(d)
    mats, labels = [], []
    for i, j in roots:
        mats.append(_unit(d, j, i))
        labels.append("f" + _root_label(i, j, d))
    cartan = []
    for i in range(d - 1):
        cartan.append(len(mats))
        mats.append(_unit(d, i, i) - _unit(d, i + 1, i + 1))
        labels.append("h" if d == 2 else f"h{i + 1}")
    if central:
        cartan.append(len(mats))
        mats.append(np.eye(d, dtype=np.int64))
        labels.append("I")
    for i, j in roots:
        mats.append(_unit(d, i, j))
        labels.append("e" + _root_label(i, j, d))
    rank = d if central else d - 1
    return from_matrices(mats, labels, cartan, rank, p, f"{kind}{d}")


def sp4(p: int) -> LiePresentation:
    """sp_4 for the form J = [[0, I], [-I, 0]]; simple roots a = e1-e2 (short), b = 2e2 (long)."""
    exactla.check_prime(p)
    E = lambda i, j: _unit(4, i - 1, j - 1)
    pos = [
        ("a", E(1, 2) - E(4, 3), E(2, 1) - E(3, 4)),
        ("b", E(2, 4), E(4, 2)),
        ("ab", E(1, 4) + E(2, 3), E(4, 1) + E(3, 2)),
        ("aab", E(1, 3), E(3, 1)),
    ]
    mats = [f for _, _, f in pos]
    labels = ["f" + r for r, _, _ in pos]
    mats += [E(1, 1) - E(2, 2) - E(3, 3) + E(4, 4), E(2, 2) - E(4, 4)]
    labels += ["ha", "hb"]
    mats += [e for _, e, _ in pos]
    labels += ["e" + r for r, _, _ in pos]
    return from_matrices(mats, labels, (4, 5), 2, p, "sp4")


def torus(d: int, p: int) -> LiePresentation:
    exactla.check_prime(p)
    if d < 1:
        raise InputError("torus dimension must be positive")
    mats = [_unit(d, i, i) for i in range(d)]
    return from_matrices(mats, [f"t{i + 1}" for i in range(d)], range(d), d, p, f"torus{d}")


def direct_sum(*parts: LiePresentation) -> LiePresentation:
    """Block direct sum; basis is the concatenation of the summands' bases."""
    if not parts:
        raise InputError("direct_sum needs at least one summand")
    p = parts[0].p
    if any(g.p != p for g in parts):
        raise InputError("summands must share the prime")
    n = sum(g.n for g in parts)
    S = np.zeros((n, n, n), dtype=np.int64)
    P = np.zeros((n, n), dtype=np.int64)
    K = np.zeros((n, n), dtype=np.int64)
    labels, cartan, off = [], [], 0
    for k, g in enumerate(parts):
        sl_ = slice(off, off + g.n)
        S[sl_, sl_, sl_] = g.structure
        P[sl_, sl_] = g.pmap
        K[sl_, sl_] = g.gram
        labels += [f"{lab}_{k + 1}" for lab in g.labels]
        cartan += [off + c for c in g.cartan]
        off += g.n
    real = None
    if all(g.realization is not None for g in parts):
        dims = [g.realization[0].shape[0] for g in parts]
        D = sum(dims)
        real, doff = [], 0
        for g, d in zip(parts, dims):
            for m in g.realization:
                M = np.zeros((D, D), dtype=np.int64)
                M[doff:doff + d, doff:doff + d] = m
                real.append(M)
            doff += d
        real = tuple(real)
    name = "+".join(g.name for g in parts)
    return LiePresentation(p, tuple(labels), S, P, K, sum(g.rank for g in parts),
                           tuple(cartan), name, real)


_NAME = re.compile(r"^(sl|gl|torus|t)(\d+)$|^sp4$")


def make_catalog_algebra(name: str, params=None, p: int | None = None) -> LiePresentation:
    """Build and validate a catalog algebra.

    ``name`` is one of ``sl``, ``gl``, ``sp4``, ``torus``, ``direct_sum`` with
    ``params`` the size (or the list of summand specs for ``direct_sum``), or
    a compact string such as ``"sl3"``, ``"torus2"`` or ``"sl2+torus1"``.
    """
    if p is None:
        raise InputError("a prime p is required")
    exactla.check_prime(p)
    if name == "direct_sum":
        parts = [make_catalog_algebra(*_split(s), p=p) if isinstance(s, str)
                 else make_catalog_algebra(*s, p=p) for s in params]
        g = direct_sum(*parts)
    elif name == "sp4":
        g = sp4(p)
    elif name in ("sl", "gl", "torus"):
        if params is None:
            raise InputError(f"{name} needs a size parameter")
        g = {"sl": sl, "gl": gl, "torus": torus}[name](int(params), p)
    elif "+" in name:
        return make_catalog_algebra("direct_sum", name.split("+"), p)
    else:
        return make_catalog_algebra(*_split(name), p=p)
    report = validate_presentation(g)
    if not report.passed:  # pragma: no cover
        raise AssertionError(f"catalog algebra {g.name} failed validation:\n{report.summary()}")
    return g


def _split(name: str) -> tuple:
    m = _NAME.match(name.strip())
    if not m:
        raise InputError(f"unknown catalog algebra {name!r}")
    if name.strip() == "sp4":
        return ("sp4", None)
    kind = "torus" if m.group(1) in ("torus", "t") else m.group(1)
    return (kind, int(m.group(2)))


def algebra_from_name(name: str, p: int) -> LiePresentation:
    return make_catalog_algebra(name, None, p)
