"""Named representative characters shipped with the package.

Names: any entry of an algebra's ``forms`` table (``zero`` is always
available), or ``mixed:<levi>:<nilp>`` which yields a certified Jordan pair
(kappa(x_s), kappa(nilpotent)).
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import numpy as np

from .errors import InputError
from .liealg import JordanPair, LiePresentation, kappa, verify_jordan


@lru_cache(maxsize=None)
def load_catalog() -> dict:
    text = resources.files("uchi").joinpath("data/representatives.json").read_text()
    return json.loads(text)


def _entry(g: LiePresentation) -> dict:
    return load_catalog()["algebras"].get(g.name, {})


def _element(g: LiePresentation, coeffs: dict) -> np.ndarray:
    return g.element(**coeffs)


def _override(g: LiePresentation, name: str) -> dict | None:
    for o in load_catalog()["overrides"]:
        if o["algebra"] == g.name and o["p"] == g.p and o["name"] == name:
            return o
    return None


def names(g: LiePresentation) -> list[str]:
    entry = _entry(g)
    out = set(entry.get("forms", {})) | {"zero"}
    for levi, spec in entry.get("levis", {}).items():
        out |= {f"mixed:{levi}:{nil}" for nil in spec["nilpotents"]}
    return sorted(out)


def is_split(g: LiePresentation, name: str) -> bool:
    o = _override(g, name)
    return True if o is None else bool(o.get("split", True))


def representative(g: LiePresentation, name: str):
    """Form (coefficient vector) or certified JordanPair for a named representative."""
    if name.startswith("mixed:"):
        parts = name.split(":")
        if len(parts) != 3:
            raise InputError(f"mixed representatives are named mixed:<levi>:<nilp>, got {name!r}")
        _, levi, nil = parts
        spec = _entry(g).get("levis", {}).get(levi)
        if spec is None or nil not in spec["nilpotents"]:
            raise InputError(f"unknown representative {name!r} for {g.name}")
        jp = JordanPair.of(kappa(g, _element(g, spec["x_s"])),
                           kappa(g, _element(g, spec["nilpotents"][nil])))
        return verify_jordan(g, jp)
    o = _override(g, name)
    if o is not None:
        return kappa(g, _element(g, o["element"]))
    forms = _entry(g).get("forms", {})
    if name in forms:
        return kappa(g, _element(g, forms[name]))
    if name == "zero":
        return np.zeros(g.n, dtype=np.int64)
    raise InputError(f"unknown representative {name!r} for {g.name}; known: {', '.join(names(g))}")


SWEEP_NAMES = ("regnilp", "subregnilp", "zero", "regss", "mixed")


def standard_sweep(g: LiePresentation) -> list[tuple[str, object]]:
    """The regular/subregular/zero/regular-semisimple/mixed sweep for an algebra."""
    forms = _entry(g).get("forms", {})
    return [(n, representative(g, n)) for n in SWEEP_NAMES if n in forms or n == "zero"]
