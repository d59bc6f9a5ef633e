"""Lookup of structures, twisted products and morphisms by name.

Names are what the CLI and manifests use.  ``E(q)`` is the free
commutative construction over ``q`` with the blockwise-sum composition and
``E(q)/mu`` the one that folds with the product ``mu``; both nest, so
``E(com+)`` and ``E(as+)/shuffle-L`` resolve.
"""

import re

from .instances import ArrowPiNpl, ArrowPiSquare, ExpNpl, PermutationNpl, PiNpl, PiSquare
from .freecomm import FreeCommNpl, FreeCommSquare
from .operads import AsPlus, ComPlus, ConcatE, ConcatL, CycleNpl, IdentityOperad, ShuffleL
from .polymap import EndOperad, PolymapNpl, PolynomialMap, coordinatewise_product, inclusion

STRUCTURES = {
    "identity": IdentityOperad,
    "com+": ComPlus,
    "as+": AsPlus,
    "cycles": CycleNpl,
    "exp": ExpNpl,
    "pi": PiSquare,
    "pi-npl": PiNpl,
    "arrow-pi": ArrowPiSquare,
    "arrow-pi-npl": ArrowPiNpl,
    "permutations": PermutationNpl,
    "polymap": PolymapNpl,
    "end": EndOperad,
}

# Only these accept keyword parameters (dim, degree, average).
PARAMETRISED = ("polymap", "end")

PRODUCTS = {
    "concat-E": ConcatE,
    "shuffle-L": ShuffleL,
    "concat-L": ConcatL,
}

MORPHISMS = {
    "inclusion": lambda dim: (lambda t: inclusion(t, dim)),
    "zero": lambda dim: (lambda t: PolynomialMap.zero(t.ground, dim)),
    "coordinatewise-product": lambda dim: (lambda t: coordinatewise_product(t, dim)),
}


class UnknownName(ValueError):
    pass


def _split_free(name):
    """``"E(q)/mu"`` -> ``("q", "mu")``; ``"E(q)"`` -> ``("q", None)``."""
    if not name.startswith("E("):
        return None
    depth = 0
    for i, ch in enumerate(name):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                rest = name[i + 1:]
                if rest == "":
                    return name[2:i], None
                if rest.startswith("/"):
                    return name[2:i], rest[1:]
                raise UnknownName(f"unknown structure {name!r}")
    raise UnknownName(f"unbalanced parentheses in {name!r}")


_POLYMAP_NAME = re.compile(r"polymap\[d=(\d+),deg<=(\d+)\](\[sum\])?")
_END_NAME = re.compile(r"end\[d=(\d+)\]")


def get_structure(name, **params):
    """Instantiate the structure called ``name``.

    Parametrised structures also resolve from their full display names,
    e.g. ``polymap[d=1,deg<=2]``, so every document tag round-trips.
    """
    if not isinstance(name, str):
        raise UnknownName(f"structure name must be a string, got {name!r}")
    m = _POLYMAP_NAME.fullmatch(name)
    if m:
        return PolymapNpl(dim=int(m[1]), degree=int(m[2]), average=m[3] is None)
    m = _END_NAME.fullmatch(name)
    if m:
        return EndOperad(dim=int(m[1]))
    free = _split_free(name)
    if free is not None:
        inner, mu = free
        q = get_structure(inner, **params)
        return FreeCommNpl(q) if mu is None else FreeCommSquare(q, get_product(mu))
    if name not in STRUCTURES:
        raise UnknownName(f"unknown structure {name!r}; known: {', '.join(STRUCTURES)}, E(q), E(q)/mu")
    if params and name not in PARAMETRISED:
        raise ValueError(f"structure {name!r} takes no parameters")
    return STRUCTURES[name](**params)


def get_product(name):
    if name not in PRODUCTS:
        raise UnknownName(f"unknown product {name!r}; known: {', '.join(PRODUCTS)}")
    return PRODUCTS[name]()


def get_morphism(name, dim):
    if name not in MORPHISMS:
        raise UnknownName(f"unknown morphism {name!r}; known: {', '.join(MORPHISMS)}")
    return MORPHISMS[name](dim)
