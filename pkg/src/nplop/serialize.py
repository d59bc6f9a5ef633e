"""One JSON document grammar for terms and linear combinations.

A document is tagged by the structure that owns its terms::

    {"structure": "arrow-pi", "term": [[3, 4, 2, 1], [7, 9, 8, 6, 5]]}
    {"structure": "exp", "terms": [{"coeff": "3", "term": [2, 3, 4, 5]}]}
    {"structure": "polymap", "map": {"slots": [1], "dim": 1, "components": [...]}}

Term payloads are species specific: sets and linear orders are arrays,
partitions arrays of arrays, cycles min-rotated arrays, monomials arrays
of ``{block, structure}`` records, basis maps ``{slots, out, exponents}``.
Coefficients are ``"p/q"`` strings, or ``"p"`` when ``q = 1``.  Output
is always canonical: terms sorted, each term in normal form.
"""

import json

from .linear import LinComb, format_coeff, parse_coeff
from .polymap import PolynomialMap


def lincomb_to_json(a):
    return [{"coeff": format_coeff(c), "term": t.to_json()} for t, c in a.sorted_items()]


def lincomb_from_json(data, parse_term):
    if not isinstance(data, list):
        raise ValueError("a linear combination is a list of {coeff, term} records")
    items = []
    for entry in data:
        if not isinstance(entry, dict) or set(entry) != {"coeff", "term"}:
            raise ValueError("combination entries need exactly 'coeff' and 'term'")
        items.append((parse_term(entry["term"]), parse_coeff(entry["coeff"])))
    return LinComb(items)


def term_document(structure, term):
    return {"structure": structure.name, "term": term.to_json()}


def lincomb_document(structure, a):
    return {"structure": structure.name, "terms": lincomb_to_json(a)}


def map_document(f, structure="polymap"):
    return {"structure": structure, "map": f.to_json()}


def parse_document(doc, resolve=None):
    """Return ``(structure, value)``; value is a term, LinComb or map.

    ``resolve`` maps a structure name to a structure and defaults to the
    registry.
    """
    if resolve is None:
        from .registry import get_structure as resolve
    if not isinstance(doc, dict) or "structure" not in doc:
        raise ValueError("a document needs a 'structure' tag")
    structure = resolve(doc["structure"])
    keys = set(doc) - {"structure"}
    if keys == {"term"}:
        return structure, structure.parse_term(doc["term"])
    if keys == {"terms"}:
        return structure, lincomb_from_json(doc["terms"], structure.parse_term)
    if keys == {"map"}:
        return structure, PolynomialMap.from_json(doc["map"])
    raise ValueError("a document carries exactly one of 'term', 'terms' or 'map'")


def dumps(doc):
    """Byte-stable rendering: sorted keys, no trailing whitespace."""
    return json.dumps(doc, sort_keys=True, separators=(", ", ": "))
