"""Exact rational linear combinations of hashable basis terms."""

from fractions import Fraction


def _sort_key(term):
    key = getattr(term, "sort_key", None)
    return key() if key is not None else term


class LinComb:
    """A finite formal sum ``sum c_t * t`` with ``Fraction`` coefficients.

    Zero coefficients are never stored.  Instances are treated as immutable
    once built; arithmetic returns new objects.
    """

    __slots__ = ("_terms",)

    def __init__(self, items=()):
        terms = {}
        if isinstance(items, LinComb):
            items = items._terms.items()
        elif isinstance(items, dict):
            items = items.items()
        for term, coeff in items:
            c = terms.get(term, 0) + Fraction(coeff)
            if c:
                terms[term] = c
            else:
                terms.pop(term, None)
        self._terms = terms

    @classmethod
    def single(cls, term, coeff=1):
        return cls([(term, coeff)])

    @classmethod
    def zero(cls):
        return cls()

    def coeff(self, term):
        return self._terms.get(term, Fraction(0))

    def terms(self):
        return list(self._terms)

    def items(self):
        return self._terms.items()

    def sorted_items(self):
        """Items in canonical term order."""
        return sorted(self._terms.items(), key=lambda kv: _sort_key(kv[0]))

    def only_term(self):
        """The sole term of a one-term combination with coefficient 1."""
        if len(self._terms) != 1:
            raise ValueError(f"expected a single term, got {len(self._terms)}")
        (term, c), = self._terms.items()
        if c != 1:
            raise ValueError(f"expected coefficient 1, got {c}")
        return term

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __contains__(self, term):
        return term in self._terms

    def __add__(self, other):
        if not isinstance(other, LinComb):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, LinComb):
            return NotImplemented
        return add(self, scale(-1, other))

    def __neg__(self):
        return scale(-1, self)

    def __mul__(self, c):
        if isinstance(c, LinComb):
            return NotImplemented
        return scale(c, self)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, LinComb):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        inner = ", ".join(f"{t!r}: {c}" for t, c in self.sorted_items())
        return f"LinComb({{{inner}}})"

    def __str__(self):
        return format_lincomb(self)


def add(a, b):
    out = dict(a._terms)
    for term, c in b._terms.items():
        v = out.get(term, 0) + c
        if v:
            out[term] = v
        else:
            out.pop(term, None)
    result = LinComb()
    result._terms = out
    return result


def scale(c, a):
    c = Fraction(c)
    result = LinComb()
    if c:
        result._terms = {t: c * v for t, v in a._terms.items()}
    return result


def total(combs):
    """Sum an iterable of combinations."""
    out = {}
    for comb in combs:
        for term, c in comb.items():
            v = out.get(term, 0) + c
            if v:
                out[term] = v
            else:
                out.pop(term, None)
    result = LinComb()
    result._terms = out
    return result


def as_lincomb(value):
    """Promote a bare term to a one-term combination."""
    return value if isinstance(value, LinComb) else LinComb.single(value)


def extend_linear(f, a):
    """Apply ``f: term -> LinComb | term`` linearly to ``a``."""
    out = {}
    for t, c in a.items():
        for u, d in as_lincomb(f(t)).items():
            v = out.get(u, 0) + c * d
            if v:
                out[u] = v
            else:
                out.pop(u, None)
    result = LinComb()
    result._terms = out
    return result


def extend_bilinear(f, a, b):
    """Apply ``f: term x term -> LinComb | term`` bilinearly."""
    out = {}
    for t, c in a.items():
        for u, d in b.items():
            for w, e in as_lincomb(f(t, u)).items():
                v = out.get(w, 0) + c * d * e
                if v:
                    out[w] = v
                else:
                    out.pop(w, None)
    result = LinComb()
    result._terms = out
    return result


def format_coeff(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_coeff(text):
    """Parse ``"p/q"``, ``"p"`` or an integer into a Fraction."""
    if isinstance(text, bool):
        raise ValueError("boolean is not a coefficient")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"coefficient must be a string or integer, got {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad coefficient {text!r}") from exc


def format_lincomb(a, fmt=str):
    """Render as ``c · term + ...`` in canonical order; ``0`` when empty."""
    if not a:
        return "0"
    parts = []
    for i, (term, c) in enumerate(a.sorted_items()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = fmt(term) if mag == 1 else f"{format_coeff(mag)} · {fmt(term)}"
        if i == 0:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)
