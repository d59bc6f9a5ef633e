"""Polynomial maps ``V^A -> V`` on ``V = Q^d`` and their compositions.

A variable is a pair ``(slot, coord)`` with ``coord`` in ``1..d``.  The
module provides:

* :class:`Poly`, a sparse exact polynomial;
* :class:`PolynomialMap`, a ``d``-tuple of polynomials in the variables
  of a fixed slot set;
* the pre-Lie product of vector fields (:func:`prelie`), the averaged
  partial composition (:func:`npl_partial`) and plain substitution of
  multilinear maps (:func:`end_compose`);
* :class:`PolymapNpl` and :class:`EndOperad`, the same compositions as
  structures on a monomial basis, for use with the axiom engine;
* :func:`check_palgebra_morphism`.
"""

from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product

from .combinatorics import check_bijection, graft
from .linear import LinComb, format_coeff, parse_coeff
from .operads import NplStructure
from .report import CheckReport


def _mono_mul(m1, m2):
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


class Poly:
    """Sparse polynomial: ``{monomial: Fraction}``.

    A monomial is a sorted tuple of ``(variable, exponent)`` pairs with
    positive exponents; the empty tuple is the constant monomial.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        out = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                key = tuple(sorted((v, e) for v, e in mono if e))
                if any(e < 0 for _, e in key):
                    raise ValueError("negative exponent")
                c = out.get(key, 0) + c
                if c:
                    out[key] = c
                else:
                    out.pop(key, None)
        self.terms = out

    @classmethod
    def constant(cls, c):
        return cls({(): c})

    @classmethod
    def var(cls, v):
        return cls({((v, 1),): 1})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.constant(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return _raw(out)

    __radd__ = __add__

    def __neg__(self):
        return _raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return _raw({m: c * other for m, c in self.terms.items()} if other else {})
        other = _as_poly(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return _raw(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = Poly.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def variables(self):
        return {v for m in self.terms for v, _ in m}

    def degree(self):
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def diff(self, v):
        """Formal partial derivative in the variable ``v``."""
        out = {}
        for m, c in self.terms.items():
            exps = dict(m)
            e = exps.get(v, 0)
            if not e:
                continue
            if e == 1:
                del exps[v]
            else:
                exps[v] = e - 1
            key = tuple(sorted(exps.items()))
            out[key] = out.get(key, 0) + c * e
        return Poly(out)

    def rename(self, mapping):
        """Rename variables; ``mapping`` must be injective on the variables used."""
        return Poly({tuple((mapping.get(v, v), e) for v, e in m): c for m, c in self.terms.items()})

    def substitute(self, values):
        """Replace each variable in ``values`` by a polynomial or number."""
        values = {v: _as_poly(p) for v, p in values.items()}
        result = Poly()
        for m, c in self.terms.items():
            term = Poly.constant(c)
            for v, e in m:
                term = term * (values[v] ** e if v in values else Poly({((v, e),): 1}))
            result = result + term
        return result

    def evaluate(self, point):
        """Value at ``point`` (a mapping covering every variable)."""
        total = Fraction(0)
        for m, c in self.terms.items():
            for v, e in m:
                c = c * Fraction(point[v]) ** e
            total += c
        return total

    def sort_key(self):
        return sorted(self.terms)

    def to_json(self):
        return [
            {"coeff": format_coeff(c), "exponents": {f"{s}.{i}": e for (s, i), e in m}}
            for m, c in sorted(self.terms.items(), key=lambda mc: _mono_key(mc[0]))
        ]

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, list):
            raise ValueError("a polynomial is a list of {coeff, exponents} records")
        terms = {}
        for entry in data:
            if not isinstance(entry, dict) or set(entry) != {"coeff", "exponents"}:
                raise ValueError("polynomial entries need exactly 'coeff' and 'exponents'")
            mono = []
            for name, e in entry["exponents"].items():
                if not isinstance(e, int) or isinstance(e, bool) or e < 0:
                    raise ValueError(f"bad exponent {e!r}")
                mono.append((parse_variable(name), e))
            key = tuple(sorted(mono))
            if key in terms:
                raise ValueError("repeated monomial")
            terms[key] = parse_coeff(entry["coeff"])
        return cls(terms)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda mc: _mono_key(mc[0])):
            names = "*".join(f"x{s}_{i}" + (f"^{e}" if e > 1 else "") for (s, i), e in m)
            if not names:
                parts.append(format_coeff(c))
            elif c == 1:
                parts.append(names)
            elif c == -1:
                parts.append("-" + names)
            else:
                parts.append(f"{format_coeff(c)}*{names}")
        return " + ".join(parts).replace("+ -", "- ")


def _raw(terms):
    p = Poly()
    p.terms = terms
    return p


def _as_poly(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.constant(x)
    raise TypeError(f"cannot treat {x!r} as a polynomial")


def _mono_key(m):
    return (sum(e for _, e in m), m)


def parse_variable(name):
    """Parse ``"slot.coord"``; integer-looking slots become ints."""
    if not isinstance(name, str) or "." not in name:
        raise ValueError(f"variable {name!r} is not of the form 'slot.coord'")
    slot, coord = name.rsplit(".", 1)
    try:
        coord = int(coord)
    except ValueError:
        raise ValueError(f"bad coordinate in {name!r}") from None
    try:
        slot = int(slot)
    except ValueError:
        pass
    return (slot, coord)


class PolynomialMap:
    """A polynomial map ``V^slots -> V`` with ``V = Q^dim``."""

    __slots__ = ("slots", "dim", "components")

    def __init__(self, slots, dim, components):
        slots = frozenset(slots)
        components = tuple(components)
        if dim < 1:
            raise ValueError("dimension must be positive")
        if len(components) != dim:
            raise ValueError(f"expected {dim} components, got {len(components)}")
        for p in components:
            for s, i in p.variables():
                if s not in slots or not 1 <= i <= dim:
                    raise ValueError(f"variable {(s, i)!r} outside slots {sorted(slots)!r} x 1..{dim}")
        self.slots = slots
        self.dim = dim
        self.components = components

    @property
    def ground(self):
        return self.slots

    @classmethod
    def zero(cls, slots, dim):
        return cls(slots, dim, [Poly()] * dim)

    @classmethod
    def identity(cls, slot, dim):
        return cls([slot], dim, [Poly.var((slot, i)) for i in range(1, dim + 1)])

    def __eq__(self, other):
        return (isinstance(other, PolynomialMap) and self.slots == other.slots
                and self.dim == other.dim and self.components == other.components)

    def __hash__(self):
        return hash((self.slots, self.dim, self.components))

    def _check_same(self, other):
        if self.slots != other.slots or self.dim != other.dim:
            raise ValueError("maps must share slots and dimension")

    def __add__(self, other):
        self._check_same(other)
        return PolynomialMap(self.slots, self.dim, [p + q for p, q in zip(self.components, other.components)])

    def __sub__(self, other):
        self._check_same(other)
        return PolynomialMap(self.slots, self.dim, [p - q for p, q in zip(self.components, other.components)])

    def __neg__(self):
        return PolynomialMap(self.slots, self.dim, [-p for p in self.components])

    def __mul__(self, c):
        return PolynomialMap(self.slots, self.dim, [p * c for p in self.components])

    __rmul__ = __mul__

    def relabel(self, sigma):
        check_bijection(sigma, self.slots)
        rename = {(s, i): (sigma[s], i) for s in self.slots for i in range(1, self.dim + 1)}
        return PolynomialMap((sigma[s] for s in self.slots), self.dim,
                             [p.rename(rename) for p in self.components])

    def degree(self):
        return max(p.degree() for p in self.components)

    def is_multilinear(self):
        """Every monomial has degree exactly one in each slot."""
        for p in self.components:
            for m in p.terms:
                per_slot = {}
                for (s, _), e in m:
                    per_slot[s] = per_slot.get(s, 0) + e
                if set(per_slot) != self.slots or any(e != 1 for e in per_slot.values()):
                    return False
        return True

    def evaluate(self, points):
        """Apply to one vector per slot; returns a tuple of Fractions."""
        point = {}
        for s in self.slots:
            vec = points[s]
            if len(vec) != self.dim:
                raise ValueError(f"vector for slot {s!r} has length {len(vec)}, expected {self.dim}")
            for i, x in enumerate(vec, 1):
                point[(s, i)] = x
        return tuple(p.evaluate(point) for p in self.components)

    def to_lincomb(self):
        """Decompose into monomial basis maps."""
        return LinComb(
            (MonomialMap(self.slots, j, m), c)
            for j, p in enumerate(self.components, 1)
            for m, c in p.terms.items()
        )

    @classmethod
    def from_lincomb(cls, comb, slots, dim):
        comps = [dict() for _ in range(dim)]
        for term, c in comb.items():
            if term.slots != frozenset(slots):
                raise ValueError("basis map on the wrong slots")
            comps[term.out - 1][term.monomial] = comps[term.out - 1].get(term.monomial, 0) + c
        return cls(slots, dim, [Poly(c) for c in comps])

    def to_json(self):
        return {
            "slots": sorted(self.slots),
            "dim": self.dim,
            "components": [p.to_json() for p in self.components],
        }

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict) or set(data) != {"slots", "dim", "components"}:
            raise ValueError("a polynomial map needs exactly 'slots', 'dim' and 'components'")
        if len(set(data["slots"])) != len(data["slots"]):
            raise ValueError("duplicate slots")
        return cls(data["slots"], data["dim"], [Poly.from_json(c) for c in data["components"]])

    def __repr__(self):
        return f"PolynomialMap({sorted(self.slots)!r}, {self.dim}, {[str(p) for p in self.components]!r})"

    def __str__(self):
        return "(" + ", ".join(str(p) for p in self.components) + ")"


class MonomialMap:
    """Basis map: the monomial ``monomial`` placed in output coordinate ``out``."""

    __slots__ = ("slots", "out", "monomial")

    def __init__(self, slots, out, monomial):
        self.slots = frozenset(slots)
        self.out = out
        self.monomial = tuple(sorted(monomial))

    @property
    def ground(self):
        return self.slots

    def as_map(self, dim):
        comps = [Poly()] * dim
        comps[self.out - 1] = Poly({self.monomial: 1})
        return PolynomialMap(self.slots, dim, comps)

    def relabel(self, sigma):
        check_bijection(sigma, self.slots)
        return MonomialMap((sigma[s] for s in self.slots), self.out,
                           (((sigma[s], i), e) for (s, i), e in self.monomial))

    def sort_key(self):
        return (tuple(sorted(self.slots)), self.out, _mono_key(self.monomial))

    def to_json(self):
        return {
            "slots": sorted(self.slots),
            "out": self.out,
            "exponents": {f"{s}.{i}": e for (s, i), e in self.monomial},
        }

    def __eq__(self, other):
        return (isinstance(other, MonomialMap) and self.slots == other.slots
                and self.out == other.out and self.monomial == other.monomial)

    def __hash__(self):
        return hash((self.slots, self.out, self.monomial))

    def __repr__(self):
        return f"MonomialMap({sorted(self.slots)!r}, {self.out}, {self.monomial!r})"

    def __str__(self):
        names = "*".join(f"x{s}_{i}" + (f"^{e}" if e > 1 else "") for (s, i), e in self.monomial)
        return f"{names or '1'} e{self.out}"


def prelie(f, g):
    """Pre-Lie product of vector fields: ``(f > g)_j = sum_i f_i d_i g_j``.

    Both fields take one slot; ``f`` is read on ``g``'s slot.
    """
    if len(f.slots) != 1 or len(g.slots) != 1:
        raise ValueError("prelie takes one-slot vector fields")
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")
    (a,), (b,) = f.slots, g.slots
    if a != b:
        f = f.relabel({a: b})
    comps = []
    for gj in g.components:
        acc = Poly()
        for i, fi in enumerate(f.components, 1):
            acc = acc + fi * gj.diff((b, i))
        comps.append(acc)
    return PolynomialMap([b], g.dim, comps)


def partial_evaluate(f, fixed):
    """Fix the vectors of some slots; the result lives on the remaining slots."""
    extra = set(fixed) - f.slots
    if extra:
        raise ValueError(f"slots {sorted(extra)!r} are not inputs of the map")
    values = {}
    for s, vec in fixed.items():
        if len(vec) != f.dim:
            raise ValueError(f"vector for slot {s!r} has length {len(vec)}, expected {f.dim}")
        for i, x in enumerate(vec, 1):
            values[(s, i)] = Fraction(x)
    return PolynomialMap(f.slots - set(fixed), f.dim, [p.substitute(values) for p in f.components])


def npl_partial(g, b, f, average=True):
    """Partial composition of polynomial maps at slot ``b``.

    For each input slot ``k`` of ``f``, the field obtained from ``g`` by
    freezing its other slots acts on ``f`` in slot ``k`` through the
    pre-Lie product, with ``g`` reading slot ``k``'s vector in place of
    slot ``b``.  The summands are averaged over ``k``; ``average=False``
    sums them instead.
    """
    slots = graft(g.slots, b, f.slots)
    if g.dim != f.dim:
        raise ValueError(f"dimension mismatch: {g.dim} vs {f.dim}")
    if not f.slots:
        raise ValueError("cannot compose a map with no inputs")
    d = g.dim
    comps = [Poly() for _ in range(d)]
    for k in sorted(f.slots):
        rename = {(b, i): (k, i) for i in range(1, d + 1)}
        field = [gi.rename(rename) for gi in g.components]
        for j, fj in enumerate(f.components):
            for i, gi in enumerate(field, 1):
                comps[j] = comps[j] + gi * fj.diff((k, i))
    if average:
        comps = [p * Fraction(1, len(f.slots)) for p in comps]
    return PolynomialMap(slots, d, comps)


def end_compose(g, b, f):
    """Substitute the output of ``f`` into input slot ``b`` of ``g``."""
    slots = graft(g.slots, b, f.slots)
    if g.dim != f.dim:
        raise ValueError(f"dimension mismatch: {g.dim} vs {f.dim}")
    if not (g.is_multilinear() and f.is_multilinear()):
        raise ValueError("end_compose takes multilinear maps")
    values = {(b, i): fi for i, fi in enumerate(f.components, 1)}
    return PolynomialMap(slots, g.dim, [p.substitute(values) for p in g.components])


def _monomials(variables, degree):
    out = []
    for k in range(degree + 1):
        for combo in combinations_with_replacement(variables, k):
            exps = {}
            for v in combo:
                exps[v] = exps.get(v, 0) + 1
            out.append(tuple(sorted(exps.items())))
    return out


class PolymapNpl(NplStructure):
    """Polynomial maps of bounded degree, basis-wise, under :func:`npl_partial`.

    Only the enumerated basis is bounded by ``degree``; compositions may
    produce higher-degree terms.
    """

    def __init__(self, dim=2, degree=2, average=True):
        self.dim = dim
        self.degree = degree
        self.average = average
        self.name = f"polymap[d={dim},deg<={degree}]" + ("" if average else "[sum]")

    def basis(self, ground):
        ground = sorted(ground)
        if not ground:
            return []
        variables = [(s, i) for s in ground for i in range(1, self.dim + 1)]
        return [MonomialMap(ground, j, m)
                for j in range(1, self.dim + 1)
                for m in _monomials(variables, self.degree)]

    def compose(self, x, s, y):
        return npl_partial(x.as_map(self.dim), s, y.as_map(self.dim), average=self.average).to_lincomb()

    def parse_term(self, data):
        return _parse_monomial_map(data)


class EndOperad(NplStructure):
    """Multilinear maps, basis-wise, under substitution."""

    has_unit = True

    def __init__(self, dim=2):
        self.dim = dim
        self.name = f"end[d={dim}]"

    def basis(self, ground):
        ground = sorted(ground)
        if not ground:
            return []
        coords = range(1, self.dim + 1)
        return [MonomialMap(ground, j, (((s, i), 1) for s, i in zip(ground, choice)))
                for j in coords
                for choice in product(coords, repeat=len(ground))]

    def compose(self, x, s, y):
        return end_compose(x.as_map(self.dim), s, y.as_map(self.dim)).to_lincomb()

    def unit(self, s):
        return PolynomialMap.identity(s, self.dim).to_lincomb()

    def parse_term(self, data):
        return _parse_monomial_map(data)


def _parse_monomial_map(data):
    if not isinstance(data, dict) or set(data) != {"slots", "out", "exponents"}:
        raise ValueError("a basis map needs exactly 'slots', 'out' and 'exponents'")
    mono = [(parse_variable(k), e) for k, e in data["exponents"].items()]
    return MonomialMap(data["slots"], data["out"], mono)


def inclusion(term, dim):
    """The multilinear basis map as a polynomial map."""
    return term.as_map(dim)


def coordinatewise_product(term, dim):
    """Send the structure on ``S`` to ``(x_s)_s -> (prod_s x_{s,i})_i``.

    This is the action of a commutative structure on ``Q^dim`` with the
    coordinatewise product.
    """
    comps = []
    for i in range(1, dim + 1):
        p = Poly.constant(1)
        for s in sorted(term.ground):
            p = p * Poly.var((s, i))
        comps.append(p)
    return PolynomialMap(term.ground, dim, comps)


def map_lincomb(psi, comb, slots, dim):
    """Linear extension of ``psi`` to a combination on ``slots``."""
    total = PolynomialMap.zero(slots, dim)
    for term, c in comb.items():
        total = total + psi(term) * c
    return total


def check_palgebra_morphism(P, psi, dim, max_size=3, max_part=None, max_instances=10**6):
    """Check that ``psi`` (basis term -> PolynomialMap) respects compositions.

    Verifies ``psi(x o_s y) = psi(x) > _s psi(y)`` on every enumerated
    instance and ``psi(sigma . x) = sigma . psi(x)`` for every permutation
    of each ground set up to size 3 and for a shift onto fresh labels.
    """
    report = CheckReport("MORPHISM", f"{P.name}->polymap[d={dim}]")
    cap = max_part or max_size
    for n in range(1, min(max_size, cap) + 1):
        S = range(1, n + 1)
        sigmas = [dict(zip(S, p)) for p in permutations(S)] if n <= 3 else []
        sigmas.append({x: x + 100 for x in S})
        for x in P.basis(S):
            for sigma in sigmas:
                if report.instances >= max_instances:
                    report.truncated = True
                    return report
                lhs = psi(P.transport(x, sigma)).to_lincomb()
                rhs = psi(x).relabel(sigma).to_lincomb()
                report.record((n,), {"x": x, "sigma": sigma}, lhs, rhs)
    sizes = sorted(((a, b) for a in range(1, cap + 1) for b in range(1, cap + 1) if a + b - 1 <= max_size),
                   key=lambda ab: (sum(ab), ab))
    for a, b in sizes:
        S, T = range(1, a + 1), range(a + 1, a + b + 1)
        ys = P.basis(T)
        for x in P.basis(S):
            for y in ys:
                for s in S:
                    if report.instances >= max_instances:
                        report.truncated = True
                        return report
                    ground = graft(S, s, T)
                    lhs = map_lincomb(psi, P.compose(x, s, y), ground, dim).to_lincomb()
                    rhs = npl_partial(psi(x), s, psi(y)).to_lincomb()
                    report.record((a, b), {"x": x, "s": s, "y": y}, lhs, rhs)
    return report
