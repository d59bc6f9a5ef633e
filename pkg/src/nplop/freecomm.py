"""The free commutative construction over a species ``q``.

A basis element is a :class:`Monomial`: a set partition with one
``q``-structure per block.  Two partial compositions are provided:

* :func:`square_compose` folds the right argument into a single structure
  with a commutative product and composes it into the block hit;
* :func:`npl_compose` composes each block of the right argument into the
  block hit in turn and sums, which needs no product at all.

:func:`global_gamma` and :func:`operadic_global` evaluate whole two-level
nestings at once.
"""

from itertools import product

from .combinatorics import SetPartition, graft, sections, set_partitions
from .linear import LinComb, extend_bilinear, extend_linear, total
from .operads import NplStructure, mu_fold


class Monomial:
    """Structures on the blocks of a partition, as an unordered product."""

    __slots__ = ("factors", "ground")

    def __init__(self, factors):
        factors = tuple(sorted(factors, key=lambda f: min(f.ground)))
        ground = frozenset().union(*(f.ground for f in factors))
        if sum(len(f.ground) for f in factors) != len(ground):
            raise ValueError("monomial factors must live on disjoint sets")
        if any(not f.ground for f in factors):
            raise ValueError("monomial factors must be nonempty")
        self.factors = factors
        self.ground = ground

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    @property
    def partition(self):
        return SetPartition(f.ground for f in self.factors)

    @property
    def assignment(self):
        """Mapping from canonical block to its structure."""
        return {tuple(sorted(f.ground)): f for f in self.factors}

    def factor_at(self, label):
        for f in self.factors:
            if label in f.ground:
                return f
        raise ValueError(f"label {label!r} is not in the monomial")

    def without(self, factor):
        return tuple(f for f in self.factors if f is not factor)

    def inside(self, labels):
        """Factors whose block lies inside ``labels``."""
        labels = frozenset(labels)
        return tuple(f for f in self.factors if f.ground <= labels)

    def __mul__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        if self.ground & other.ground:
            raise ValueError("product of monomials needs disjoint ground sets")
        return Monomial(self.factors + other.factors)

    def relabel(self, sigma):
        return Monomial(f.relabel(sigma) for f in self.factors)

    def sort_key(self):
        return tuple((tuple(sorted(f.ground)), f.sort_key()) for f in self.factors)

    def to_json(self):
        return [{"block": sorted(f.ground), "structure": f.to_json()} for f in self.factors]

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.factors == other.factors

    def __hash__(self):
        return hash(("Monomial", self.factors))

    def __repr__(self):
        return f"Monomial({list(self.factors)!r})"

    def __str__(self):
        return "[" + ", ".join(str(f) for f in self.factors) + "]"


def twisted_product(a, b):
    """Bilinear disjoint product of two combinations of monomials."""
    return extend_bilinear(lambda x, y: x * y, a, b)


def _attach(composed, *rest):
    return extend_linear(lambda t: Monomial((t,) + sum(rest, ())), composed)


def square_compose(op, mu, alpha, s, beta):
    """Fold ``beta`` with ``mu`` and compose it into the block of ``alpha`` at ``s``."""
    graft(alpha.ground, s, beta.ground)
    hit = alpha.factor_at(s)
    folded = mu_fold(mu, beta.factors)
    composed = op.compose_lin(LinComb.single(hit), s, folded)
    return _attach(composed, alpha.without(hit))


def npl_compose(op, alpha, s, beta):
    """Sum over blocks of ``beta`` of composing that block at ``s``."""
    graft(alpha.ground, s, beta.ground)
    hit = alpha.factor_at(s)
    rest = alpha.without(hit)
    return total(_attach(op.compose(hit, s, c), rest, beta.without(c)) for c in beta.factors)


class FreeCommSquare(NplStructure):
    """Monomials over ``q`` with the product-folding composition."""

    def __init__(self, q, mu):
        self.q = q
        self.mu = mu
        self.name = f"E({q.name})/{mu.name}"
        self.has_unit = q.has_unit

    def basis(self, ground):
        return monomial_basis(self.q, ground)

    def compose(self, x, s, y):
        return square_compose(self.q, self.mu, x, s, y)

    def unit(self, s):
        return extend_linear(lambda t: Monomial([t]), self.q.unit(s))

    def parse_term(self, data):
        return parse_monomial(self.q, data)


class FreeCommNpl(NplStructure):
    """Monomials over ``q`` with the blockwise-sum composition."""

    def __init__(self, q):
        self.q = q
        self.name = f"E({q.name})"
        self.has_unit = q.has_unit

    def basis(self, ground):
        return monomial_basis(self.q, ground)

    def compose(self, x, s, y):
        return npl_compose(self.q, x, s, y)

    def unit(self, s):
        return extend_linear(lambda t: Monomial([t]), self.q.unit(s))

    def parse_term(self, data):
        return parse_monomial(self.q, data)


def monomial_basis(q, ground):
    if not ground:
        return []
    out = []
    for pi in set_partitions(ground):
        for choice in product(*(q.basis(b) for b in pi.blocks)):
            out.append(Monomial(choice))
    return out


def parse_monomial(q, data):
    if not isinstance(data, list):
        raise ValueError("a monomial is a list of {block, structure} records")
    factors = []
    for entry in data:
        if not isinstance(entry, dict) or set(entry) != {"block", "structure"}:
            raise ValueError("monomial entries need exactly 'block' and 'structure'")
        f = q.parse_term(entry["structure"])
        if f.ground != frozenset(entry["block"]) or len(entry["block"]) != len(f.ground):
            raise ValueError(f"structure {entry['structure']!r} does not live on block {entry['block']!r}")
        factors.append(f)
    return Monomial(factors)


class NestedElement:
    """A two-level nesting: an outer monomial over the blocks of ``pi``
    and an inner monomial on the whole set.

    Blocks of ``pi`` are named by their minimum label, so the outer
    monomial lives on those representatives.  The grouping of ``pi``'s
    blocks by outer factor is ``tau``; the inner partition is ``rho``.
    """

    __slots__ = ("pi", "outer", "inner")

    def __init__(self, pi, outer, inner):
        reps = frozenset(b[0] for b in pi.blocks)
        if outer.ground != reps:
            raise ValueError("outer monomial must live on the minima of pi's blocks")
        if inner.ground != pi.ground:
            raise ValueError("inner monomial must live on pi's ground set")
        owner = {x: b for b in pi.blocks for x in b}
        for f in inner.factors:
            if len({owner[x] for x in f.ground}) != 1:
                raise ValueError("inner partition must refine pi")
        self.pi = pi
        self.outer = outer
        self.inner = inner

    @property
    def ground(self):
        return self.pi.ground

    @property
    def rho(self):
        return self.inner.partition

    @property
    def tau(self):
        block = {b[0]: b for b in self.pi.blocks}
        return SetPartition([x for m in f.ground for x in block[m]] for f in self.outer.factors)

    def block_at(self, rep):
        return next(b for b in self.pi.blocks if b[0] == rep)

    def relabel(self, sigma):
        pi = self.pi.relabel(sigma)
        new_rep = {b[0]: min(sigma[x] for x in b) for b in self.pi.blocks}
        return NestedElement(pi, self.outer.relabel(new_rep), self.inner.relabel(sigma))

    def to_json(self):
        return {
            "tau": self.tau.to_json(),
            "pi": self.pi.to_json(),
            "rho": self.rho.to_json(),
            "outer": self.outer.to_json(),
            "inner": self.inner.to_json(),
        }

    @classmethod
    def from_json(cls, q, data):
        required = {"pi", "outer", "inner"}
        if not isinstance(data, dict) or not required <= set(data):
            raise ValueError("a nested element needs 'pi', 'outer' and 'inner'")
        nested = cls(SetPartition(data["pi"]), parse_monomial(q, data["outer"]), parse_monomial(q, data["inner"]))
        for key in ("tau", "rho"):
            if key in data and SetPartition(data[key]) != getattr(nested, key):
                raise ValueError(f"'{key}' does not match the outer/inner data")
        return nested

    def __eq__(self, other):
        return (isinstance(other, NestedElement) and self.pi == other.pi
                and self.outer == other.outer and self.inner == other.inner)

    def __hash__(self):
        return hash((self.pi, self.outer, self.inner))

    def __repr__(self):
        return f"NestedElement({self.pi}, {self.outer}, {self.inner})"


def _collect(parts, rest):
    """Multiply combinations of single structures into monomials."""
    acc = LinComb.single(())
    for part in parts:
        acc = extend_bilinear(lambda fs, t: fs + (t,), acc, part)
    return extend_linear(lambda fs: Monomial(fs + rest), acc)


def global_gamma(op, nested):
    """Evaluate a nesting as a sum over sections of the inner partition.

    For each section (one inner block chosen in every block of ``pi``),
    every outer structure is moved onto the chosen blocks' minima, the
    chosen inner structures are composed into it, and the inner
    structures not chosen are carried along as extra factors.
    """
    inner = {tuple(sorted(f.ground)): f for f in nested.inner.factors}
    out = []
    for section in sections(nested.rho, nested.pi):
        chosen = set(section.values())
        parts = []
        for x in nested.outer.factors:
            picks = {m: section[nested.block_at(m)] for m in x.ground}
            moved = op.transport(x, {m: c[0] for m, c in picks.items()})
            z = LinComb.single(moved)
            for m in sorted(x.ground):
                c = picks[m]
                z = op.compose_lin(z, c[0], LinComb.single(inner[c]))
            parts.append(z)
        rest = tuple(f for b, f in inner.items() if b not in chosen)
        out.append(_collect(parts, rest))
    return total(out)


def operadic_global(op, mu, nested):
    """Fold each block of ``pi``'s inner structures with ``mu``, then compose."""
    parts = []
    for x in nested.outer.factors:
        z = LinComb.single(x)
        for m in sorted(x.ground):
            z = op.compose_lin(z, m, mu_fold(mu, nested.inner.inside(nested.block_at(m))))
        parts.append(z)
    return _collect(parts, ())
