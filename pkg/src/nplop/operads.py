"""Species with partial compositions, twisted products, and the base examples.

A structure is any object offering ``basis(ground)``, ``compose(x, s, y)``
and ``transport(x, sigma)``; operads additionally offer ``unit(s)``.  Terms
are the immutable values of :mod:`nplop.combinatorics`.
"""

from itertools import product

from .combinatorics import (
    Cycle,
    LinearOrder,
    Star,
    cycles_on,
    graft,
    linear_orders,
    set_partitions,
    shuffles,
)
from .linear import LinComb, extend_bilinear
from .report import CheckReport


class NplStructure:
    """Base class: a species with partial compositions ``x o_s y``."""

    name = "npl"
    has_unit = False

    def basis(self, ground):
        raise NotImplementedError

    def compose(self, x, s, y):
        raise NotImplementedError

    def transport(self, x, sigma):
        return x.relabel(sigma)

    def unit(self, s):
        raise TypeError(f"{self.name} has no unit")

    def compose_lin(self, a, s, b):
        """Bilinear extension of ``compose`` to combinations."""
        return extend_bilinear(lambda x, y: self.compose(x, s, y), a, b)

    def parse_term(self, data):
        raise NotImplementedError

    def format_term(self, term):
        return str(term)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class OperadStructure(NplStructure):
    name = "operad"
    has_unit = True


class IdentityOperad(OperadStructure):
    """Only singletons carry a structure; composition substitutes labels."""

    name = "identity"

    def basis(self, ground):
        return [Star(ground)] if len(ground) == 1 else []

    def compose(self, x, s, y):
        graft(x.ground, s, y.ground)
        if len(x.ground) != 1 or len(y.ground) != 1:
            raise ValueError("identity operad terms live on singletons")
        return LinComb.single(y)

    def unit(self, s):
        return LinComb.single(Star([s]))

    def parse_term(self, data):
        term = Star(data)
        if len(term.ground) != 1:
            raise ValueError("identity operad terms live on singletons")
        return term


class ComPlus(OperadStructure):
    name = "com+"

    def basis(self, ground):
        return [Star(ground)] if ground else []

    def compose(self, x, s, y):
        return LinComb.single(Star(graft(x.ground, s, y.ground)))

    def unit(self, s):
        return LinComb.single(Star([s]))

    def parse_term(self, data):
        return Star(data)


class AsPlus(OperadStructure):
    name = "as+"

    def basis(self, ground):
        return linear_orders(ground) if ground else []

    def compose(self, x, s, y):
        graft(x.ground, s, y.ground)
        return LinComb.single(x.splice(s, y))

    def unit(self, s):
        return LinComb.single(LinearOrder([s]))

    def parse_term(self, data):
        term = LinearOrder(data)
        if not term.word:
            raise ValueError("as+ has no structure on the empty set")
        return term


def cycle_npl(c, s, d):
    """Insert every linearisation of ``d`` in place of ``s`` in ``c``."""
    graft(c.ground, s, d.ground)
    tail = c.run_from(s)[1:]
    return LinComb((Cycle(d.run_from(t) + tail), 1) for t in d.rotation)


class CycleNpl(NplStructure):
    """Cycles with the nested pre-Lie insertion; not an operad."""

    name = "cycles"

    def basis(self, ground):
        return cycles_on(ground)

    def compose(self, x, s, y):
        return cycle_npl(x, s, y)

    def parse_term(self, data):
        return Cycle(data)


class TwistedProduct:
    """A product of structures on disjoint sets."""

    name = "product"

    def product(self, x, y):
        raise NotImplementedError

    def product_lin(self, a, b):
        return extend_bilinear(self.product, a, b)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


def _disjoint(x, y):
    if x.ground & y.ground:
        raise ValueError(f"product needs disjoint ground sets, both contain {sorted(x.ground & y.ground)!r}")


class ConcatE(TwistedProduct):
    name = "concat-E"

    def product(self, x, y):
        _disjoint(x, y)
        return LinComb.single(Star(x.ground | y.ground))


class ShuffleL(TwistedProduct):
    name = "shuffle-L"

    def product(self, x, y):
        _disjoint(x, y)
        return LinComb((w, 1) for w in shuffles(x, y))


class ConcatL(TwistedProduct):
    """Word concatenation: associative but not commutative."""

    name = "concat-L"

    def product(self, x, y):
        _disjoint(x, y)
        return LinComb.single(LinearOrder(x.word + y.word))


def mu_fold(mu, factors):
    """Multiply structures left to right: ``((f1 f2) f3) ...``."""
    factors = list(factors)
    if not factors:
        raise ValueError("nothing to multiply")
    acc = LinComb.single(factors[0])
    for f in factors[1:]:
        acc = mu.product_lin(acc, LinComb.single(f))
    return acc


def _factorisations(op, ground, max_blocks):
    """Sequences of basis structures on the blocks of each partition of ``ground``."""
    for pi in set_partitions(ground):
        if len(pi) > max_blocks:
            continue
        for choice in product(*(op.basis(b) for b in pi.blocks)):
            yield choice


def check_mu_compatibility(op, mu, max_s=4, max_t=3, max_blocks=3, max_instances=10**6):
    """Check that composing into a product only touches the factor hit.

    For every product ``a_1 ... a_k`` of basis structures on the blocks of a
    partition of ``S`` and every ``s``, ``(a_1 ... a_k) o_s b`` must equal the
    product of ``a_i o_s b`` (``a_i`` the factor containing ``s``) with the
    remaining factors in canonical order.
    """
    report = CheckReport("MU-COMPAT", f"{op.name}/{mu.name}")
    for a in range(1, max_s + 1):
        S = range(1, a + 1)
        for b in range(1, max_t + 1):
            T = range(a + 1, a + b + 1)
            for factors in _factorisations(op, S, max_blocks):
                folded = mu_fold(mu, factors)
                for s in S:
                    hit = next(i for i, f in enumerate(factors) if s in f.ground)
                    rest = [f for i, f in enumerate(factors) if i != hit]
                    for y in op.basis(T):
                        if report.instances >= max_instances:
                            report.truncated = True
                            return report
                        lhs = op.compose_lin(folded, s, LinComb.single(y))
                        rhs = op.compose(factors[hit], s, y)
                        for f in rest:
                            rhs = mu.product_lin(rhs, LinComb.single(f))
                        report.record((a, b), {"factors": list(factors), "s": s, "y": y}, lhs, rhs)
    return report
