"""Concrete compositions on partitions, linear partitions, permutations and sets.

These are direct implementations, written against the combinatorial
objects themselves.  The generic construction in :mod:`nplop.freecomm`
computes the same things through monomials; :func:`to_monomial` and
:func:`from_monomial` translate between the two pictures.
"""

from itertools import product

from .combinatorics import (
    LinearOrder,
    LinearSetPartition,
    Permutation,
    SetPartition,
    Star,
    graft,
    induced_partition,
    linear_set_partitions,
    permutations_on,
    set_partitions,
    shuffles,
)
from .freecomm import Monomial
from .linear import LinComb, extend_linear, total
from .operads import NplStructure, cycle_npl


def pi_square(pi, s, rho):
    """Replace the block of ``s`` by that block minus ``s`` together with ``rho``'s ground set."""
    graft(pi.ground, s, rho.ground)
    hit = pi.block_of(s)
    merged = [x for x in hit if x != s] + sorted(rho.ground)
    return SetPartition([b for b in pi.blocks if b != hit] + [merged])


def pi_npl(pi, s, rho):
    """Sum over blocks ``C`` of ``rho`` of merging ``C`` into the block of ``s``."""
    graft(pi.ground, s, rho.ground)
    hit = pi.block_of(s)
    keep = [b for b in pi.blocks if b != hit]
    trimmed = [x for x in hit if x != s]
    return LinComb(
        (SetPartition(keep + [trimmed + list(c)] + [d for d in rho.blocks if d != c]), 1)
        for c in rho.blocks
    )


def pi_global(pi, tau, rhos=None):
    """Merge ``pi``'s blocks along ``tau``; inner partitions do not matter.

    ``rhos``, when given, maps each block of ``pi`` to a partition of it and
    is only validated.
    """
    if rhos is not None:
        for block, rho in rhos.items():
            if rho.ground != frozenset(block) or tuple(sorted(block)) not in pi.blocks:
                raise ValueError(f"inner partition {rho} does not partition a block of pi")
        if len(rhos) != len(pi):
            raise ValueError("need one inner partition per block of pi")
    return induced_partition(pi, tau)


def _splice_word(word, s, inner):
    i = word.index(s)
    return word[:i] + inner + word[i + 1:]


def arrowpi_square(pi, s, tau):
    """Splice every shuffle of ``tau``'s chains into the chain of ``s``."""
    graft(pi.ground, s, tau.ground)
    hit = pi.chain_of(s)
    keep = [c for c in pi.chains if c != hit]
    words = [LinearOrder()]
    for chain in tau.chains:
        words = [w for v in words for w in shuffles(v, chain)]
    return LinComb(
        (LinearSetPartition(keep + [_splice_word(hit.word, s, w.word)]), 1) for w in words
    )


def arrowpi_npl(pi, s, tau):
    """Sum over chains of ``tau`` of splicing that chain in place of ``s``."""
    graft(pi.ground, s, tau.ground)
    hit = pi.chain_of(s)
    keep = [c for c in pi.chains if c != hit]
    return LinComb(
        (LinearSetPartition(keep + [_splice_word(hit.word, s, c.word)]
                            + [d for d in tau.chains if d != c]), 1)
        for c in tau.chains
    )


def all_shuffles(lsp):
    """Every linear order of the ground set that restricts to each chain."""
    words = [LinearOrder()]
    for chain in lsp.chains:
        words = [w for v in words for w in shuffles(v, chain)]
    return words


def arrowpi_global(pi, tau, rhos):
    """Global composition on linear set partitions.

    ``tau`` is a list of chains of blocks of ``pi`` (each chain a list of
    blocks, outer order significant) and ``rhos`` maps each block of ``pi``
    to a linear set partition of it.  For every choice of one shuffle per
    block, each chain of blocks becomes the concatenation of the chosen
    words.
    """
    chains = [[tuple(sorted(b)) for b in chain] for chain in tau]
    used = sorted(b for chain in chains for b in chain)
    if used != sorted(pi.blocks):
        raise ValueError("tau must arrange every block of pi exactly once")
    inner = {tuple(sorted(b)): r for b, r in rhos.items()}
    if sorted(inner) != sorted(pi.blocks):
        raise ValueError("need one inner linear partition per block of pi")
    for b, r in inner.items():
        if r.ground != frozenset(b):
            raise ValueError(f"inner linear partition {r} does not live on block {list(b)}")
    terms = []
    for choice in product(*(all_shuffles(inner[b]) for b in pi.blocks)):
        chosen = dict(zip(pi.blocks, choice))
        terms.append((LinearSetPartition(sum((chosen[b].word for b in chain), ()) for chain in chains), 1))
    return LinComb(terms)


def exp_npl(x, s, y):
    """``*_S`` composed with ``*_T`` at ``s`` is ``|T|`` times ``*_{S graft T}``."""
    return LinComb.single(Star(graft(x.ground, s, y.ground)), len(y.ground))


def perm_npl(f, s, g):
    """Sum over cycles ``d`` of ``g`` of inserting ``d`` into the cycle of ``s``."""
    graft(f.ground, s, g.ground)
    hit = f.cycle_of(s)
    keep = [c for c in f.cycles if c != hit]
    out = []
    for d in g.cycles:
        others = [e for e in g.cycles if e != d]
        out.append(extend_linear(lambda c: Permutation(keep + [c] + others), cycle_npl(hit, s, d)))
    return total(out)


class ExpNpl(NplStructure):
    name = "exp"

    def basis(self, ground):
        return [Star(ground)] if ground else []

    def compose(self, x, s, y):
        return exp_npl(x, s, y)

    def parse_term(self, data):
        return Star(data)

    def format_term(self, term):
        return "{{" + ",".join(map(str, sorted(term.ground))) + "}}"


class PiSquare(NplStructure):
    """Set partitions under block replacement; nonunital operad."""

    name = "pi"
    has_unit = True

    def basis(self, ground):
        return list(set_partitions(ground)) if ground else []

    def compose(self, x, s, y):
        return LinComb.single(pi_square(x, s, y))

    def unit(self, s):
        return LinComb.single(SetPartition([[s]]))

    def parse_term(self, data):
        return SetPartition(data)


class PiNpl(PiSquare):
    name = "pi-npl"

    def compose(self, x, s, y):
        return pi_npl(x, s, y)


class ArrowPiSquare(NplStructure):
    name = "arrow-pi"
    has_unit = True

    def basis(self, ground):
        return list(linear_set_partitions(ground)) if ground else []

    def compose(self, x, s, y):
        return arrowpi_square(x, s, y)

    def unit(self, s):
        return LinComb.single(LinearSetPartition([[s]]))

    def parse_term(self, data):
        return LinearSetPartition(data)


class ArrowPiNpl(ArrowPiSquare):
    name = "arrow-pi-npl"

    def compose(self, x, s, y):
        return arrowpi_npl(x, s, y)


class PermutationNpl(NplStructure):
    name = "permutations"

    def basis(self, ground):
        return permutations_on(ground) if ground else []

    def compose(self, x, s, y):
        return perm_npl(x, s, y)

    def parse_term(self, data):
        return Permutation(data)


def to_monomial(term):
    """Read a partition-like term as a monomial over its block structures."""
    if isinstance(term, SetPartition):
        return Monomial(Star(b) for b in term.blocks)
    if isinstance(term, LinearSetPartition):
        return Monomial(term.chains)
    if isinstance(term, Permutation):
        return Monomial(term.cycles)
    if isinstance(term, Star):
        return Monomial(Star([x]) for x in term.ground)
    raise TypeError(f"no monomial reading for {type(term).__name__}")


def from_monomial(m, kind):
    """Inverse of :func:`to_monomial`; ``kind`` is the target class."""
    if kind is SetPartition:
        return SetPartition(f.ground for f in m.factors)
    if kind is LinearSetPartition:
        return LinearSetPartition(m.factors)
    if kind is Permutation:
        return Permutation(m.factors)
    if kind is Star:
        if any(len(f.ground) != 1 for f in m.factors):
            raise ValueError("only all-singleton monomials correspond to a set")
        return Star(m.ground)
    raise TypeError(f"no monomial reading for {kind.__name__}")

