"""Finite labelled sets and the combinatorial structures built on them.

Every structure here is an immutable value in canonical form, so structural
equality is value equality and terms can be used as dictionary keys.  Labels
are any mutually comparable hashable atoms; the library itself uses small
integers.
"""

from itertools import permutations as _permutations
from itertools import product as _product

from .linear import LinComb


def finset(labels):
    """Return ``labels`` as a frozenset, rejecting duplicates."""
    labels = list(labels)
    result = frozenset(labels)
    if len(result) != len(labels):
        raise ValueError(f"duplicate labels in {labels!r}")
    return result


def graft(S, s, T):
    """The ground set ``(S - {s}) | T`` of a partial composition at ``s``."""
    S = frozenset(S)
    T = frozenset(T)
    if s not in S:
        raise ValueError(f"composition point {s!r} is not in {sorted(S)!r}")
    rest = S - {s}
    if rest & T:
        raise ValueError(f"grafting {sorted(T)!r} at {s!r} overlaps {sorted(rest & T)!r}")
    return rest | T


def check_bijection(sigma, source):
    """Validate that the mapping ``sigma`` is a bijection defined on ``source``."""
    source = frozenset(source)
    missing = source - sigma.keys()
    if missing:
        raise ValueError(f"relabelling undefined on {sorted(missing)!r}")
    image = [sigma[x] for x in source]
    if len(set(image)) != len(image):
        raise ValueError("relabelling is not injective")


class Star:
    """The unique structure on a nonempty set (exponential species)."""

    __slots__ = ("ground",)

    def __init__(self, ground):
        ground = finset(ground)
        if not ground:
            raise ValueError("Star needs a nonempty ground set")
        self.ground = ground

    def relabel(self, sigma):
        check_bijection(sigma, self.ground)
        return Star(sigma[x] for x in self.ground)

    def sort_key(self):
        return tuple(sorted(self.ground))

    def to_json(self):
        return sorted(self.ground)

    def __eq__(self, other):
        return isinstance(other, Star) and self.ground == other.ground

    def __hash__(self):
        return hash(("Star", self.ground))

    def __repr__(self):
        return f"Star({sorted(self.ground)!r})"

    def __str__(self):
        return "*{" + ",".join(map(str, sorted(self.ground))) + "}"


class LinearOrder:
    """A duplicate-free word; the empty word is allowed."""

    __slots__ = ("word", "ground")

    def __init__(self, word=()):
        word = tuple(word)
        self.ground = finset(word)
        self.word = word

    def __len__(self):
        return len(self.word)

    def __iter__(self):
        return iter(self.word)

    def restrict(self, S):
        """The subword on the letters of ``S``."""
        S = frozenset(S)
        return LinearOrder(x for x in self.word if x in S)

    def splice(self, s, other):
        """Replace the letter ``s`` by the word ``other``."""
        i = self.word.index(s)
        return LinearOrder(self.word[:i] + other.word + self.word[i + 1:])

    def relabel(self, sigma):
        check_bijection(sigma, self.ground)
        return LinearOrder(sigma[x] for x in self.word)

    def sort_key(self):
        return self.word

    def to_json(self):
        return list(self.word)

    def __eq__(self, other):
        return isinstance(other, LinearOrder) and self.word == other.word

    def __hash__(self):
        return hash(("LinearOrder", self.word))

    def __repr__(self):
        return f"LinearOrder({list(self.word)!r})"

    def __str__(self):
        return "|".join(map(str, self.word)) if self.word else "()"


def shuffles(first, second):
    """All shuffles of two words on disjoint letters.

    Shuffles are generated by preferring the next letter of ``first``; the
    output is duplicate-free and has binomial length.
    """
    a, b = first.word, second.word
    if first.ground & second.ground:
        raise ValueError("cannot shuffle words sharing letters")
    out = []

    def rec(i, j, prefix):
        if i == len(a):
            out.append(LinearOrder(prefix + b[j:]))
            return
        if j == len(b):
            out.append(LinearOrder(prefix + a[i:]))
            return
        rec(i + 1, j, prefix + (a[i],))
        rec(i, j + 1, prefix + (b[j],))

    rec(0, 0, ())
    return out


def _min_rotation(seq):
    i = seq.index(min(seq))
    return seq[i:] + seq[:i]


class Cycle:
    """A cyclic permutation stored with its minimum label first."""

    __slots__ = ("rotation", "ground")

    def __init__(self, seq):
        seq = tuple(seq)
        if not seq:
            raise ValueError("a cycle needs a nonempty ground set")
        self.ground = finset(seq)
        self.rotation = _min_rotation(seq)

    def __len__(self):
        return len(self.rotation)

    def __call__(self, i):
        k = self.rotation.index(i)
        return self.rotation[(k + 1) % len(self.rotation)]

    def run_from(self, i):
        """The orbit ``i, c(i), ..., c^{n-1}(i)`` as a tuple."""
        k = self.rotation.index(i)
        return self.rotation[k:] + self.rotation[:k]

    def relabel(self, sigma):
        check_bijection(sigma, self.ground)
        return Cycle(sigma[x] for x in self.rotation)

    def sort_key(self):
        return self.rotation

    def to_json(self):
        return list(self.rotation)

    def __eq__(self, other):
        return isinstance(other, Cycle) and self.rotation == other.rotation

    def __hash__(self):
        return hash(("Cycle", self.rotation))

    def __repr__(self):
        return f"Cycle({list(self.rotation)!r})"

    def __str__(self):
        return "(" + " ".join(map(str, self.rotation)) + ")"


def cycle_lin(c):
    """Sum of the linear orders reading ``c`` from each starting point."""
    return LinComb((LinearOrder(c.run_from(i)), 1) for i in c.rotation)


def cycle_cyc(word):
    """Close a nonempty linear order into a cycle."""
    return Cycle(word.word)


def _canonical_blocks(blocks):
    blocks = [tuple(sorted(b)) for b in blocks]
    if any(not b for b in blocks):
        raise ValueError("partition blocks must be nonempty")
    seen = set()
    for b in blocks:
        for x in b:
            if x in seen:
                raise ValueError(f"label {x!r} appears in two blocks")
            seen.add(x)
    return tuple(sorted(blocks))


class SetPartition:
    """A partition of a finite set into nonempty blocks."""

    __slots__ = ("blocks", "ground")

    def __init__(self, blocks):
        blocks = _canonical_blocks(blocks)
        self.blocks = blocks
        self.ground = frozenset(x for b in blocks for x in b)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def block_of(self, x):
        for b in self.blocks:
            if x in b:
                return b
        raise KeyError(x)

    def relabel(self, sigma):
        check_bijection(sigma, self.ground)
        return SetPartition([sigma[x] for x in b] for b in self.blocks)

    def sort_key(self):
        return self.blocks

    def to_json(self):
        return [list(b) for b in self.blocks]

    def __eq__(self, other):
        return isinstance(other, SetPartition) and self.blocks == other.blocks

    def __hash__(self):
        return hash(("SetPartition", self.blocks))

    def __repr__(self):
        return f"SetPartition({[list(b) for b in self.blocks]!r})"

    def __str__(self):
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def finest_partition(ground):
    """All singletons; the bottom of the refinement order."""
    return SetPartition([x] for x in ground)


def coarsest_partition(ground):
    """One block; the top of the refinement order (needs a nonempty set)."""
    return SetPartition([list(ground)])


def refines(rho, pi):
    """True when every block of ``rho`` lies inside a block of ``pi``."""
    if rho.ground != pi.ground:
        return False
    owner = {x: b for b in pi.blocks for x in b}
    return all(len({owner[x] for x in b}) == 1 for b in rho.blocks)


def induced_partition(pi, tau):
    """Merge the blocks of ``pi`` grouped together by ``tau``.

    ``tau`` is a collection of groups, each group a collection of blocks of
    ``pi``; the groups must cover every block exactly once.
    """
    groups = [[tuple(sorted(b)) for b in g] for g in tau]
    used = sorted(b for g in groups for b in g)
    if used != sorted(pi.blocks):
        raise ValueError("tau must partition the blocks of pi")
    return SetPartition([x for b in g for x in b] for g in groups)


def canonical_surjection(rho, pi):
    """Map each block of ``rho`` to the block of ``pi`` containing it."""
    if not refines(rho, pi):
        raise ValueError("rho does not refine pi")
    owner = {x: b for b in pi.blocks for x in b}
    return {b: owner[b[0]] for b in rho.blocks}


def sections(rho, pi):
    """All sections of the canonical surjection ``rho -> pi``.

    Each section maps a block of ``pi`` to one of the ``rho``-blocks inside it.
    Sections are listed lexicographically in canonical block order.
    """
    g = canonical_surjection(rho, pi)
    fibers = [[c for c in rho.blocks if g[c] == p] for p in pi.blocks]
    return [dict(zip(pi.blocks, choice)) for choice in _product(*fibers)]


def set_partitions(ground):
    """Enumerate every partition of ``ground`` in a deterministic order."""
    elems = sorted(ground)
    if not elems:
        yield SetPartition([])
        return

    def rec(i, blocks):
        if i == len(elems):
            yield SetPartition(blocks)
            return
        x = elems[i]
        for k in range(len(blocks)):
            blocks[k].append(x)
            yield from rec(i + 1, blocks)
            blocks[k].pop()
        blocks.append([x])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(0, [])


def linear_orders(ground):
    return [LinearOrder(p) for p in _permutations(sorted(ground))]


def cycles_on(ground):
    elems = sorted(ground)
    if not elems:
        return []
    return [Cycle((elems[0],) + p) for p in _permutations(elems[1:])]


class LinearSetPartition:
    """A set partition with a linear order on each block."""

    __slots__ = ("chains", "ground")

    def __init__(self, chains):
        chains = [c if isinstance(c, LinearOrder) else LinearOrder(c) for c in chains]
        if any(not c.word for c in chains):
            raise ValueError("chains must be nonempty")
        partition = SetPartition(c.word for c in chains)
        self.chains = tuple(sorted(chains, key=lambda c: min(c.word)))
        self.ground = partition.ground

    def __len__(self):
        return len(self.chains)

    def __iter__(self):
        return iter(self.chains)

    def chain_of(self, x):
        for c in self.chains:
            if x in c.ground:
                return c
        raise KeyError(x)

    def partition(self):
        return SetPartition(c.word for c in self.chains)

    def relabel(self, sigma):
        check_bijection(sigma, self.ground)
        return LinearSetPartition(c.relabel(sigma) for c in self.chains)

    def sort_key(self):
        return tuple(c.word for c in self.chains)

    def to_json(self):
        return [list(c.word) for c in self.chains]

    def __eq__(self, other):
        return isinstance(other, LinearSetPartition) and self.chains == other.chains

    def __hash__(self):
        return hash(("LinearSetPartition", self.chains))

    def __repr__(self):
        return f"LinearSetPartition({self.to_json()!r})"

    def __str__(self):
        return "{" + ", ".join(str(c) for c in self.chains) + "}"


def linear_set_partitions(ground):
    for pi in set_partitions(ground):
        for words in _product(*(list(_permutations(b)) for b in pi.blocks)):
            yield LinearSetPartition(words)


class Permutation:
    """A bijection of a finite set, kept as its disjoint cycles."""

    __slots__ = ("cycles", "ground")

    def __init__(self, cycles):
        cycles = [c if isinstance(c, Cycle) else Cycle(c) for c in cycles]
        partition = SetPartition(c.rotation for c in cycles)
        self.cycles = tuple(sorted(cycles, key=lambda c: c.rotation[0]))
        self.ground = partition.ground

    @classmethod
    def from_mapping(cls, mapping):
        """Build from a dict ``i -> f(i)`` that is a bijection of its keys."""
        if set(mapping.values()) != set(mapping):
            raise ValueError("mapping is not a permutation of its domain")
        seen, cycles = set(), []
        for start in sorted(mapping):
            if start in seen:
                continue
            orbit, x = [], start
            while x not in seen:
                seen.add(x)
                orbit.append(x)
                x = mapping[x]
            cycles.append(orbit)
        return cls(cycles)

    def __call__(self, i):
        return self.cycle_of(i)(i)

    def cycle_of(self, x):
        for c in self.cycles:
            if x in c.ground:
                return c
        raise KeyError(x)

    def relabel(self, sigma):
        check_bijection(sigma, self.ground)
        return Permutation(c.relabel(sigma) for c in self.cycles)

    def sort_key(self):
        return tuple(c.rotation for c in self.cycles)

    def to_json(self):
        return [list(c.rotation) for c in self.cycles]

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.cycles == other.cycles

    def __hash__(self):
        return hash(("Permutation", self.cycles))

    def __repr__(self):
        return f"Permutation({self.to_json()!r})"

    def __str__(self):
        return "".join(str(c) for c in self.cycles)


def permutations_on(ground):
    elems = sorted(ground)
    return [Permutation.from_mapping(dict(zip(elems, p))) for p in _permutations(elems)]
