from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from nplop.axioms import minimal_counterexample
from nplop.combinatorics import Star
from nplop.operads import ComPlus
from nplop.polymap import (
    EndOperad,
    MonomialMap,
    Poly,
    PolymapNpl,
    PolynomialMap,
    check_palgebra_morphism,
    coordinatewise_product,
    end_compose,
    npl_partial,
    parse_variable,
    partial_evaluate,
    prelie,
)

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def sym(v):
    s, i = v
    return sympy.Symbol(f"x_{s}_{i}")


def to_sympy(p):
    expr = sympy.Integer(0)
    for mono, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, e in mono:
            term *= sym(v) ** e
        expr += term
    return sympy.expand(expr)


@st.composite
def polys(draw, slots, dim, degree=2, max_terms=4):
    variables = [(s, i) for s in slots for i in range(1, dim + 1)]
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        picks = draw(st.lists(st.sampled_from(variables), max_size=degree))
        mono = {}
        for v in picks:
            mono[v] = mono.get(v, 0) + 1
        terms[tuple(sorted(mono.items()))] = draw(small)
    return Poly(terms)


@st.composite
def maps(draw, slots, dim, degree=2):
    return PolynomialMap(slots, dim, [draw(polys(slots, dim, degree)) for _ in range(dim)])


def sym_components(f):
    return [to_sympy(p) for p in f.components]


class TestPoly:
    @given(polys([1, 2], 2), polys([1, 2], 2))
    def test_ring_operations_match_oracle(self, p, q):
        assert to_sympy(p + q) == sympy.expand(to_sympy(p) + to_sympy(q))
        assert to_sympy(p * q) == sympy.expand(to_sympy(p) * to_sympy(q))
        assert to_sympy(p - q) == sympy.expand(to_sympy(p) - to_sympy(q))

    @given(polys([1, 2], 2, degree=3), st.sampled_from([(1, 1), (1, 2), (2, 1), (2, 2)]))
    def test_derivative_matches_oracle(self, p, v):
        assert to_sympy(p.diff(v)) == sympy.diff(to_sympy(p), sym(v))

    @given(polys([1], 2), st.sampled_from([(1, 1), (1, 2)]),
           st.lists(small, min_size=2, max_size=2), st.fractions(min_value=Fraction(1, 8), max_value=2))
    def test_central_difference_is_exact_on_quadratics(self, p, v, x, h):
        point = {(1, 1): x[0], (1, 2): x[1]}
        up, down = dict(point), dict(point)
        up[v] += h
        down[v] -= h
        assert (p.evaluate(up) - p.evaluate(down)) / (2 * h) == p.diff(v).evaluate(point)

    @given(polys([1, 2], 2))
    def test_json_round_trip(self, p):
        assert Poly.from_json(p.to_json()) == p

    def test_rendering(self):
        p = Poly.var((1, 1)) ** 2 * 3 - Poly.var((2, 1))
        assert str(p) == "-x2_1 + 3*x1_1^2"

    def test_variable_names(self):
        assert parse_variable("3.2") == (3, 2)
        assert parse_variable("b.1") == ("b", 1)
        with pytest.raises(ValueError):
            parse_variable("3")


def identity_field(slot, dim=1):
    return PolynomialMap.identity(slot, dim)


def monomial_map(slots, dim, *parts):
    """``parts`` are (out, {variable: exponent}, coeff) triples."""
    comps = [dict() for _ in range(dim)]
    for out, exps, c in parts:
        comps[out - 1][tuple(sorted(exps.items()))] = c
    return PolynomialMap(slots, dim, [Poly(c) for c in comps])


class TestPrelie:
    def test_constant_target_vanishes(self):
        f = monomial_map([1], 2, (1, {(1, 1): 2}, 1))
        g = monomial_map([1], 2, (1, {}, 5), (2, {}, -1))
        assert prelie(f, g) == PolynomialMap.zero([1], 2)

    def test_identity_field_scales_by_degree(self):
        g = monomial_map([1], 1, (1, {(1, 1): 3}, 1))
        assert prelie(identity_field(1), g) == g * 3

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 3).flatmap(lambda d: st.tuples(st.just(d), maps([1], d), maps([1], d))))
    def test_matches_oracle(self, args):
        d, f, g = args
        got = sym_components(prelie(f, g))
        F, G = sym_components(f), sym_components(g)
        for j in range(d):
            expected = sum(F[i] * sympy.diff(G[j], sym((1, i + 1))) for i in range(d))
            assert got[j] == sympy.expand(expected)


def literal_npl(g, b, f):
    """Oracle: average over k of the field g(., w_k) acting on f in slot k."""
    d = g.dim
    F, G = sym_components(f), sym_components(g)
    out = [sympy.Integer(0)] * d
    for k in sorted(f.slots):
        swap = {sym((b, i)): sym((k, i)) for i in range(1, d + 1)}
        field = [gi.xreplace(swap) for gi in G]
        for j in range(d):
            out[j] += sum(field[i] * sympy.diff(F[j], sym((k, i + 1))) for i in range(d))
    return [sympy.expand(c / len(f.slots)) for c in out]


class TestNplPartial:
    def test_worked_example(self):
        f = monomial_map([1], 1, (1, {(1, 1): 2}, 1))
        got = npl_partial(identity_field("b"), "b", f)
        assert got == monomial_map([1], 1, (1, {(1, 1): 2}, 2))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 2).flatmap(lambda d: st.tuples(st.just(d), maps([1, 2], d), maps([3, 4], d))))
    def test_matches_oracle(self, args):
        d, g, f = args
        assert sym_components(npl_partial(g, 1, f)) == literal_npl(g, 1, f)

    def test_sum_variant_drops_the_average(self):
        g = monomial_map([1], 1, (1, {(1, 1): 1}, 1))
        f = monomial_map([2, 3], 1, (1, {(2, 1): 1, (3, 1): 1}, 1))
        assert npl_partial(g, 1, f, average=False) == npl_partial(g, 1, f) * 2

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            npl_partial(identity_field(1, 1), 1, identity_field(2, 2))


class TestEndCompose:
    def test_worked_example(self):
        g = monomial_map([1, 2], 1, (1, {(1, 1): 1, (2, 1): 1}, 1))
        f = monomial_map([3], 1, (1, {(3, 1): 1}, 2))
        assert end_compose(g, 2, f) == monomial_map([1, 3], 1, (1, {(1, 1): 1, (3, 1): 1}, 2))

    def test_needs_multilinear(self):
        g = monomial_map([1], 1, (1, {(1, 1): 2}, 1))
        with pytest.raises(ValueError):
            end_compose(g, 1, identity_field(2))

    @pytest.mark.parametrize("dim", [1, 2])
    def test_matches_substitution_oracle(self, dim):
        E = EndOperad(dim)
        for x in E.basis([1, 2]):
            for y in E.basis([3, 4]):
                got = sym_components(end_compose(x.as_map(dim), 2, y.as_map(dim)))
                Y = sym_components(y.as_map(dim))
                subs = {sym((2, i + 1)): Y[i] for i in range(dim)}
                assert got == [sympy.expand(c.xreplace(subs)) for c in sym_components(x.as_map(dim))]

    def test_agrees_with_npl_partial_in_dimension_one(self):
        E = EndOperad(1)
        for a, b in [(1, 1), (1, 2), (2, 1), (2, 2)]:
            S, T = range(1, a + 1), range(a + 1, a + b + 1)
            for x in E.basis(S):
                for y in E.basis(T):
                    for s in S:
                        assert end_compose(x.as_map(1), s, y.as_map(1)) == npl_partial(x.as_map(1), s, y.as_map(1))


class TestPartialEvaluate:
    def test_fix_one_slot(self):
        f = monomial_map([1, 2], 1, (1, {(1, 1): 1, (2, 1): 1}, 1))
        assert partial_evaluate(f, {1: [3]}) == monomial_map([2], 1, (1, {(2, 1): 1}, 3))

    def test_fix_nothing(self):
        f = monomial_map([1, 2], 1, (1, {(1, 1): 1, (2, 1): 1}, 1))
        assert partial_evaluate(f, {}) == f

    def test_fix_everything(self):
        f = monomial_map([1, 2], 1, (1, {(1, 1): 1, (2, 1): 1}, 1))
        got = partial_evaluate(f, {1: [2], 2: [5]})
        assert got.slots == frozenset()
        assert got.components[0] == 10

    def test_unknown_slot(self):
        with pytest.raises(ValueError):
            partial_evaluate(identity_field(1), {2: [1]})


class TestMaps:
    @given(maps([1, 2], 2))
    def test_json_round_trip(self, f):
        assert PolynomialMap.from_json(f.to_json()) == f

    @given(maps([1, 2], 2))
    def test_basis_decomposition(self, f):
        assert PolynomialMap.from_lincomb(f.to_lincomb(), f.slots, f.dim) == f

    def test_basis_map(self):
        m = MonomialMap([1, 2], 2, [((1, 1), 1), ((2, 2), 1)])
        assert str(m) == "x1_1*x2_2 e2"
        assert m.relabel({1: 5, 2: 6}) == MonomialMap([5, 6], 2, [((5, 1), 1), ((6, 2), 1)])

    def test_multilinear(self):
        assert monomial_map([1, 2], 1, (1, {(1, 1): 1, (2, 1): 1}, 1)).is_multilinear()
        assert not monomial_map([1, 2], 1, (1, {(1, 1): 2}, 1)).is_multilinear()

    def test_evaluate(self):
        f = monomial_map([1], 2, (1, {(1, 1): 1, (1, 2): 1}, 1), (2, {}, 4))
        assert f.evaluate({1: [2, 3]}) == (6, 4)

    def test_basis_sizes(self):
        # Monomials of degree <= 2 in 2 variables: 1 + 2 + 3, times 1 output.
        assert len(PolymapNpl(dim=1, degree=2).basis([1, 2])) == 6
        assert len(EndOperad(dim=2).basis([1, 2])) == 2 * 4


def swapped_at_min(dim):
    def psi(term):
        f = coordinatewise_product(term, dim)
        m = min(term.ground)
        return PolynomialMap(f.slots, dim, [p.rename({(m, 1): (m, 2), (m, 2): (m, 1)}) for p in f.components])
    return psi


class TestMorphism:
    def test_inclusion_in_dimension_one(self):
        report = check_palgebra_morphism(EndOperad(1), lambda t: t.as_map(1), 1, max_size=3)
        assert report.passed and report.instances > 0

    def test_zero_map(self):
        report = check_palgebra_morphism(EndOperad(2), lambda t: PolynomialMap.zero(t.ground, 2), 2, max_size=3)
        assert report.passed

    def test_commutative_representation(self):
        report = check_palgebra_morphism(ComPlus(), lambda t: coordinatewise_product(t, 2), 2, max_size=4)
        assert report.passed

    def test_non_equivariant_relabelling_fails(self):
        report = check_palgebra_morphism(ComPlus(), swapped_at_min(2), 2, max_size=3)
        assert not report.passed
        assert any("sigma" in f.inputs for f in report.failures)
        w = minimal_counterexample(report)
        assert w.difference != 0

    def test_inclusion_in_dimension_two_fails(self):
        report = check_palgebra_morphism(EndOperad(2), lambda t: t.as_map(2), 2, max_size=3)
        assert not report.passed
        w = minimal_counterexample(report)
        assert w.sizes == (1, 1)
        assert w.inputs["x"] == MonomialMap([1], 1, [((1, 1), 1)])
        assert w.inputs["y"] == MonomialMap([2], 2, [((2, 1), 1)])
        assert w.lhs == 0

    def test_star_maps_to_product(self):
        f = coordinatewise_product(Star([1, 2]), 2)
        assert f.evaluate({1: [2, 3], 2: [5, 7]}) == (10, 21)
