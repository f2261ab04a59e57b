import random

import pytest
from hypothesis import given, settings, strategies as st

from gfcech import FreeVector, GradedModule, GroebnerLimitError, PolyRing, PrimeField, Submodule, colon, saturate
from gfcech.groebner import buchberger, colon_ideal

from oracles import (colon_dim_oracle, dense_rank, ideal_span_dim, in_ideal_span, module_span_rows,
                     terms_of)


def span_dims(gens, weights, top):
    return [ideal_span_dim([terms_of(g) for g in gens], weights, d) for d in range(top + 1)]


def test_basis_of_x_and_x_plus_y(qxy):
    R, (x, y) = qxy
    N = Submodule.ideal(R, [x, x + y])
    gb = [g.component(0) for g in N.groebner_basis]
    assert sorted(map(str, gb)) == ["x", "y"]
    assert span_dims(gb, R.weights, 3) == span_dims([x, y], R.weights, 3)


def test_zero_ideal_has_empty_basis(qxy):
    R, _ = qxy
    assert Submodule.ideal(R, [0]).groebner_basis == ()
    assert Submodule.ideal(R, []).is_zero()


def test_monomial_generators_keep_their_leading_terms(qxy):
    R, (x, y) = qxy
    N = Submodule.ideal(R, [x ** 2 * y, x * y ** 2])
    leads = {lt for lt in N.leading_terms()}
    assert leads == {(0, (2, 1)), (0, (1, 2))}
    lead_polys = [R.monomial(e) for _, e in leads]
    assert span_dims(lead_polys, R.weights, 5) == span_dims([x ** 2 * y, x * y ** 2], R.weights, 5)


def test_membership_examples(qxy):
    R, (x, y) = qxy
    ok, cof = Submodule.ideal(R, [x]).membership(x ** 2)
    assert ok and cof == [x]
    N = Submodule.ideal(R, [x, x + y])
    ok, cof = N.membership(y)
    assert ok and N.combine(cof).component(0) == y
    assert not Submodule.ideal(R, [x ** 2, y ** 2]).contains(x * y)
    assert not in_ideal_span(terms_of(x * y), [terms_of(x ** 2), terms_of(y ** 2)], R.weights)


def test_membership_witness_on_larger_element(qxy):
    R, (x, y) = qxy
    N = Submodule.ideal(R, [x ** 2, y ** 2])
    f = x ** 3 * y + x * y ** 3
    ok, cof = N.membership(f)
    assert ok and cof == [x * y, x * y]
    assert N.combine(cof).component(0) == f


def test_rank_mismatch_rejected(qxy):
    R, (x, y) = qxy
    N = Submodule(R, (0, 0), [FreeVector.from_components(R, [x, y])])
    with pytest.raises(ValueError):
        N.contains(x)
    with pytest.raises(ValueError):
        N.contains(FreeVector.from_components(R, [x, y, x]))


def test_colon_examples(qxy, node):
    R, (x, y) = qxy
    Q = colon(Submodule.ideal(R, [x * y]), x)
    assert Q.same_as(Submodule.ideal(R, [y]))
    gens = [terms_of(g.component(0)) for g in Q.gens]
    for d in range(5):
        assert ideal_span_dim(gens, R.weights, d) == colon_dim_oracle([terms_of(x * y)], terms_of(x), R.weights, d)
    N = Submodule.ideal(R, [x ** 2, x * y + y ** 2])
    assert colon(N, R.one()).same_as(N)
    zero = node.submodule([])
    assert node.colon(zero, x).same_as(Submodule.ideal(R, [y]))


def test_saturation_examples(qxy, node):
    R, (x, y) = qxy
    sat, k = saturate(Submodule.ideal(R, [x ** 2 * y]), [x])
    assert sat.same_as(Submodule.ideal(R, [y])) and k == 2
    # two colon iterations, each checked against the oracle
    one = colon(Submodule.ideal(R, [x ** 2 * y]), x)
    assert [g.component(0) for g in one.groebner_basis] == [x * y]
    again, _ = saturate(sat, [x])
    assert again.same_as(sat)
    s0, _ = node.saturate(node.submodule([]), [x, y])
    assert s0.same_as(node.relation_module)


def test_syzygy_examples(qxy):
    R, (x, y) = qxy
    Z = Submodule.ideal(R, [x, y]).syzygies()
    assert [z.components() for z in Z.gens] == [[y, -x]]
    assert Submodule.ideal(R, [x ** 2 + y ** 2]).syzygies().is_zero()
    Z = Submodule.ideal(R, [x ** 2, x * y]).syzygies()
    assert [z.components() for z in Z.gens] == [[y, -x]]
    # kernel dimension of (a, b) -> a x^2 + b x y in each degree, by linear algebra
    for d in range(3, 7):
        src = [(i, m) for i in range(2) for m in [(a, d - 2 - a) for a in range(d - 1)]]
        images = []
        basis = [(a, d - a) for a in range(d + 1)]
        for i, (a, b) in src:
            row = [0] * len(basis)
            e = (a + 2, b) if i == 0 else (a + 1, b + 1)
            row[basis.index(e)] = 1
            images.append(row)
        kernel = len(src) - dense_rank(images)
        assert kernel == d - 2
        Zd = module_span_rows([[terms_of(c) for c in z.components()] for z in Z.gens], Z.shifts, R.weights, d)[1]
        assert dense_rank(Zd) == kernel


def test_pair_limit_raises():
    R = PolyRing("xyz")
    x, y, z = R.gens()
    gens = [x ** 3 + y ** 2 * z, x * y ** 2 + z ** 3, y ** 3 + x * z ** 2]
    with pytest.raises(GroebnerLimitError):
        buchberger([Submodule.ideal(R, [g]).gens[0].terms for g in gens], R, (0,), pair_limit=1)


def test_module_over_quotient_ring():
    R = PolyRing("xy", ideal=["x*y"])
    x, y = R.gens()
    M = GradedModule.free(R)
    assert M.relation_module.contains(M.vector([x * y]))
    assert [M.dim(d) for d in range(4)] == [1, 2, 2, 2]


# ---------------------------------------------------------------------------
# properties on random small ideals


def random_form(R, d, rng, p=None):
    from gfcech.polynomials import monomials_of_degree
    terms = {}
    for m in monomials_of_degree(R.weights, d):
        if rng.random() < 0.5:
            terms[m] = rng.randint(-3, 3)
    return R.from_terms(terms)


ideal_cases = st.tuples(st.integers(0, 10 ** 6), st.integers(1, 3))


def make_case(seed, ngens, field=None):
    rng = random.Random(seed)
    R = PolyRing("xyz") if field is None else PolyRing("xyz", field=field)
    gens = [g for g in (random_form(R, rng.randint(1, 3), rng) for _ in range(ngens)) if g]
    return R, gens, rng


@settings(max_examples=40)
@given(ideal_cases)
def test_normal_form_properties(case):
    R, gens, rng = make_case(*case)
    N = Submodule.ideal(R, gens)
    for g in gens:
        assert N.contains(g)
    for _ in range(3):
        v = random_form(R, rng.randint(1, 4), rng)
        nf = N.normal_form(v)
        assert N.normal_form(nf) == nf
        ok, cof = N.membership(v - nf.component(0))
        assert ok and N.combine(cof).component(0) == v - nf.component(0)
        assert N.contains(v) == in_ideal_span(terms_of(v), [terms_of(g) for g in gens], R.weights)


@settings(max_examples=30)
@given(ideal_cases)
def test_basis_spans_the_same_ideal(case):
    R, gens, _ = make_case(*case)
    N = Submodule.ideal(R, gens)
    gb = [g.component(0) for g in N.groebner_basis]
    assert span_dims(gb, R.weights, 4) == span_dims(gens, R.weights, 4)


@settings(max_examples=25)
@given(ideal_cases)
def test_colon_and_saturation_properties(case):
    R, gens, rng = make_case(*case)
    x, y, z = R.gens()
    N = Submodule.ideal(R, gens)
    f = random_form(R, 1, rng) or x
    Q = colon(N, f)
    assert Q.contains_submodule(N)
    assert all(N.contains(f * g.component(0)) for g in Q.gens)
    sat, k = saturate(N, [x, y])
    assert sat.contains_submodule(N)
    again, _ = saturate(sat, [x, y])
    assert again.same_as(sat)
    powers = [x ** k, y ** k] if k else [R.one()]
    assert all(N.contains(p * g.component(0)) for p in powers for g in sat.gens)
    both = colon_ideal(N, [x, y])
    assert all(N.contains(h * g.component(0)) for h in (x, y) for g in both.gens)


@settings(max_examples=25)
@given(ideal_cases)
def test_syzygies_evaluate_to_zero(case):
    R, gens, _ = make_case(*case, field=PrimeField(101))
    N = Submodule.ideal(R, gens)
    for s in N.syzygies().gens:
        total = R.zero()
        for c, g in zip(s.components(), gens):
            total = total + c * g
        assert not total
