import random

import pytest
from hypothesis import given, settings, strategies as st

from gfcech import (GradedModule, PolyRing, PrimeField, check_power_stability, is_filter_regular,
                    is_unconditioned, synthesize_generators)
from gfcech.cech import same_ideal
from gfcech.filter_regular import SynthesisError

from oracles import in_ideal_span, terms_of


def test_regular_sequence_passes(free_xy, qxy):
    R, (x, y) = qxy
    rep = is_filter_regular([x, y], free_xy)
    assert rep.verdict and rep.status == "filter-regular"
    assert rep.witness is None
    # for a regular sequence each colon is just the prefix ideal times M
    assert rep.steps[0].colon_gens == []
    assert [str(g.component(0)) for g in rep.steps[1].colon_gens] == ["x"]


def test_axes_fail_with_witness(node, qxy):
    R, (x, y) = qxy
    rep = is_filter_regular([x, y], node, [x, y])
    assert not rep.verdict and rep.status == "not-filter-regular"
    i, w = rep.witness
    assert i == 0
    wy = terms_of(w.component(0))
    # witness is killed by x modulo (xy) but is nonzero in M (and the saturation of 0 is 0)
    assert in_ideal_span(terms_of(x * w.component(0)), [terms_of(x * y)], R.weights)
    assert not in_ideal_span(wy, [terms_of(x * y)], R.weights)
    assert str(w.component(0)) == "y"


def test_diagonal_sequence_passes(node, qxy):
    R, (x, y) = qxy
    assert is_filter_regular([x + y, x - y], node, [x, y]).verdict


def test_precondition_failure(free_xy, qxy):
    R, (x, y) = qxy
    rep = is_filter_regular([x, y ** 2 + x * y], free_xy, [x])
    assert rep.status == "precondition-failed"
    assert [str(g) for g in rep.precondition_failures] == [str(y ** 2 + x * y)]
    assert not rep.verdict


def test_inhomogeneous_rejected(free_xy, qxy):
    R, (x, y) = qxy
    with pytest.raises(ValueError):
        is_filter_regular([x + y ** 2], free_xy)


def test_unconditioned_examples(node, qxy):
    R, (x, y) = qxy
    bad = is_unconditioned([x + y, x], node, [x, y])
    assert not bad.verdict
    assert [str(g) for g in bad.failing_order] == ["x", "x + y"]
    good = is_unconditioned([x + y, x - y], node, [x, y])
    assert good.verdict and good.orders_checked == 2


def test_zero_module_always_passes(qxy):
    R, (x, y) = qxy
    Z = GradedModule.zero(R)
    assert is_unconditioned([x, y, x + y], Z, [x, y]).verdict


def test_refuses_long_sequences(free_xy, qxy):
    R, (x, y) = qxy
    with pytest.raises(ValueError, match="at most 6"):
        is_unconditioned([x, y] * 4, free_xy)


def test_power_stability_examples(free_xy, node, qxy):
    R, (x, y) = qxy
    assert check_power_stability([x, y], (2, 3), free_xy) == (True, True)
    assert check_power_stability([x, y], (2, 2), node, [x, y]) == (False, False)
    assert check_power_stability([x + y, x - y], (1, 1), node, [x, y]) == (True, True)
    with pytest.raises(ValueError):
        check_power_stability([x, y], (0, 1), free_xy)


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6))
def test_power_stability_property_mod_p(seed):
    rng = random.Random(seed)
    F = PrimeField(101)
    R = PolyRing("xy", field=F)
    x, y = R.gens()
    rel = rng.choice([x * y, x ** 2, y ** 2 - x * y, x ** 2 * y, x * (x + y)])
    M = GradedModule.cyclic(R, [rel])
    seq = rng.choice([[x, y], [y, x], [x + y, x - y], [x + 2 * y, y]])
    t = [rng.randint(1, 3) for _ in seq]
    plain, powered = check_power_stability(seq, t, M, [x, y])
    assert plain == powered


@settings(max_examples=20)
@given(st.integers(1, 100), st.integers(1, 100))
def test_unit_scalars_do_not_change_verdict(a, b):
    R = PolyRing("xy")
    x, y = R.gens()
    M = GradedModule.cyclic(R, [x * y])
    for seq in ([x, y], [x + y, x - y]):
        base = is_filter_regular(seq, M, [x, y]).verdict
        assert is_filter_regular([a * seq[0], -b * seq[1]], M, [x, y]).verdict == base


def test_synthesis_on_node(node, qxy):
    R, (x, y) = qxy
    res = synthesize_generators([x, y], node, max_trials=20, seed=0)
    assert res.ok and res.ideal_equal
    assert is_unconditioned(res.sequence, node, [x, y]).verdict
    assert same_ideal(res.sequence, [x, y], R)
    again = synthesize_generators([x, y], node, max_trials=20, seed=0)
    assert [str(g) for g in again.sequence] == [str(g) for g in res.sequence]
    assert again.trials == res.trials


def test_synthesis_keeps_good_generators(free_xy, node, qxy):
    R, (x, y) = qxy
    res = synthesize_generators([x, y], free_xy)
    assert list(res.sequence) == [x, y] and res.trials == 2
    res = synthesize_generators([x + y, x - y], node)
    assert list(res.sequence) == [x + y, x - y]


def test_synthesis_failure_and_bad_budget(qxy):
    R, (x, y) = qxy
    # over F_2, the only degree-one perturbations of x are x and x + y, both zero divisors on
    # A/(x(x+y)y); y is required later but nothing works for the first slot
    F = PrimeField(2)
    S = PolyRing("xy", field=F)
    u, v = S.gens()
    M = GradedModule.cyclic(S, [u * v * (u + v)])
    with pytest.raises(SynthesisError) as err:
        synthesize_generators([u, v], M, max_trials=5, seed=1)
    assert err.value.last_report is not None
    with pytest.raises(ValueError):
        synthesize_generators([x, y], GradedModule.free(R), max_trials=0)
