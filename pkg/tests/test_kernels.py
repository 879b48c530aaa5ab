import numpy as np
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from thompoly import kernels

mats = st.integers(1, 6).flatmap(lambda w: st.tuples(
    arrays(np.int64, st.tuples(st.integers(0, 8), st.just(w)), elements=st.integers(0, 4)),
    arrays(np.int64, st.tuples(st.integers(0, 8), st.just(w)), elements=st.integers(0, 4))))


def _both(name, *args):
    fast = kernels._K[name](*args)
    ref = kernels.NUMPY_KERNELS[name](*args)
    return np.asarray(fast), np.asarray(ref)


@settings(max_examples=40, deadline=None, derandomize=True)
@given(mats)
def test_divisibility_backends_agree(pair):
    gens, points = pair
    fast, ref = _both("divisible_by_any", gens, points)
    assert fast.tolist() == ref.tolist()
    brute = [any((g <= p).all() for g in gens) for p in points]
    assert ref.tolist() == brute


@settings(max_examples=40, deadline=None, derandomize=True)
@given(mats)
def test_minimal_mask_backends_agree(pair):
    exps, _ = pair
    fast, ref = _both("minimal_mask", exps)
    assert fast.tolist() == ref.tolist()
    kept = exps[ref]
    # every row is a multiple of a kept row, and no kept row divides another
    assert all(any((k <= e).all() for k in kept) for e in exps)
    assert not any(i != j and (a <= b).all() for i, a in enumerate(kept) for j, b in enumerate(kept))


@settings(max_examples=40, deadline=None, derandomize=True)
@given(mats, st.data())
def test_chart_maps_agree(pair, data):
    exps, other = pair
    w = exps.shape[1]
    cluster = sorted(data.draw(st.sets(st.integers(0, w - 1), min_size=1)))
    chart = data.draw(st.sampled_from(cluster))
    fast, ref = _both("chart_map", exps, chart, cluster)
    assert fast.tolist() == ref.tolist()
    mono = np.zeros(w, dtype=np.int64)
    fast, ref = _both("monomial_chart_map", exps, mono + 1, cluster)
    assert fast.tolist() == ref.tolist()
    assert (ref[:, cluster].sum() >= exps[:, cluster].sum())


def test_chart_map_example():
    # t^1 b33^2 under b33 -> b33 * t, chart t: exponent of t picks up the b33 exponent
    e = np.array([[1, 2]], dtype=np.int64)
    assert kernels.chart_map(e, 0, [0, 1]).tolist() == [[3, 2]]


def test_monomial_chart_map_example():
    # x -> x * y^2 z on the row x^1 y^0 z^0
    e = np.array([[1, 0, 0]], dtype=np.int64)
    assert kernels.monomial_chart_map(e, [0, 2, 1], [0]).tolist() == [[1, 2, 1]]


def test_backend_reported():
    assert kernels.BACKEND in ("numba", "numpy")
