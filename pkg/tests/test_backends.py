"""The numba kernels and the numpy fallback must be interchangeable."""
import numpy as np
import pytest

import oracle
from dxprobe import backend
from dxprobe.factors import Factor, product, reduce_state, sum_out
from dxprobe.inference import posterior

pytestmark = pytest.mark.skipif(not backend.HAS_NUMBA, reason="numba not installed")


@pytest.fixture
def restore_backend():
    before = backend.active_backend()
    yield
    backend.set_backend(before)


def random_factor(rng, axes, cards):
    return Factor(tuple(axes), rng.random(tuple(cards)))


@pytest.mark.parametrize("seed", range(10))
def test_product_and_sum_out_agree(seed, restore_backend):
    rng = np.random.default_rng(6000 + seed)
    n_axes = int(rng.integers(1, 5))
    axes = sorted(rng.choice(10, size=n_axes, replace=False).tolist())
    cards = {a: int(rng.integers(2, 5)) for a in axes}
    other_axes = sorted(rng.choice(10, size=int(rng.integers(1, 5)), replace=False).tolist())
    for a in other_axes:
        cards.setdefault(a, int(rng.integers(2, 5)))
    fa_ = random_factor(rng, axes, [cards[a] for a in axes])
    fb_ = random_factor(rng, other_axes, [cards[a] for a in other_axes])

    results = {}
    for name in (backend.NUMPY, backend.NUMBA):
        backend.set_backend(name)
        prod = product(fa_, fb_)
        marg = sum_out(prod, prod.axes[0])
        results[name] = (prod, marg)
    for attr in (0, 1):
        a, b = results[backend.NUMPY][attr], results[backend.NUMBA][attr]
        assert a.axes == b.axes
        np.testing.assert_allclose(a.values, b.values, atol=1e-14)


@pytest.mark.parametrize("seed", range(10))
def test_fused_bucket_matches_compose(seed, restore_backend):
    from dxprobe.factors import bucket_sum_out, product_all

    rng = np.random.default_rng(6500 + seed)
    all_axes = list(range(6))
    cards = {a: int(rng.integers(2, 5)) for a in all_axes}
    fs = []
    for _ in range(int(rng.integers(1, 5))):
        axes = sorted(rng.choice(all_axes, size=int(rng.integers(1, 4)), replace=False).tolist())
        fs.append(random_factor(rng, axes, [cards[a] for a in axes]))
    var = int(fs[0].axes[0])

    backend.set_backend(backend.NUMPY)
    composed = sum_out(product_all(fs), var)
    backend.set_backend(backend.NUMBA)
    fused = bucket_sum_out(fs, var)
    assert fused.axes == composed.axes
    np.testing.assert_allclose(fused.values, composed.values, rtol=1e-13, atol=1e-13)


def test_reduce_state_is_backend_free(restore_backend):
    rng = np.random.default_rng(1)
    f = random_factor(rng, (0, 1), (3, 2))
    for name in (backend.NUMPY, backend.NUMBA):
        backend.set_backend(name)
        r = reduce_state(f, 0, 2)
        np.testing.assert_array_equal(r.values, f.values[2])


@pytest.mark.parametrize("seed", range(8))
def test_posteriors_identical_across_backends(seed, restore_backend):
    rng = np.random.default_rng(7000 + seed)
    net = oracle.random_network(rng, n_vars=int(rng.integers(4, 11)), max_card=3)
    evidence = oracle.random_evidence(rng, net)
    query = str(rng.choice([v for v in net.variable_ids if v not in evidence.hard]))
    out = {}
    for name in (backend.NUMPY, backend.NUMBA):
        backend.set_backend(name)
        out[name] = posterior(net, query, evidence).probabilities
    np.testing.assert_allclose(out[backend.NUMPY], out[backend.NUMBA], atol=1e-14)


def test_env_flag_selection(monkeypatch):
    from dxprobe.backend import _initial_backend

    monkeypatch.setenv("DXPROBE_BACKEND", "numpy")
    assert _initial_backend() == backend.NUMPY
    monkeypatch.setenv("DXPROBE_BACKEND", "numba")
    assert _initial_backend() == backend.NUMBA
    monkeypatch.setenv("DXPROBE_BACKEND", "fortran")
    with pytest.raises(ValueError):
        _initial_backend()


def test_set_backend_rejects_unknown():
    with pytest.raises(ValueError):
        backend.set_backend("graphcore")
