import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from faccum import _kernels_py as py
from faccum import kernels

needs_ext = pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")

CASES = [
    ("occupancy_distinct", lambda n, N: (n, N, 4)),
    ("occupancy_indistinct", lambda n, N: (n, N, 4)),
    ("occupancy_coloured", lambda n, N: (n, N, max(1, -(-n // N)) + 1, 4)),
    ("occupancy_forest", lambda n, N: (n, N, 4)),
    ("occupancy_negmulti", lambda n, N: (n, N, 0.6 / N, 4)),
    ("occupancy_dirichlet", lambda n, N: (n, N, 0.7, 1.9, 4)),
]


def test_splitmix_reference_values():
    # first outputs of SplitMix64 started from state 0
    assert py.mix64(py.GOLDEN) == 0xE220A8397B1DCDAF
    assert py.mix64(2 * py.GOLDEN % 2**64) == 0x6E789E6AA1B965F4
    assert py.mix64(3 * py.GOLDEN % 2**64) == 0x06C45D188009454F


def test_stream_blocks_match_scalar_recurrence():
    st_ = py.Stream(99, 7)
    state = py.rep_state(99, 7)
    for _ in range(5000):
        state = (state + py.GOLDEN) % 2**64
        assert st_.uniform() == (py.mix64(state) >> 11) * 2.0**-53


def test_uniforms_are_uniform():
    u = kernels.uniforms(5, 0, 200000)
    assert u.min() >= 0 and u.max() < 1
    assert abs(u.mean() - 0.5) < 0.003
    assert abs((u < 0.25).mean() - 0.25) < 0.003


@needs_ext
@pytest.mark.parametrize("name, extra", CASES)
@given(n=st.integers(1, 25), N=st.integers(1, 12), seed=st.integers(0, 2**64 - 1), rep0=st.integers(0, 10**6))
def test_backends_agree_bit_for_bit(name, extra, n, N, seed, rep0):
    args = (seed, rep0, 6) + extra(n, N)
    co1 = np.zeros((6, N), np.int64)
    co2 = np.zeros((6, N), np.int64)
    h1 = getattr(kernels.compiled, name)(*args, counts_out=co1)
    h2 = getattr(py, name)(*args, counts_out=co2)
    assert np.array_equal(h1, h2) and np.array_equal(co1, co2)


@needs_ext
def test_backends_agree_on_streams_and_inversion():
    assert np.array_equal(kernels.compiled.uniforms(3, 11, 10000), py.uniforms(3, 11, 10000))
    cdf = np.cumsum(np.full(7, 1 / 7))
    assert np.array_equal(kernels.compiled.inverse_cdf(8, 0, 3000, cdf), py.inverse_cdf(8, 0, 3000, cdf))


@pytest.mark.parametrize("name, extra", CASES)
def test_histograms_are_consistent(name, extra):
    n, N = 9, 5
    co = np.zeros((50, N), np.int64)
    h = getattr(kernels, name)(1, 0, 50, *extra(n, N), counts_out=co)
    assert h.shape == (50, 5)
    # every box is counted once in hist[0] or at its own count
    for i in range(50):
        want = np.bincount(co[i], minlength=5)[:5]
        assert np.array_equal(h[i], want)
    if name in ("occupancy_distinct", "occupancy_indistinct", "occupancy_coloured", "occupancy_forest"):
        assert (co.sum(axis=1) == n).all()


@pytest.mark.parametrize("name, extra", CASES)
def test_replicates_do_not_depend_on_chunking(name, extra):
    args = extra(7, 4)
    whole = getattr(kernels, name)(42, 0, 40, *args)
    parts = np.vstack([getattr(kernels, name)(42, 0, 13, *args), getattr(kernels, name)(42, 13, 27, *args)])
    assert np.array_equal(whole, parts)
    assert not np.array_equal(whole, getattr(kernels, name)(43, 0, 40, *args))


def test_input_validation():
    with pytest.raises(ValueError):
        kernels.occupancy_coloured(0, 0, 1, 10, 2, 3, 2)
    with pytest.raises(ValueError):
        kernels.occupancy_negmulti(0, 0, 1, 3, 4, 0.25, 2)
    with pytest.raises(ValueError):
        kernels.occupancy_dirichlet(0, 0, 1, 3, 4, 0.0, 1.0, 2)
    with pytest.raises(ValueError):
        kernels.occupancy_distinct(0, 0, 2, 3, 4, 2, counts_out=np.zeros((2, 3), np.int64))


def test_pure_backend_can_be_forced():
    env = dict(os.environ, FACCUM_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "import faccum.kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
    assert kernels.BACKEND in ("cython", "python")
