import itertools
import os
import subprocess
import sys

import numpy as np
import pytest

from segalwick import _backend, _pykernels
from helpers import brute_force_tables

try:
    from segalwick import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = [pytest.param(_pykernels, id="python"),
            pytest.param(_ckernels, id="cython",
                         marks=pytest.mark.skipif(_ckernels is None, reason="extension not built"))]


@pytest.mark.parametrize("k", BACKENDS)
def test_enumerate_small_cases(k):
    assert k.enumerate_tables((1, 1), (1, 1)) == [(0, 1, 1, 0), (1, 0, 0, 1)]
    assert k.enumerate_tables((0, 0), (0, 0)) == [(0, 0, 0, 0)]
    assert k.enumerate_tables((2,), (1, 1)) == [(1, 1)]
    assert k.enumerate_tables((2,), (1, 2)) == []


@pytest.mark.parametrize("k", BACKENDS)
def test_enumerate_matches_brute_force(k):
    for m, n in itertools.product((1, 2, 3), repeat=2):
        for rs in itertools.product(range(3), repeat=m):
            for cs in itertools.product(range(3), repeat=n):
                if sum(rs) != sum(cs):
                    assert k.enumerate_tables(rs, cs) == []
                    continue
                got = k.enumerate_tables(rs, cs)
                want = sorted(tuple(v for row in g for v in row) for g in brute_force_tables(rs, cs))
                assert got == want


@pytest.mark.skipif(_ckernels is None, reason="extension not built")
def test_backends_agree_on_larger_margins():
    for rs, cs in [((3, 2, 1, 0), (2, 2, 2)), ((4, 2), (1, 1, 1, 3)), ((6, 0, 3), (3, 3, 3))]:
        assert _ckernels.enumerate_tables(rs, cs) == _pykernels.enumerate_tables(rs, cs)


@pytest.mark.parametrize("k", BACKENDS)
def test_min_kernel_form_matches_double_sum(k):
    rng = np.random.default_rng(3)
    s = np.sort(rng.random(40))
    a, b = rng.normal(size=40), rng.normal(size=40)
    direct = sum(a[i] * b[j] * min(s[i], s[j]) for i in range(40) for j in range(40))
    assert k.min_kernel_form(a, b, s) == pytest.approx(direct, rel=1e-12, abs=1e-12)


@pytest.mark.skipif(_ckernels is None, reason="extension not built")
def test_min_kernel_backends_bitwise_equal():
    rng = np.random.default_rng(7)
    s = np.sort(rng.random(1000))
    a, b = rng.normal(size=1000), rng.normal(size=1000)
    assert _ckernels.min_kernel_form(a, b, s) == _pykernels.min_kernel_form(list(a), list(b), list(s))


def test_backend_selected():
    forced = os.environ.get("SEGALWICK_PURE_PYTHON", "") not in ("", "0")
    expected = "cython" if _ckernels is not None and not forced else "python"
    assert _backend.BACKEND == expected


def test_environment_forces_fallback():
    env = dict(os.environ, SEGALWICK_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import segalwick; print(segalwick.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
