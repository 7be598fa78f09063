import itertools
import os
import random
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hk import _kernels
from hk.lattice import parse_lattice
from helpers import random_even_lattice

needs_numba = pytest.mark.skipif(not _kernels._HAVE_NUMBA, reason="numba not installed")


def _brute(gram, target, bound, div):
    G = np.array(gram, dtype=np.int64)
    out = []
    for v in itertools.product(range(-bound, bound + 1), repeat=len(G)):
        v = np.array(v)
        if not v.any() or v @ G @ v != target:
            continue
        if div and np.gcd.reduce(np.abs(G @ v)) != div:
            continue
        out.append(tuple(int(x) for x in v))
    return sorted(out)


def test_value_order():
    assert list(_kernels.value_order(2)) == [0, 1, -1, 2, -2]


@pytest.mark.parametrize("use_numba", [False, pytest.param(True, marks=needs_numba)])
@pytest.mark.parametrize("target, div", [(-2, 0), (0, 0), (-4, 0), (-4, 2)])
def test_search_matches_brute_force(use_numba, target, div):
    G = parse_lattice("U(2)+<-2>").gram
    got = _kernels.search_vectors(G, target, 2, div, 10**6, use_numba)
    assert sorted(tuple(int(x) for x in r) for r in got) == _brute(G, target, 2, div)


def test_first_hit_prefers_early_coordinates():
    hit = _kernels.search_vectors(parse_lattice("<-2>+U").gram, -2, 2, 0, 1, False)
    assert tuple(hit[0]) == (1, 0, 0)


@needs_numba
@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([-6, -4, -2, 0, 2, 4]))
def test_numba_equals_numpy_random(seed, target):
    r = random.Random(seed)
    G = random_even_lattice(r, r.randint(1, 5)).gram
    a = _kernels.search_vectors(G, target, 2, 0, 1000, False)
    b = _kernels.search_vectors(G, target, 2, 0, 1000, True)
    assert np.array_equal(a, b)


@needs_numba
@pytest.mark.parametrize("k", range(9))
def test_minus_one_backends_agree(k):
    a = _kernels.minus_one_classes(k, (0, 7), (-2, 4), False)
    b = _kernels.minus_one_classes(k, (0, 7), (-2, 4), True)
    assert np.array_equal(a, b)


def test_env_var_disables_numba():
    code = "from hk import _kernels; print(_kernels.USE_NUMBA)"
    env = dict(os.environ, HK_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
