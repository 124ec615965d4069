"""The numba and numpy kernels must agree bit for bit."""

import numpy as np
import pytest

from apgroups import kernels
from apgroups.field_core import build_context, subgroup

pytestmark = pytest.mark.skipif(not kernels.HAS_NUMBA, reason="numba not installed")

NB, NP = kernels.NUMBA_KERNELS, kernels.NUMPY_KERNELS


@pytest.mark.parametrize("p,g", [(7, 3), (101, 2), (1009, 11), (65537, 3)])
def test_dlog_table(p, g):
    assert np.array_equal(NB["dlog_table"](p, g), NP["dlog_table"](p, g))


@pytest.mark.parametrize("p,d,r", [(7, 6, 2), (101, 20, 3), (1009, 252, 2), (1009, 1008, 5)])
def test_progression_mask_and_aps(p, d, r):
    G = subgroup(build_context(p), d)
    assert np.array_equal(
        NB["progression_mask"](G.membership, p, r), NP["progression_mask"](G.membership, p, r)
    )
    assert NB["count_aps"](G.membership, G.elements, p, r) == NP["count_aps"](G.membership, G.elements, p, r)


def test_count_aps_empty_set():
    member = np.zeros(11, dtype=np.bool_)
    empty = np.zeros(0, dtype=np.int64)
    assert NB["count_aps"](member, empty, 11, 2) == NP["count_aps"](member, empty, 11, 2) == 0


@pytest.mark.parametrize(
    "L,b",
    [
        ([[1, 0], [0, 1], [1, 1]], [0, 0, 0]),
        ([[2, -3], [-1, 1], [3, 2], [1, -2]], [5, 17, 0, 100]),
        ([[1, 2, 3], [-1, 0, 2]], [3, 4]),
    ],
)
def test_linear_forms_count(L, b):
    G = subgroup(build_context(101), 50)
    L, b = np.array(L, dtype=np.int64), np.array(b, dtype=np.int64)
    assert NB["linear_forms_count"](G.membership, L, b, 101) == NP["linear_forms_count"](G.membership, L, b, 101)


@pytest.mark.parametrize("p,r", [(7, 2), (101, 4), (1009, 3)])
def test_tuple_log_gcd(p, r):
    ctx = build_context(p)
    assert np.array_equal(NB["tuple_log_gcd"](ctx.dlog, p, r), NP["tuple_log_gcd"](ctx.dlog, p, r))


def test_backend_name():
    assert kernels.BACKEND in ("numba", "numpy")
