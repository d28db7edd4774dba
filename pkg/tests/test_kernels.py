"""Compiled and pure-Python kernels must agree on every entry point."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zeroprod import _backend
from zeroprod.ffield import field_from_q, make_field
from zeroprod.matspace import code_space
from zeroprod.rystov import OrbitSpace

compiled = _backend.compiled
python = _backend.python
needs_ext = pytest.mark.skipif(compiled is None, reason="extension not built")


def test_selection():
    assert _backend.NAME in ("cython", "python")
    assert python in _backend.available()


def generic_args(codes_rows, n, f):
    packed = np.array(codes_rows, dtype=np.uint64)
    e, l, z = f.kernel_tables()
    return packed, n, f.p, f.q, e, l, z


@needs_ext
@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 8, 9, 11]), st.data())
def test_bfs_generic_parity(q, data):
    f = field_from_q(q)
    k = data.draw(st.integers(1, 3))
    gens = [[data.draw(st.integers(0, q - 1)) for _ in range(4)] for _ in range(k)]
    args = generic_args(gens, 2, f)
    for stop in (False, True):
        a = compiled.bfs_generic(*args, 10**6, 10**6, True, stop, True)
        b = python.bfs_generic(*args, 10**6, 10**6, True, stop, True)
        assert a[:7] == b[:7] or (list(a[:7]) == list(b[:7]))
        assert sorted(map(tuple, a[7].tolist())) == sorted(map(tuple, b[7].tolist()))


@needs_ext
def test_bfs_generic_large_prime():
    p = 2**64 - 59
    f = make_field(p)
    gens = [[1, 0, 0, 0], [1, 1, 1, 0]]
    args = generic_args(gens, 2, f)
    a = compiled.bfs_generic(*args, 40, 10**5, False, False, False)
    b = python.bfs_generic(*args, 40, 10**5, False, False, False)
    assert a[:7] == b[:7]


@needs_ext
@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 80), min_size=1, max_size=4), st.booleans())
def test_bfs_table_parity(codes, stop):
    sp = code_space(2, make_field(3))
    g = np.array(codes, dtype=np.int32)
    a = compiled.bfs_table(sp.table, g, sp.size, True, stop)
    b = python.bfs_table(sp.table, g, sp.size, True, stop)
    assert tuple(a) == tuple(b)


@needs_ext
def test_score_parity():
    sp = code_space(2, make_field(2))
    a = compiled.score_masks(sp.table, sp.singular, 1, 1 << 16)
    b = python.score_masks(sp.table, sp.singular, 1, 1 << 16)
    assert np.array_equal(a, b)
    rng = np.random.default_rng(7)
    sp3 = code_space(2, make_field(3))
    rows = np.sort(rng.choice(81, size=(500, 3)), axis=1).astype(np.int32)
    rows[::3, 2] = -1
    assert np.array_equal(compiled.score_sets(sp3.table, sp3.singular, rows),
                          python.score_sets(sp3.table, sp3.singular, rows))


@needs_ext
@pytest.mark.parametrize("mode", [0, 1, 2])
def test_lemma_scan_parity(mode):
    sp = code_space(2, make_field(2))
    cm = np.ones(sp.size, dtype=np.uint8)
    a = compiled.lemma_scan(sp.table, sp.singular.copy(), cm, mode, 50)
    b = python.lemma_scan(sp.table, sp.singular.copy(), cm, mode, 50)
    assert a == b


@needs_ext
def test_canon_parity():
    osp = OrbitSpace(2, make_field(3))
    C = osp.n_classes
    rows = np.arange(C, dtype=np.int32).reshape(C, 1)
    a = compiled.canon_rows(osp.perms, rows)
    assert np.array_equal(a, python.canon_rows(osp.perms, rows))
    reps = np.unique(a, axis=0)
    assert np.array_equal(np.unique(compiled.canon_extend(osp.perms, reps, C), axis=0),
                          np.unique(python.canon_extend(osp.perms, reps, C), axis=0))


def test_budget_status():
    f = make_field(11)
    args = generic_args([[1, 0, 0, 0], [1, 1, 1, 0]], 2, f)
    for k in _backend.available():
        assert k.bfs_generic(*args, 100, 10, False, False, False)[0] == 1
