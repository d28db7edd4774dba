"""Shortest zero products by breadth-first search over product values.

States are the distinct matrices reachable as products; the generators sit
at depth 1 and depth d holds the products first reachable by a word of
length d. The zero matrix at depth d means the shortest zero word has length
d. Generators are expanded in ascending index order and the first discovery
of a state wins, so the reconstructed witness is the lexicographically least
minimal zero word.
"""

from dataclasses import dataclass

import numpy as np

from . import _backend
from .matspace import Matrix, encode, is_invertible, mat_mul

DEFAULT_MAX_STATES = 20_000_000
_LEN_CAP = 1 << 62


class BudgetExceeded(RuntimeError):
    """The search needed more distinct states than its memory budget allows."""


@dataclass(frozen=True)
class SearchResult:
    mortal: bool
    shortest_length: int = None
    witness: tuple = None
    semigroup_size: int = 0
    minimal_word_count: int = None
    truncated: bool = False

    def to_dict(self):
        return {
            "mortal": self.mortal,
            "shortest_length": self.shortest_length,
            "witness": list(self.witness) if self.witness is not None else None,
            "semigroup_size": self.semigroup_size,
            "minimal_word_count": self.minimal_word_count,
            "truncated": self.truncated,
        }


def check_generators(gens):
    """Return (n, field) shared by all generators, or raise ValueError."""
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    n, f = gens[0].n, gens[0].field
    for i, g in enumerate(gens):
        if not isinstance(g, Matrix):
            raise TypeError(f"generator {i} is not a Matrix")
        if g.n != n or g.field != f:
            raise ValueError(f"generator {i} is {g.n}x{g.n} over {g.field}, expected {n}x{n} over {f}")
    return n, f


def word_product(gens, word):
    """Left-to-right product of the generators named by word."""
    if not word:
        raise ValueError("words have length >= 1")
    M = gens[word[0]]
    for i in word[1:]:
        M = mat_mul(M, gens[i])
    return M


def _run_generic(kernels, gens, n, f, max_len, max_states, want_count, stop_at_zero, want_states):
    packed = np.array([g.entries for g in gens], dtype=np.uint64)
    exp_t, log_t, zech_t = f.kernel_tables()
    out = kernels.bfs_generic(packed, n, f.p, f.q, exp_t, log_t, zech_t, max_len, max_states,
                              want_count, stop_at_zero, want_states)
    if out[0] == 1:
        raise BudgetExceeded(f"more than {max_states} distinct products; raise max_states to continue")
    return out


def _default_max_len(n, f):
    return min(f.q ** (n * n), _LEN_CAP)


def shortest_zero_product(gens, max_len=None, count_minimal=False,
                          max_states=DEFAULT_MAX_STATES, kernels=None):
    """Shortest word over gens whose product is the zero matrix.

    The search runs to closure (or to max_len, default q^(n^2)) so that
    semigroup_size is the number of distinct products. A search cut off by
    max_len before closing is marked truncated; a zero found before the cut
    is still exact.
    """
    gens = list(gens)
    n, f = check_generators(gens)
    kernels = kernels or _backend.kernels
    if max_len is None:
        max_len = _default_max_len(n, f)
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    _, depth, witness, size, count, truncated, overflow, _ = _run_generic(
        kernels, gens, n, f, min(max_len, _LEN_CAP), max_states, count_minimal, False, False)
    if overflow:
        # exact big-integer count from the Python kernels
        count = _run_generic(_backend.python, gens, n, f, min(max_len, _LEN_CAP), max_states,
                             True, False, False)[4]
    mortal = depth > 0
    return SearchResult(
        mortal=mortal,
        shortest_length=depth if mortal else None,
        witness=tuple(witness) if mortal else None,
        semigroup_size=size,
        minimal_word_count=count if (count_minimal and mortal) else None,
        truncated=bool(truncated),
    )


def count_minimal_zero_words(gens, **kwargs):
    """Number of distinct words of minimal length with zero product."""
    res = shortest_zero_product(gens, count_minimal=True, **kwargs)
    if not res.mortal:
        raise ValueError("generator set is not mortal")
    return res.minimal_word_count


def enumerate_semigroup(gens, max_states=DEFAULT_MAX_STATES, kernels=None):
    """Codes of every product of the generators."""
    gens = list(gens)
    n, f = check_generators(gens)
    states = _run_generic(kernels or _backend.kernels, gens, n, f, _default_max_len(n, f),
                          max_states, False, False, True)[7]
    if f.q ** (n * n) <= _LEN_CAP:
        w = np.array([f.q**i for i in range(n * n)], dtype=np.int64)
        return frozenset(int(c) for c in states.astype(np.int64) @ w)
    return frozenset(encode(Matrix(n, f, tuple(int(x) for x in row))) for row in states)


def check_minimal_word_shape_2x2(gens, word):
    """First and last letters singular, every interior letter invertible."""
    if not word:
        raise ValueError("empty word")
    if gens[word[0]].n != 2:
        raise ValueError("shape check is specific to 2x2 matrices")
    if is_invertible(gens[word[0]]) or is_invertible(gens[word[-1]]):
        return False
    return all(is_invertible(gens[i]) for i in word[1:-1])


def search_codes(space, gen_codes, count_minimal=False, stop_at_zero=False, kernels=None):
    """Table-driven search on a CodeSpace with generators given as codes."""
    kernels = kernels or _backend.kernels
    gen_codes = np.asarray(gen_codes, dtype=np.int32)
    depth, witness, size, count, truncated, overflow = kernels.bfs_table(
        space.table, gen_codes, space.size, count_minimal, stop_at_zero)
    if overflow:
        count = _backend.python.bfs_table(space.table, gen_codes, space.size, True, stop_at_zero)[3]
    mortal = depth > 0
    return SearchResult(
        mortal=mortal,
        shortest_length=depth if mortal else None,
        witness=tuple(witness) if mortal else None,
        semigroup_size=size,
        minimal_word_count=count if (count_minimal and mortal) else None,
        truncated=bool(truncated),
    )
