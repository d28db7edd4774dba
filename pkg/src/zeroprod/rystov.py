"""Rystov numbers: the largest shortest-zero-length over mortal generator sets.

Rys(n, q) is the maximum of m(S) over mortal sets S of n x n matrices over
GF(q), where m(S) is the length of the shortest zero product. Sets are
scored blockwise with the table kernels; blocks are fixed-size and taken in
a fixed order, so results do not depend on the number of workers.

With orbit reduction only one set per orbit under simultaneous conjugation,
per-generator scaling and relabeling is scored. Scaling lets each generator
be replaced by the least code of its projective class, and a set holding two
multiples of one matrix scores the same as the set with one of them, so the
reduced enumeration runs over sets of projective classes.
"""

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from itertools import combinations, islice

import numpy as np

from . import _backend, __version__
from .ffield import FieldSpec
from .matspace import code_space, encode
from .wordsearch import check_generators, shortest_zero_product

BLOCK = 100_000
ALL_LIMIT = 16


@dataclass(frozen=True)
class RysQuery:
    n: int
    field: FieldSpec
    k_max: int = None  # None: every nonempty subset
    use_orbits: bool = False
    max_sets: int = None
    workers: int = 1
    checkpoint: str = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        S = self.field.q ** (self.n * self.n)
        if self.k_max is None:
            if S > ALL_LIMIT:
                raise ValueError(f"k_max=all needs q^(n^2) <= {ALL_LIMIT}, got {S}")
        elif self.k_max < 1:
            raise ValueError("k_max must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def key(self):
        return {"n": self.n, "q": self.field.q, "k_max": self.k_max, "orbits": self.use_orbits}


@dataclass
class RysRecord:
    n: int
    q: int
    value: int
    mode: str
    k_max: object
    witness_set: list
    witness_word: tuple
    sets_examined: int
    orbits_examined: int
    mortal_sets: int
    per_k: dict
    complete: bool
    use_orbits: bool
    elapsed: float = 0.0
    tool_version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    VOLATILE = ("elapsed", "timestamp")

    def to_dict(self, volatile=True):
        d = {
            "schema_version": 1,
            "n": self.n,
            "q": self.q,
            "value": self.value,
            "mode": self.mode,
            "k_max": "all" if self.k_max is None else self.k_max,
            "use_orbits": self.use_orbits,
            "witness_set": [M.rows() for M in self.witness_set],
            "witness_word": list(self.witness_word) if self.witness_word else None,
            "sets_examined": self.sets_examined,
            "orbits_examined": self.orbits_examined,
            "mortal_sets": self.mortal_sets,
            "per_k": {str(k): v for k, v in sorted(self.per_k.items())},
            "complete": self.complete,
            "tool_version": self.tool_version,
            "elapsed": round(self.elapsed, 3),
            "timestamp": self.timestamp,
        }
        if not volatile:
            for k in self.VOLATILE:
                d.pop(k)
        return d


# -- orbit machinery ----------------------------------------------------------

class OrbitSpace:
    """Projective classes of Mat_n(GF(q)) and the conjugation action on them."""

    def __init__(self, n, f):
        self.space = sp = code_space(n, f)
        self.class_codes = np.unique(sp.class_min).astype(np.int32)
        class_of = np.full(sp.size, -1, dtype=np.int32)
        class_of[self.class_codes] = np.arange(len(self.class_codes), dtype=np.int32)
        self.class_of = class_of[sp.class_min]
        seen = {}
        for perm in sp.conjugation_perms:
            cp = self.class_of[perm[self.class_codes]].astype(np.int32)
            seen.setdefault(cp.tobytes(), cp)
        self.perms = np.array(list(seen.values()), dtype=np.int32)

    @property
    def n_classes(self):
        return len(self.class_codes)

    def levels(self, k_max, kernels=None):
        """Canonical class-index sets of sizes 1..k_max, each level sorted."""
        kernels = kernels or _backend.kernels
        C = self.n_classes
        cur = np.unique(kernels.canon_rows(self.perms, np.arange(C, dtype=np.int32).reshape(C, 1)), axis=0)
        out = [cur]
        for _ in range(1, min(k_max, C)):
            cur = np.unique(kernels.canon_extend(self.perms, cur, C), axis=0)
            out.append(cur)
        return out


def canonical_tuple(gens):
    """Orbit representative of a generator tuple.

    Least sorted code tuple over simultaneous conjugation by GL_n, scaling of
    each generator by a nonzero scalar, and reordering.
    """
    gens = list(gens)
    n, f = check_generators(gens)
    sp = code_space(n, f)
    codes = [encode(g) for g in gens]
    cm = sp.class_min
    best = min(tuple(sorted(int(cm[perm[c]]) for c in codes)) for perm in sp.conjugation_perms)
    return tuple(sp.decode(c) for c in best)


# -- scoring ------------------------------------------------------------------

_W = {}


def _init_worker(table, singular, backend):
    _W["table"] = table
    _W["singular"] = singular
    _W["kernels"] = _backend.python if backend == "python" else _backend.kernels


def _score_rows(rows):
    return _W["kernels"].score_sets(_W["table"], _W["singular"], rows)


def _score_mask_range(lohi):
    lo, hi = lohi
    return _W["kernels"].score_masks(_W["table"], _W["singular"], lo, hi)


class _Tally:
    def __init__(self):
        self.best = 0
        self.best_key = None
        self.per_k = {}
        self.examined = 0
        self.mortal = 0
        self.blocks = 0

    def _offer(self, value, keys):
        key = min(keys)
        if value > self.best or (value == self.best and (self.best_key is None or key < self.best_key)):
            self.best, self.best_key = value, key

    def add(self, values, sizes, keys_of):
        self.examined += len(values)
        self.mortal += int(np.count_nonzero(values))
        self.blocks += 1
        if not len(values):
            return
        for k in np.unique(sizes):
            v = int(values[sizes == k].max())
            self.per_k[int(k)] = max(self.per_k.get(int(k), 0), v)
        top = int(values.max())
        if top > 0 and top >= self.best:
            self._offer(top, keys_of(np.flatnonzero(values == top)))

    def state(self):
        return {"best": self.best, "best_key": list(self.best_key) if self.best_key else None,
                "per_k": {str(k): v for k, v in self.per_k.items()}, "examined": self.examined,
                "mortal": self.mortal, "blocks": self.blocks}

    @classmethod
    def restore(cls, d):
        t = cls()
        t.best = d["best"]
        t.best_key = tuple(d["best_key"]) if d["best_key"] else None
        t.per_k = {int(k): v for k, v in d["per_k"].items()}
        t.examined, t.mortal, t.blocks = d["examined"], d["mortal"], d["blocks"]
        return t


def _row_blocks(query, sp):
    """Yield row blocks (int32, -1 padded) in enumeration order."""
    if query.use_orbits:
        osp = OrbitSpace(query.n, query.field)
        k_max = query.k_max or osp.n_classes
        width = min(k_max, osp.n_classes)
        for level in osp.levels(k_max):
            codes = osp.class_codes[level]
            for lo in range(0, len(codes), BLOCK):
                chunk = codes[lo:lo + BLOCK]
                pad = np.full((len(chunk), width), -1, dtype=np.int32)
                pad[:, :chunk.shape[1]] = chunk
                yield pad
        return
    width = query.k_max
    it = (c for r in range(1, query.k_max + 1) for c in combinations(range(sp.size), r))
    while True:
        chunk = list(islice(it, BLOCK))
        if not chunk:
            return
        pad = np.full((len(chunk), width), -1, dtype=np.int32)
        for i, c in enumerate(chunk):
            pad[i, :len(c)] = c
        yield pad


def _split(n_items, parts):
    step = -(-n_items // parts)
    return [(i, min(i + step, n_items)) for i in range(0, n_items, step)]


def _load_checkpoint(path, query):
    if not path or not os.path.exists(path):
        return None
    with open(path) as fh:
        state = json.load(fh)
    if state.get("query") != query.key:
        raise ValueError(f"checkpoint {path} belongs to a different query: {state.get('query')}")
    return _Tally.restore(state["tally"])


def _save_checkpoint(path, query, tally):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump({"query": query.key, "tally": tally.state()}, fh)
    os.replace(tmp, path)


def rys_number(query, kernels=None):
    """Evaluate Rys(n, q) over the sets described by query.

    mode is "exact" only when every nonempty subset (k_max=None) was covered.
    A bounded k_max, or a run stopped by max_sets, gives a lower bound.
    max_sets is checked between blocks, so a run may overshoot it by up to
    one block.
    """
    t0 = time.perf_counter()
    kernels = kernels or _backend.kernels
    sp = code_space(query.n, query.field)
    table, singular = sp.table, sp.singular
    tally = _load_checkpoint(query.checkpoint, query) or _Tally()
    skip = tally.blocks
    stopped = False

    pool = None
    if query.workers > 1:
        pool = ProcessPoolExecutor(query.workers, initializer=_init_worker,
                                   initargs=(table, singular, kernels.NAME))
    else:
        _init_worker(table, singular, kernels.NAME)

    def run(fn, parts):
        if pool is None:
            return [fn(x) for x in parts]
        return list(pool.map(fn, parts))

    try:
        if query.k_max is None and not query.use_orbits:
            total = (1 << sp.size) - 1
            blocks = ((lo, min(lo + BLOCK, total + 1)) for lo in range(1, total + 1, BLOCK))
            for bi, (lo, hi) in enumerate(blocks):
                if bi < skip:
                    continue
                if query.max_sets is not None and tally.examined >= query.max_sets:
                    stopped = True
                    break
                parts = [(lo + a, lo + b) for a, b in _split(hi - lo, query.workers)]
                values = np.concatenate(run(_score_mask_range, parts))
                masks = np.arange(lo, hi, dtype=np.int64)
                sizes = np.bitwise_count(masks)
                tally.add(values, sizes, lambda idx: [
                    tuple(c for c in range(sp.size) if int(masks[i]) >> c & 1) for i in idx])
                if query.checkpoint:
                    _save_checkpoint(query.checkpoint, query, tally)
        else:
            for bi, rows in enumerate(_row_blocks(query, sp)):
                if bi < skip:
                    continue
                if query.max_sets is not None and tally.examined >= query.max_sets:
                    stopped = True
                    break
                parts = [rows[a:b] for a, b in _split(len(rows), query.workers)]
                values = np.concatenate(run(_score_rows, parts))
                sizes = (rows >= 0).sum(axis=1)
                tally.add(values, sizes, lambda idx: [
                    tuple(int(x) for x in rows[i] if x >= 0) for i in idx])
                if query.checkpoint:
                    _save_checkpoint(query.checkpoint, query, tally)
    finally:
        if pool is not None:
            pool.shutdown()

    witness_set = [sp.decode(c) for c in tally.best_key] if tally.best_key else []
    witness_word = None
    if witness_set:
        res = shortest_zero_product(witness_set)
        if res.shortest_length != tally.best:
            raise AssertionError(f"witness re-check gave {res.shortest_length}, expected {tally.best}")
        witness_word = res.witness
    complete = not stopped
    per_k = {}
    running = 0
    for k in sorted(tally.per_k):
        running = max(running, tally.per_k[k])
        per_k[k] = running
    return RysRecord(
        n=query.n,
        q=query.field.q,
        value=tally.best,
        mode="exact" if (complete and query.k_max is None) else "lower_bound",
        k_max=query.k_max,
        witness_set=witness_set,
        witness_word=witness_word,
        sets_examined=tally.examined,
        orbits_examined=tally.examined if query.use_orbits else None,
        mortal_sets=tally.mortal,
        per_k=per_k,
        complete=complete,
        use_orbits=query.use_orbits,
        elapsed=time.perf_counter() - t0,
    )
