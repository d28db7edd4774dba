"""Exhaustive checks of the 2x2 zero-product statements.

Each verifier enumerates every case, collects violations, and re-checks each
reported violation with plain matrix arithmetic before returning it.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import _backend
from .ffield import field_from_q
from .matspace import code_space, mat_mul
from .wordsearch import check_minimal_word_shape_2x2, search_codes, word_product

MAX_REPORT = 100
DEFAULT_LEMMA_Q = 3


@dataclass
class VerificationReport:
    statement: str
    q: int
    cases_checked: int
    counterexamples: list
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.counterexamples

    def to_dict(self, volatile=True):
        d = {
            "statement": self.statement,
            "q": self.q,
            "passed": self.passed,
            "cases_checked": self.cases_checked,
            "counterexamples": self.counterexamples,
            "details": self.details,
        }
        if volatile:
            d["elapsed"] = round(self.elapsed, 3)
        return d


_LEMMA_MODES = {"or": 0, "and": 1, "left": 2}


def _lemma_holds(mode, AB, BC):
    if mode == "or":
        return AB.is_zero() or BC.is_zero()
    if mode == "and":
        return AB.is_zero() and BC.is_zero()
    return AB.is_zero()


def _scan_worker(args):
    table, bmask, cmask, mode, backend = args
    kernels = _backend.python if backend == "python" else _backend.kernels
    return kernels.lemma_scan(table, bmask, cmask, mode, MAX_REPORT)


def verify_lemma_abc(q, conclusion="or", invertible_c=False, large=False, workers=1, kernels=None):
    """All (A, B, C) in Mat_2(GF(q))^3 with B singular and ABC = 0.

    conclusion "or" checks AB = 0 or BC = 0. "and" is a deliberately wrong
    strengthening (AB = 0 and BC = 0) used to show the harness can fail;
    "left" checks AB = 0 and is meant for invertible_c=True, which limits C
    to invertible matrices. q > 3 needs large=True.
    """
    if q > DEFAULT_LEMMA_Q and not large:
        raise ValueError(f"q={q} lemma exhaustion is opt-in; pass large=True")
    t0 = time.perf_counter()
    kernels = kernels or _backend.kernels
    f = field_from_q(q)
    sp = code_space(2, f)
    bmask = sp.singular.copy()
    cmask = (1 - sp.singular).astype(np.uint8) if invertible_c else np.ones(sp.size, dtype=np.uint8)
    mode = _LEMMA_MODES[conclusion]
    # split on B so workers see disjoint slices; results are merged in B order
    bs = np.flatnonzero(bmask)
    parts = np.array_split(bs, max(1, min(workers, len(bs))))
    jobs = []
    for part in parts:
        m = np.zeros(sp.size, dtype=np.uint8)
        m[part] = 1
        jobs.append((sp.table, m, cmask, mode, kernels.NAME))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_scan_worker, jobs))
    else:
        results = [_scan_worker(j) for j in jobs]
    cases = sum(r[0] for r in results)
    premise = sum(r[1] for r in results)
    violations = sum(r[2] for r in results)
    # parts are ascending slices of B, so concatenation reproduces one sequential scan
    found = [t for r in results for t in r[3]][:MAX_REPORT]

    counterexamples = []
    for a, b, c in found:
        A, B, C = sp.decode(a), sp.decode(b), sp.decode(c)
        AB, BC = mat_mul(A, B), mat_mul(B, C)
        if not mat_mul(AB, C).is_zero() or _lemma_holds(conclusion, AB, BC):
            raise AssertionError(f"kernel reported a non-violation {(a, b, c)}")
        counterexamples.append({"A": A.rows(), "B": B.rows(), "C": C.rows()})
    name = "lemma_abc" if not invertible_c else "lemma_abc_invertible_c"
    if conclusion != "or":
        name += f"[{conclusion}]"
    return VerificationReport(
        statement=name, q=q, cases_checked=cases, counterexamples=counterexamples,
        elapsed=time.perf_counter() - t0,
        details={"premise_holds": premise, "violations": violations,
                 "singular_B": int(bmask.sum()), "C_domain": int(cmask.sum())},
    )


def _is_pattern(word):
    return len(word) >= 2 and word[0] == 0 and word[-1] == 0 and all(x == 1 for x in word[1:-1])


def verify_corollary(q, kernels=None):
    """Pairs (A, B) with B invertible: a mortal pair has a unique minimal zero word A B^m A.

    A = O is reported in its own bucket (minimal word [0]) and not judged.
    A pair passes when its minimal zero word is unique and has the form
    A B^m A; details count the two properties separately.
    """
    if q > 3:
        raise ValueError("corollary exhaustion supports q in {2, 3}")
    t0 = time.perf_counter()
    f = field_from_q(q)
    sp = code_space(2, f)
    cases = 0
    mortal = 0
    degenerate = 0
    m_hist = {}
    form_ok = word_unique = 0
    counterexamples = []
    for b in sp.invertible_codes:
        for a in range(sp.size):
            cases += 1
            res = search_codes(sp, [a, b], count_minimal=True, stop_at_zero=True, kernels=kernels)
            if not res.mortal:
                continue
            if a == 0:
                degenerate += 1
                continue
            mortal += 1
            pattern, unique = _is_pattern(res.witness), res.minimal_word_count == 1
            form_ok += pattern
            word_unique += unique
            if pattern and unique:
                m = len(res.witness) - 2
                m_hist[m] = m_hist.get(m, 0) + 1
                continue
            A, B = sp.decode(a), sp.decode(b)
            if not word_product([A, B], res.witness).is_zero():
                raise AssertionError("search witness does not multiply to zero")
            counterexamples.append({"A": A.rows(), "B": B.rows(), "witness": list(res.witness),
                                    "count": res.minimal_word_count})
    return VerificationReport(
        statement="corollary_abba", q=q, cases_checked=cases, counterexamples=counterexamples,
        elapsed=time.perf_counter() - t0,
        details={"mortal_pairs": mortal, "degenerate_A_zero": degenerate,
                 "witness_is_ABmA": form_ok, "unique_minimal_word": word_unique,
                 "m_histogram": {str(k): v for k, v in sorted(m_hist.items())}},
    )


def verify_minimal_shape(q, k_max=2, kernels=None):
    """Every mortal set of size <= k_max: its search witness has singular ends, invertible interior."""
    t0 = time.perf_counter()
    f = field_from_q(q)
    sp = code_space(2, f)
    cases = 0
    mortal = 0
    counterexamples = []
    for r in range(1, k_max + 1):
        for combo in combinations(range(sp.size), r):
            cases += 1
            res = search_codes(sp, combo, stop_at_zero=True, kernels=kernels)
            if not res.mortal:
                continue
            mortal += 1
            gens = [sp.decode(c) for c in combo]
            if not check_minimal_word_shape_2x2(gens, res.witness):
                if not word_product(gens, res.witness).is_zero():
                    raise AssertionError("search witness does not multiply to zero")
                counterexamples.append({"generators": [g.rows() for g in gens],
                                        "witness": list(res.witness)})
    return VerificationReport(
        statement="minimal_word_shape", q=q, cases_checked=cases, counterexamples=counterexamples,
        elapsed=time.perf_counter() - t0, details={"k_max": k_max, "mortal_sets": mortal},
    )
