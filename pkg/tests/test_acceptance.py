"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

All results are exact integers and are compared by equality. Run directly
(python3 tests/test_acceptance.py) or through pytest.
"""

import itertools
import json
import random
import sys
import time
from contextlib import redirect_stdout
from io import StringIO

import pytest

from zeroprod.cli import main
from zeroprod.ffield import make_field
from zeroprod.fibctor import (
    apparition_certificate, construct_counterexample, fibonacci, first_identity_failure, legendre5,
    rank_of_apparition, rank_of_apparition_scan,
)
from zeroprod.matspace import block_embed, conjugate, decode, is_invertible, mat_mul, mat_pow, scale
from zeroprod.ntheory import is_prime
from zeroprod.rystov import RysQuery, rys_number
from zeroprod.verify import verify_corollary, verify_lemma_abc
from zeroprod.wordsearch import shortest_zero_product, word_product

SEED = 20261014
CONSTRUCT_NS = (1, 5, 10, 20, 50, 92)


@pytest.fixture
def report(capsys):
    def _report(n, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")
        assert ok, detail
    return _report


def _cli_json(*argv):
    buf = StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


def _random_gens(rng, f, n=2):
    return [decode(rng.randrange(f.q ** (n * n)), n, f) for _ in range(rng.randint(1, 3))]


def _brute_shortest(gens, max_len):
    for L in range(1, max_len + 1):
        for w in itertools.product(range(len(gens)), repeat=L):
            if word_product(gens, w).is_zero():
                return L
    return None


def test_criterion_01_lemma(report):
    t0 = time.perf_counter()
    r2, r3 = verify_lemma_abc(2), verify_lemma_abc(3)
    small = time.perf_counter() - t0
    t1 = time.perf_counter()
    r5 = verify_lemma_abc(5, large=True)
    big = time.perf_counter() - t1
    ok = (r2.passed and r3.passed and r5.passed
          and (r2.cases_checked, r3.cases_checked) == (2560, 216513)
          and r5.cases_checked == 56_640_625 and small < 5 and big < 120)
    report(1, ok, f"lemma q=2 {r2.cases_checked} cases, q=3 {r3.cases_checked}, "
                  f"{len(r2.counterexamples) + len(r3.counterexamples)} counterexamples in {small:.2f}s; "
                  f"q=5 {r5.cases_checked} cases, {len(r5.counterexamples)} counterexamples in {big:.2f}s")


def test_criterion_02_corollary(report):
    t0 = time.perf_counter()
    reps = [verify_corollary(q) for q in (2, 3)]
    dt = time.perf_counter() - t0
    ok = all(r.passed for r in reps) and dt < 10
    report(2, ok, "corollary " + ", ".join(
        f"q={r.q} {r.details['mortal_pairs']} mortal pairs, {len(r.counterexamples)} counterexamples"
        for r in reps) + f" in {dt:.2f}s")


def test_criterion_03_rys(report):
    t0 = time.perf_counter()
    r2 = rys_number(RysQuery(2, make_field(2)))
    d2 = time.perf_counter() - t0
    t1 = time.perf_counter()
    r3 = rys_number(RysQuery(2, make_field(3), k_max=5, use_orbits=True))
    d3 = time.perf_counter() - t1
    ok = ((r2.value, r2.mode, r2.sets_examined) == (4, "exact", 65535) and d2 < 120
          and r3.value == 5 and d3 < 3600)
    report(3, ok, f"Rys(2,2)={r2.value} ({r2.mode}, {r2.sets_examined} sets, {d2:.2f}s); "
                  f"Rys(2,3) k_max=5 orbits value {r3.value} ({r3.orbits_examined} orbits, {d3:.2f}s)")


def test_criterion_04_construct(report):
    bad = []
    for N in CONSTRUCT_NS:
        b = construct_counterexample(N)
        A, B = b.A, b.B
        inv = (is_prime(b.p) and b.p >= fibonacci(N + 1) and b.shortest_length == b.k + 2 > N
               and b.alpha == rank_of_apparition(b.p) and apparition_certificate(b.p, b.alpha)
               and mat_mul(A, A) == A and is_invertible(B)
               and mat_mul(mat_mul(A, mat_pow(B, b.k)), A).is_zero())
        if not inv:
            bad.append(N)
    for N in range(1, 8):
        b = construct_counterexample(N)
        res = shortest_zero_product(b.generators)
        if res.shortest_length != b.shortest_length or res.witness != (0,) + (1,) * b.k + (0,):
            bad.append(("bfs", N))
    b5, b10 = construct_counterexample(5), construct_counterexample(10)
    ok = not bad and (b5.p, b5.shortest_length, b10.p, b10.shortest_length) == (11, 11, 89, 12)
    report(4, ok, f"construct N={list(CONSTRUCT_NS)} invariants hold, BFS agrees for N<=7, "
                  f"N=5 -> (p={b5.p}, len {b5.shortest_length}), N=10 -> (p={b10.p}, "
                  f"len {b10.shortest_length}); failures {bad}")


def test_criterion_05_rank(report):
    t0 = time.perf_counter()
    primes = [p for p in range(2, 10_000) if is_prime(p)]
    bad = [p for p in primes if rank_of_apparition(p) != rank_of_apparition_scan(p)
           or (p not in (2, 5) and (p - legendre5(p)) % rank_of_apparition(p))]
    dt = time.perf_counter() - t0
    report(5, not bad and dt < 10, f"rank of apparition on {len(primes)} primes < 10^4, "
                                   f"{len(bad)} disagreements, {dt:.2f}s")


def test_criterion_06_identities(report):
    primes = [p for p in range(2, 98) if is_prime(p)]
    fails = {p: k for p in primes if (k := first_identity_failure(p, 1000)) is not None}
    report(6, not fails, f"Fibonacci matrix identities for k<=1000 over {len(primes)} primes <= 97, "
                         f"failures {fails}")


def test_criterion_07_invariance(report):
    rng = random.Random(SEED)
    f = make_field(5)
    units = [decode(c, 2, f) for c in range(625) if is_invertible(decode(c, 2, f))]
    bad = 0
    for trial in range(100):
        gens = _random_gens(rng, f)
        base = shortest_zero_product(gens)
        key = (base.mortal, base.shortest_length)
        P = rng.choice(units)
        c = shortest_zero_product([conjugate(g, P) for g in gens])
        s = shortest_zero_product([scale(g, rng.randrange(1, 5)) for g in gens])
        perm = gens[:]
        rng.shuffle(perm)
        pm = shortest_zero_product(perm)
        bad += (c.mortal, c.shortest_length) != key
        bad += (s.mortal, s.shortest_length) != key
        bad += pm.shortest_length != base.shortest_length
    report(7, bad == 0, f"100 conjugations, 100 scalings, 100 permutations over GF(5): {bad} changes")


def _oracle_rows(q, seed=SEED):
    rng = random.Random(seed + q)
    f = make_field(q)
    rows = []
    for _ in range(50):
        gens = _random_gens(rng, f)
        rows.append((gens, shortest_zero_product(gens), _brute_shortest(gens, 6)))
    return rows


def test_criterion_08_oracle(report):
    bad = 0
    for q in (2, 3):
        for gens, res, brute in _oracle_rows(q):
            if brute is None:
                bad += res.mortal and res.shortest_length <= 6
            else:
                bad += res.shortest_length != brute
    report(8, bad == 0, f"BFS vs brute force (lengths <= 6) on 50 sets over GF(2) and GF(3): {bad} mismatches")


def test_criterion_09_embedding(report):
    f = make_field(11)
    pair = construct_counterexample(5).generators
    small = shortest_zero_product(pair)
    big = shortest_zero_product([block_embed(g, 3) for g in pair])
    ok = big.shortest_length == small.shortest_length == 11 and big.semigroup_size == small.semigroup_size
    assert pair[0].field == f
    report(9, ok, f"GF(11) pair in 3x3: length {big.shortest_length} (2x2: {small.shortest_length}), "
                  f"semigroup {big.semigroup_size} vs {small.semigroup_size}")


def _oracle_generator_args(q):
    out = []
    for gens, _, _ in _oracle_rows(q):
        args = ["shortest", "--q", str(q), "--json", "--count-minimal"]
        for g in gens:
            args += ["--gen", ";".join(",".join(map(str, r)) for r in g.rows())]
        out.append(args)
    return out


def test_criterion_10_determinism(report):
    outputs = {}
    for w in (1, 4, 8):
        chunks = []
        for argv in (["rys", "--n", "2", "--q", "2", "--k-max", "all"],
                     ["rys", "--n", "2", "--q", "3", "--k-max", "5", "--orbits"]):
            chunks.append(_cli_json(*argv, "--json", "--reproducible", "--no-catalog",
                                    "--threads", str(w))[1])
        for N in CONSTRUCT_NS:
            chunks.append(_cli_json("construct", "--min-length", str(N), "--json")[1])
        for q in (2, 3):
            for argv in _oracle_generator_args(q):
                chunks.append(_cli_json(*argv, "--threads", str(w))[1])
        outputs[w] = "".join(chunks).encode()
    same = outputs[1] == outputs[4] == outputs[8]
    report(10, same, f"criteria 3, 4, 8 JSON at 1/4/8 workers: "
                     f"{'byte-identical' if same else 'DIFFERENT'} ({len(outputs[1])} bytes each)")
    json.loads(outputs[1].decode().splitlines()[0])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
