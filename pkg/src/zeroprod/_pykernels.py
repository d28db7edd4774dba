"""Pure-Python kernels; same contract as the compiled ``_ckernels`` module.

Matrices inside the generic BFS are tuples of element codes. Fields are
passed as (p, q, exp, log, zech); empty tables mean a prime field.

BFS return tuple, shared by both backends:
    (status, zero_depth, witness, n_states, count, truncated, overflow, states)
status 0 = ok, 1 = state budget exceeded; zero_depth 0 = zero not reached.
"""

import numpy as np

NAME = "python"


def _field_ops(p, q, exp_t, log_t, zech_t):
    if len(exp_t) == 0:
        def add(a, b):
            s = a + b
            return s - p if s >= p else s

        def mul(a, b):
            return a * b % p
        return add, mul
    exp_t = [int(x) for x in exp_t]
    log_t = [int(x) for x in log_t]
    zech_t = [int(x) for x in zech_t]
    qm1 = q - 1

    def add(a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        la = log_t[a]
        z = zech_t[(log_t[b] - la) % qm1]
        return 0 if z < 0 else exp_t[la + z]

    def mul(a, b):
        if a == 0 or b == 0:
            return 0
        return exp_t[log_t[a] + log_t[b]]
    return add, mul


def _witness(zero_idx, pred, gen_of):
    word = []
    i = zero_idx
    while i >= 0:
        word.append(gen_of[i])
        i = pred[i]
    word.reverse()
    return word


def bfs_generic(gens, n, p, q, exp_t, log_t, zech_t, max_len, max_states,
                want_count, stop_at_zero, want_states):
    add, mul = _field_ops(int(p), int(q), exp_t, log_t, zech_t)
    nn = n * n
    rng = range(n)
    gl = [tuple(int(x) for x in g) for g in gens]
    zero = (0,) * nn

    def prod(a, b):
        out = []
        for i in rng:
            for j in rng:
                s = 0
                for k in rng:
                    x = a[i * n + k]
                    if x:
                        y = b[k * n + j]
                        if y:
                            s = add(s, mul(x, y))
                out.append(s)
        return tuple(out)

    index = {}
    states = []
    pred = []
    gen_of = []
    cnt = []
    zero_idx = -1
    zero_depth = 0
    for gi, g in enumerate(gl):
        i = index.get(g)
        if i is None:
            if len(states) >= max_states:
                return (1, 0, None, len(states), None, False, False, None)
            index[g] = len(states)
            states.append(g)
            pred.append(-1)
            gen_of.append(gi)
            cnt.append(1)
            if g == zero and zero_idx < 0:
                zero_idx, zero_depth = len(states) - 1, 1
        else:
            cnt[i] += 1
    lo, hi, depth = 0, len(states), 1
    truncated = False
    while True:
        if zero_idx >= 0 and stop_at_zero:
            break
        if lo == hi:
            break
        if depth >= max_len:
            truncated = True
            break
        for s in range(lo, hi):
            a = states[s]
            cs = cnt[s]
            for gi, g in enumerate(gl):
                t = prod(a, g)
                i = index.get(t)
                if i is None:
                    if len(states) >= max_states:
                        return (1, 0, None, len(states), None, False, False, None)
                    index[t] = len(states)
                    states.append(t)
                    pred.append(s)
                    gen_of.append(gi)
                    cnt.append(cs)
                    if zero_idx < 0 and t == zero:
                        zero_idx, zero_depth = len(states) - 1, depth + 1
                elif i >= hi:
                    cnt[i] += cs
        lo, hi, depth = hi, len(states), depth + 1
    witness = _witness(zero_idx, pred, gen_of) if zero_idx >= 0 else None
    count = cnt[zero_idx] if (want_count and zero_idx >= 0) else None
    st = np.array(states, dtype=np.uint64) if want_states else None
    return (0, zero_depth, witness, len(states), count, truncated, False, st)


def bfs_table(T, gens, max_len, want_count, stop_at_zero):
    """Same search over codes with a precomputed multiplication table."""
    Tl = T.tolist()
    gl = [int(g) for g in gens]
    depth_of = {}
    order = []
    pred = []
    gen_of = []
    cnt = []
    zero_idx = -1
    zero_depth = 0
    for gi, g in enumerate(gl):
        i = depth_of.get(g)
        if i is None:
            depth_of[g] = len(order)
            order.append(g)
            pred.append(-1)
            gen_of.append(gi)
            cnt.append(1)
            if g == 0 and zero_idx < 0:
                zero_idx, zero_depth = len(order) - 1, 1
        else:
            cnt[i] += 1
    lo, hi, depth = 0, len(order), 1
    truncated = False
    while True:
        if zero_idx >= 0 and stop_at_zero:
            break
        if lo == hi:
            break
        if depth >= max_len:
            truncated = True
            break
        for s in range(lo, hi):
            row = Tl[order[s]]
            cs = cnt[s]
            for gi, g in enumerate(gl):
                t = row[g]
                i = depth_of.get(t)
                if i is None:
                    depth_of[t] = len(order)
                    order.append(t)
                    pred.append(s)
                    gen_of.append(gi)
                    cnt.append(cs)
                    if zero_idx < 0 and t == 0:
                        zero_idx, zero_depth = len(order) - 1, depth + 1
                elif i >= hi:
                    cnt[i] += cs
        lo, hi, depth = hi, len(order), depth + 1
    witness = _witness(zero_idx, pred, gen_of) if zero_idx >= 0 else None
    count = cnt[zero_idx] if (want_count and zero_idx >= 0) else None
    return (zero_depth, witness, len(order), count, truncated, False)


def _score(Tl, singular, gl):
    if 0 in gl:
        return 1
    if not any(singular[g] for g in gl):
        return 0
    seen = set(gl)
    frontier = list(dict.fromkeys(gl))
    depth = 1
    while frontier:
        nxt = []
        for s in frontier:
            row = Tl[s]
            for g in gl:
                t = row[g]
                if t not in seen:
                    if t == 0:
                        return depth + 1
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
        depth += 1
    return 0


def score_sets(T, singular, rows):
    """Shortest zero length per row of generator codes (-1 pads); 0 = not mortal."""
    Tl = T.tolist()
    sing = singular.tolist()
    out = np.zeros(len(rows), dtype=np.int32)
    for r, row in enumerate(rows.tolist()):
        out[r] = _score(Tl, sing, [g for g in row if g >= 0])
    return out


def score_masks(T, singular, lo, hi):
    """Like score_sets, for every subset bitmask in [lo, hi)."""
    Tl = T.tolist()
    sing = singular.tolist()
    S = len(Tl)
    out = np.zeros(hi - lo, dtype=np.int32)
    for m in range(lo, hi):
        out[m - lo] = _score(Tl, sing, [c for c in range(S) if m >> c & 1])
    return out


def lemma_scan(T, bmask, cmask, mode, max_report):
    """Scan triples (a, b, c) with bmask[b] and cmask[c]; premise abc = 0.

    mode 0: conclusion ab = 0 or bc = 0; mode 1: ab = 0 and bc = 0;
    mode 2: ab = 0. Returns (cases, premise, violations, reported triples).
    """
    S = T.shape[0]
    bs = np.flatnonzero(bmask)
    cs = np.flatnonzero(cmask)
    cases = premise = violations = 0
    report = []
    for b in bs:
        ab = T[:, b]
        bc = T[b, cs]
        abc = T[ab][:, cs]
        prem = abc == 0
        ab0 = (ab == 0)[:, None]
        bc0 = (bc == 0)[None, :]
        if mode == 0:
            concl = ab0 | bc0
        elif mode == 1:
            concl = ab0 & bc0
        else:
            concl = np.broadcast_to(ab0, prem.shape)
        bad = prem & ~concl
        cases += S * len(cs)
        premise += int(prem.sum())
        nbad = int(bad.sum())
        if nbad:
            violations += nbad
            for a, ci in zip(*np.nonzero(bad)):
                if len(report) >= max_report:
                    break
                report.append((int(a), int(b), int(cs[ci])))
    return cases, premise, violations, report


def canon_rows(perms, rows):
    """Lexicographically least sorted image of each row under the perms."""
    P = perms.tolist()
    out = []
    for row in rows.tolist():
        out.append(min(sorted(p[x] for x in row) for p in P))
    return np.array(out, dtype=np.int32).reshape(len(out), rows.shape[1])


def canon_extend(perms, reps, C):
    """Canonical forms of rep + {x} for every rep and every x not in rep."""
    P = perms.tolist()
    k = reps.shape[1]
    out = []
    for row in reps.tolist():
        present = set(row)
        for x in range(C):
            if x in present:
                continue
            ext = row + [x]
            out.append(min(sorted(p[y] for y in ext) for p in P))
    return np.array(out, dtype=np.int32).reshape(len(out), k + 1)
