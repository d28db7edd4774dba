# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Contract documented in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t, int32_t, uint8_t
from libc.stdlib cimport malloc, calloc, realloc, free
from libc.string cimport memcpy, memcmp, memset

cnp.import_array()

NAME = "cython"

cdef extern from *:
    """
    typedef unsigned __int128 zp_u128;
    static inline unsigned long long zp_mulmod(unsigned long long a, unsigned long long b,
                                               unsigned long long m) {
        return (unsigned long long)(((zp_u128)a * b) % m);
    }
    static inline unsigned long long zp_addmod(unsigned long long a, unsigned long long b,
                                               unsigned long long m) {
        return a >= m - b ? a - (m - b) : a + b;
    }
    """
    uint64_t zp_mulmod(uint64_t a, uint64_t b, uint64_t m) nogil
    uint64_t zp_addmod(uint64_t a, uint64_t b, uint64_t m) nogil

# directly indexed state map up to this many matrices
cdef int64_t DIRECT_LIMIT = 1 << 24
cdef uint64_t U64_MAX = 0xFFFFFFFFFFFFFFFFULL


cdef struct Field:
    uint64_t p
    uint64_t q
    int ext
    int64_t qm1
    int64_t* exp_t
    int64_t* log_t
    int64_t* zech_t


cdef inline uint64_t f_mul(Field* f, uint64_t a, uint64_t b) noexcept nogil:
    if not f.ext:
        return zp_mulmod(a, b, f.p)
    if a == 0 or b == 0:
        return 0
    return <uint64_t>f.exp_t[f.log_t[a] + f.log_t[b]]


cdef inline uint64_t f_add(Field* f, uint64_t a, uint64_t b) noexcept nogil:
    cdef int64_t la, d, z
    if not f.ext:
        return zp_addmod(a, b, f.p)
    if a == 0:
        return b
    if b == 0:
        return a
    la = f.log_t[a]
    d = f.log_t[b] - la
    if d < 0:
        d += f.qm1
    z = f.zech_t[d]
    if z < 0:
        return 0
    return <uint64_t>f.exp_t[la + z]


cdef inline void mat_prod(Field* f, int n, const uint64_t* a, const uint64_t* b,
                          uint64_t* out) noexcept nogil:
    cdef int i, j, k
    cdef uint64_t s, x, y
    for i in range(n):
        for j in range(n):
            s = 0
            for k in range(n):
                x = a[i * n + k]
                if x:
                    y = b[k * n + j]
                    if y:
                        s = f_add(f, s, f_mul(f, x, y))
            out[i * n + j] = s


cdef inline uint64_t hash_entries(const uint64_t* e, int nn) noexcept nogil:
    cdef uint64_t h = 0x9E3779B97F4A7C15ULL
    cdef int i
    cdef uint64_t z
    for i in range(nn):
        z = h ^ (e[i] + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2))
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
        h = z ^ (z >> 31)
    return h


cdef inline int is_zero(const uint64_t* e, int nn) noexcept nogil:
    cdef int i
    for i in range(nn):
        if e[i]:
            return 0
    return 1


cdef class _Store:
    """Growable state store with a code-indexed or hashed lookup."""
    cdef int nn
    cdef int64_t count, cap
    cdef uint64_t* states
    cdef int32_t* pred
    cdef int32_t* gen_of
    cdef uint64_t* cnt
    cdef int direct
    cdef uint64_t q
    cdef int32_t* dmap
    cdef int64_t* htab
    cdef int64_t hcap

    def __cinit__(self, int nn, uint64_t q, int direct, int64_t dsize):
        self.nn = nn
        self.q = q
        self.count = 0
        self.cap = 1024
        self.states = <uint64_t*>malloc(self.cap * nn * sizeof(uint64_t))
        self.pred = <int32_t*>malloc(self.cap * sizeof(int32_t))
        self.gen_of = <int32_t*>malloc(self.cap * sizeof(int32_t))
        self.cnt = <uint64_t*>malloc(self.cap * sizeof(uint64_t))
        self.direct = direct
        self.dmap = NULL
        self.htab = NULL
        if direct:
            self.dmap = <int32_t*>calloc(dsize, sizeof(int32_t))
        else:
            self.hcap = 4096
            self.htab = <int64_t*>calloc(self.hcap, sizeof(int64_t))
        if (self.states == NULL or self.pred == NULL or self.gen_of == NULL or self.cnt == NULL
                or (direct and self.dmap == NULL) or (not direct and self.htab == NULL)):
            raise MemoryError()

    def __dealloc__(self):
        free(self.states)
        free(self.pred)
        free(self.gen_of)
        free(self.cnt)
        free(self.dmap)
        free(self.htab)

    cdef int grow(self) except -1:
        cdef int64_t nc = self.cap * 2
        cdef void* p
        p = realloc(self.states, nc * self.nn * sizeof(uint64_t))
        if p == NULL:
            raise MemoryError()
        self.states = <uint64_t*>p
        p = realloc(self.pred, nc * sizeof(int32_t))
        if p == NULL:
            raise MemoryError()
        self.pred = <int32_t*>p
        p = realloc(self.gen_of, nc * sizeof(int32_t))
        if p == NULL:
            raise MemoryError()
        self.gen_of = <int32_t*>p
        p = realloc(self.cnt, nc * sizeof(uint64_t))
        if p == NULL:
            raise MemoryError()
        self.cnt = <uint64_t*>p
        self.cap = nc
        return 0

    cdef int rehash(self) except -1:
        cdef int64_t nh = self.hcap * 2
        cdef int64_t* t = <int64_t*>calloc(nh, sizeof(int64_t))
        cdef int64_t i, slot
        if t == NULL:
            raise MemoryError()
        for i in range(self.count):
            slot = <int64_t>(hash_entries(self.states + i * self.nn, self.nn) & <uint64_t>(nh - 1))
            while t[slot]:
                slot = (slot + 1) & (nh - 1)
            t[slot] = i + 1
        free(self.htab)
        self.htab = t
        self.hcap = nh
        return 0

    cdef int64_t find_or_add(self, const uint64_t* e, int* added) except -2:
        """Index of state e; appends it when absent (added set to 1)."""
        cdef uint64_t code = 0
        cdef int i
        cdef int64_t slot = 0, idx
        added[0] = 0
        if self.direct:
            for i in range(self.nn - 1, -1, -1):
                code = code * self.q + e[i]
            idx = self.dmap[code] - 1
            if idx >= 0:
                return idx
        else:
            slot = <int64_t>(hash_entries(e, self.nn) & <uint64_t>(self.hcap - 1))
            while self.htab[slot]:
                idx = self.htab[slot] - 1
                if memcmp(self.states + idx * self.nn, e, self.nn * sizeof(uint64_t)) == 0:
                    return idx
                slot = (slot + 1) & (self.hcap - 1)
        if self.count == self.cap:
            self.grow()
        idx = self.count
        memcpy(self.states + idx * self.nn, e, self.nn * sizeof(uint64_t))
        self.count += 1
        added[0] = 1
        if self.direct:
            self.dmap[code] = <int32_t>(idx + 1)
        else:
            self.htab[slot] = idx + 1
            if self.count * 2 > self.hcap:
                self.rehash()
        return idx


cdef list _walk(int64_t z, int32_t* pred, int32_t* gen_of):
    cdef list word = []
    while z >= 0:
        word.append(gen_of[z])
        z = pred[z]
    word.reverse()
    return word


def bfs_generic(cnp.ndarray gens_in, int n, p, q, exp_in, log_in, zech_in,
                int64_t max_len, int64_t max_states, bint want_count, bint stop_at_zero,
                bint want_states):
    cdef int nn = n * n
    cdef cnp.ndarray[uint64_t, ndim=2, mode="c"] gens = np.ascontiguousarray(gens_in, dtype=np.uint64)
    cdef cnp.ndarray[int64_t, ndim=1, mode="c"] exp_a = np.ascontiguousarray(exp_in, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1, mode="c"] log_a = np.ascontiguousarray(log_in, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1, mode="c"] zech_a = np.ascontiguousarray(zech_in, dtype=np.int64)
    cdef Field f
    cdef int k = gens.shape[0]
    cdef int gi, added
    cdef int64_t s, t, lo, hi, depth, zero_idx = -1, zero_depth = 0
    cdef bint truncated = False, overflow = False
    cdef uint64_t cs
    cdef uint64_t* buf
    cdef uint64_t* cur
    f.p = <uint64_t>p
    f.q = <uint64_t>q
    f.ext = exp_a.shape[0] > 0
    f.qm1 = <int64_t>(f.q - 1)
    f.exp_t = <int64_t*>exp_a.data if f.ext else NULL
    f.log_t = <int64_t*>log_a.data if f.ext else NULL
    f.zech_t = <int64_t*>zech_a.data if f.ext else NULL

    # q^(n^2) as a Python int decides the lookup structure
    space = int(q) ** nn
    cdef int direct = space <= DIRECT_LIMIT
    cdef _Store st = _Store(nn, f.q, direct, space if direct else 0)

    buf = <uint64_t*>malloc(2 * nn * sizeof(uint64_t))
    if buf == NULL:
        raise MemoryError()
    cur = buf + nn
    try:
        for gi in range(k):
            t = st.find_or_add(&gens[gi, 0], &added)
            if added:
                if st.count > max_states:
                    return (1, 0, None, st.count - 1, None, False, False, None)
                st.pred[t] = -1
                st.gen_of[t] = gi
                st.cnt[t] = 1
                if zero_idx < 0 and is_zero(&gens[gi, 0], nn):
                    zero_idx = t
                    zero_depth = 1
            else:
                st.cnt[t] += 1
        lo = 0
        hi = st.count
        depth = 1
        while True:
            if zero_idx >= 0 and stop_at_zero:
                break
            if lo == hi:
                break
            if depth >= max_len:
                truncated = True
                break
            for s in range(lo, hi):
                # states may move on growth; copy the row out first
                memcpy(cur, st.states + s * nn, nn * sizeof(uint64_t))
                cs = st.cnt[s]
                for gi in range(k):
                    mat_prod(&f, n, cur, &gens[gi, 0], buf)
                    t = st.find_or_add(buf, &added)
                    if added:
                        if st.count > max_states:
                            return (1, 0, None, st.count - 1, None, False, False, None)
                        st.pred[t] = <int32_t>s
                        st.gen_of[t] = gi
                        st.cnt[t] = cs
                        if zero_idx < 0 and is_zero(buf, nn):
                            zero_idx = t
                            zero_depth = depth + 1
                    elif t >= hi and want_count:
                        if st.cnt[t] > U64_MAX - cs:
                            overflow = True
                            st.cnt[t] = U64_MAX
                        else:
                            st.cnt[t] += cs
            lo = hi
            hi = st.count
            depth += 1
        witness = _walk(zero_idx, st.pred, st.gen_of) if zero_idx >= 0 else None
        count = int(st.cnt[zero_idx]) if (want_count and zero_idx >= 0) else None
        states = None
        if want_states:
            states = np.empty((st.count, nn), dtype=np.uint64)
            if st.count:
                memcpy(cnp.PyArray_DATA(states), st.states, st.count * nn * sizeof(uint64_t))
        return (0, int(zero_depth), witness, int(st.count), count, truncated, overflow, states)
    finally:
        free(buf)


def bfs_table(int32_t[:, ::1] T, gens_in, int64_t max_len, bint want_count, bint stop_at_zero):
    cdef int32_t[::1] gens = np.ascontiguousarray(gens_in, dtype=np.int32)
    cdef int S = T.shape[0]
    cdef int k = gens.shape[0]
    cdef cnp.ndarray[int32_t, ndim=1] idx_a = np.full(S, -1, dtype=np.int32)
    cdef cnp.ndarray[int32_t, ndim=1] order_a = np.empty(S, dtype=np.int32)
    cdef cnp.ndarray[int32_t, ndim=1] pred_a = np.empty(S, dtype=np.int32)
    cdef cnp.ndarray[int32_t, ndim=1] gen_a = np.empty(S, dtype=np.int32)
    cdef cnp.ndarray[uint64_t, ndim=1] cnt_a = np.zeros(S, dtype=np.uint64)
    cdef int32_t* idx = <int32_t*>idx_a.data
    cdef int32_t* order = <int32_t*>order_a.data
    cdef int32_t* pred = <int32_t*>pred_a.data
    cdef int32_t* gen_of = <int32_t*>gen_a.data
    cdef uint64_t* cnt = <uint64_t*>cnt_a.data
    cdef int count = 0, gi, g, t, i, s
    cdef int64_t lo, hi, depth, zero_idx = -1, zero_depth = 0
    cdef bint truncated = False, overflow = False
    cdef uint64_t cs
    for gi in range(k):
        g = gens[gi]
        i = idx[g]
        if i < 0:
            idx[g] = count
            order[count] = g
            pred[count] = -1
            gen_of[count] = gi
            cnt[count] = 1
            if g == 0 and zero_idx < 0:
                zero_idx = count
                zero_depth = 1
            count += 1
        else:
            cnt[i] += 1
    lo = 0
    hi = count
    depth = 1
    while True:
        if zero_idx >= 0 and stop_at_zero:
            break
        if lo == hi:
            break
        if depth >= max_len:
            truncated = True
            break
        for s in range(lo, hi):
            cs = cnt[s]
            for gi in range(k):
                t = T[order[s], gens[gi]]
                i = idx[t]
                if i < 0:
                    idx[t] = count
                    order[count] = t
                    pred[count] = s
                    gen_of[count] = gi
                    cnt[count] = cs
                    if zero_idx < 0 and t == 0:
                        zero_idx = count
                        zero_depth = depth + 1
                    count += 1
                elif i >= hi:
                    if cnt[i] > U64_MAX - cs:
                        overflow = True
                        cnt[i] = U64_MAX
                    else:
                        cnt[i] += cs
        lo = hi
        hi = count
        depth += 1
    witness = _walk(zero_idx, pred, gen_of) if zero_idx >= 0 else None
    c = int(cnt[zero_idx]) if (want_count and zero_idx >= 0) else None
    return (int(zero_depth), witness, count, c, truncated, overflow)


cdef int _score(const int32_t* T, int S, const uint8_t* singular, const int32_t* g, int k,
                int32_t* stamp, int32_t epoch, int32_t* queue) noexcept nogil:
    cdef int i, j, t, head, tail, layer_end, depth, any_sing = 0
    for i in range(k):
        if g[i] == 0:
            return 1
        if singular[g[i]]:
            any_sing = 1
    if not any_sing:
        return 0
    tail = 0
    for i in range(k):
        if stamp[g[i]] != epoch:
            stamp[g[i]] = epoch
            queue[tail] = g[i]
            tail += 1
    head = 0
    depth = 1
    while head < tail:
        layer_end = tail
        while head < layer_end:
            i = queue[head]
            head += 1
            for j in range(k):
                t = T[i * S + g[j]]
                if stamp[t] != epoch:
                    if t == 0:
                        return depth + 1
                    stamp[t] = epoch
                    queue[tail] = t
                    tail += 1
        depth += 1
    return 0


def score_sets(int32_t[:, ::1] T, uint8_t[::1] singular, rows_in):
    cdef int32_t[:, ::1] rows = np.ascontiguousarray(rows_in, dtype=np.int32)
    cdef int S = T.shape[0]
    cdef int64_t m = rows.shape[0], r
    cdef int w = rows.shape[1], k, i
    cdef cnp.ndarray[int32_t, ndim=1] out = np.zeros(m, dtype=np.int32)
    cdef int32_t[::1] stamp = np.zeros(S, dtype=np.int32)
    cdef int32_t[::1] queue = np.empty(S, dtype=np.int32)
    cdef int32_t[::1] g = np.empty(max(w, 1), dtype=np.int32)
    cdef int32_t epoch = 0
    with nogil:
        for r in range(m):
            k = 0
            for i in range(w):
                if rows[r, i] >= 0:
                    g[k] = rows[r, i]
                    k += 1
            epoch += 1
            out[r] = _score(&T[0, 0], S, &singular[0], &g[0], k, &stamp[0], epoch, &queue[0])
    return out


def score_masks(int32_t[:, ::1] T, uint8_t[::1] singular, int64_t lo, int64_t hi):
    cdef int S = T.shape[0]
    cdef int64_t mask
    cdef int k, c
    cdef cnp.ndarray[int32_t, ndim=1] out = np.zeros(hi - lo, dtype=np.int32)
    cdef int32_t[::1] stamp = np.zeros(S, dtype=np.int32)
    cdef int32_t[::1] queue = np.empty(S, dtype=np.int32)
    cdef int32_t[::1] g = np.empty(S, dtype=np.int32)
    cdef int32_t epoch = 0
    if S > 63:
        raise ValueError("bitmask enumeration needs at most 63 matrices")
    with nogil:
        for mask in range(lo, hi):
            k = 0
            for c in range(S):
                if (mask >> c) & 1:
                    g[k] = c
                    k += 1
            epoch += 1
            out[mask - lo] = _score(&T[0, 0], S, &singular[0], &g[0], k, &stamp[0], epoch, &queue[0])
    return out


def lemma_scan(int32_t[:, ::1] T, uint8_t[::1] bmask, uint8_t[::1] cmask, int mode,
               int64_t max_report):
    cdef int S = T.shape[0]
    cdef int a, b, c, ab, bc
    cdef int64_t cases = 0, premise = 0, violations = 0
    cdef bint ok
    report = []
    for b in range(S):
        if not bmask[b]:
            continue
        for a in range(S):
            ab = T[a, b]
            for c in range(S):
                if not cmask[c]:
                    continue
                cases += 1
                if T[ab, c] != 0:
                    continue
                premise += 1
                bc = T[b, c]
                if mode == 0:
                    ok = ab == 0 or bc == 0
                elif mode == 1:
                    ok = ab == 0 and bc == 0
                else:
                    ok = ab == 0
                if not ok:
                    violations += 1
                    if len(report) < max_report:
                        report.append((a, b, c))
    return int(cases), int(premise), int(violations), report


cdef inline void _sorted_image(const int32_t* perm, const int32_t* row, int k,
                               int32_t* out) noexcept nogil:
    cdef int i, j
    cdef int32_t v
    for i in range(k):
        v = perm[row[i]]
        j = i
        while j > 0 and out[j - 1] > v:
            out[j] = out[j - 1]
            j -= 1
        out[j] = v


cdef inline int _lex_less(const int32_t* a, const int32_t* b, int k) noexcept nogil:
    cdef int i
    for i in range(k):
        if a[i] != b[i]:
            return a[i] < b[i]
    return 0


cdef void _canon(const int32_t* perms, int G, int C, const int32_t* row, int k,
                 int32_t* best, int32_t* tmp) noexcept nogil:
    cdef int gi
    _sorted_image(perms, row, k, best)
    for gi in range(1, G):
        _sorted_image(perms + gi * C, row, k, tmp)
        if _lex_less(tmp, best, k):
            memcpy(best, tmp, k * sizeof(int32_t))


def canon_rows(int32_t[:, ::1] perms, rows_in):
    cdef int32_t[:, ::1] rows = np.ascontiguousarray(rows_in, dtype=np.int32)
    cdef int G = perms.shape[0], C = perms.shape[1]
    cdef int64_t m = rows.shape[0], r
    cdef int k = rows.shape[1]
    cdef cnp.ndarray[int32_t, ndim=2] out = np.empty((m, k), dtype=np.int32)
    cdef int32_t[::1] tmp = np.empty(max(k, 1), dtype=np.int32)
    cdef int32_t[:, ::1] ov = out
    if m == 0 or k == 0:
        return out
    with nogil:
        for r in range(m):
            _canon(&perms[0, 0], G, C, &rows[r, 0], k, &ov[r, 0], &tmp[0])
    return out


def canon_extend(int32_t[:, ::1] perms, reps_in, int C):
    cdef int32_t[:, ::1] reps = np.ascontiguousarray(reps_in, dtype=np.int32)
    cdef int G = perms.shape[0]
    cdef int64_t m = reps.shape[0], r, o = 0
    cdef int k = reps.shape[1], x, i
    cdef cnp.ndarray[int32_t, ndim=2] out = np.empty((m * (C - k), k + 1), dtype=np.int32)
    cdef int32_t[:, ::1] ov = out
    cdef int32_t[::1] row = np.empty(k + 1, dtype=np.int32)
    cdef int32_t[::1] tmp = np.empty(k + 1, dtype=np.int32)
    cdef uint8_t[::1] present = np.zeros(C, dtype=np.uint8)
    with nogil:
        for r in range(m):
            for i in range(k):
                row[i] = reps[r, i]
                present[reps[r, i]] = 1
            for x in range(C):
                if present[x]:
                    continue
                row[k] = x
                _canon(&perms[0, 0], G, C, &row[0], k + 1, &ov[o, 0], &tmp[0])
                o += 1
            for i in range(k):
                present[reps[r, i]] = 0
    return out[:o]
