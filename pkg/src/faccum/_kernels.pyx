# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernels.

Every kernel takes ``(seed, rep0, reps, ...)`` and treats replicate ``rep0 + i``
with its own counter-based SplitMix64 stream, so results do not depend on how
replicates are split across calls or threads.  The pure-Python twin in
``_kernels_py`` reproduces the same streams bit for bit.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t, uint8_t
from libc.stdlib cimport malloc, free, calloc
from libc.string cimport memset

cnp.import_array()

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t STREAM = 0xD1B54A32D192ED03ULL
cdef double TWO_M53 = 1.0 / 9007199254740992.0


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t rep_state(uint64_t seed, uint64_t rep) noexcept nogil:
    return mix64(mix64(seed) ^ (rep * STREAM))


cdef inline uint64_t next_u64(uint64_t* state) noexcept nogil:
    state[0] += GOLDEN
    return mix64(state[0])


cdef inline double next_uniform(uint64_t* state) noexcept nogil:
    return <double>(next_u64(state) >> 11) * TWO_M53


cdef inline int64_t next_below(uint64_t* state, int64_t m) noexcept nogil:
    cdef int64_t v = <int64_t>(next_uniform(state) * <double>m)
    return v if v < m else m - 1


# -- shared tally ------------------------------------------------------------

cdef struct Tally:
    int64_t* counts
    int64_t* touched
    int64_t ntouched


cdef inline void tally_add(Tally* t, int64_t label) noexcept nogil:
    if t.counts[label] == 0:
        t.touched[t.ntouched] = label
        t.ntouched += 1
    t.counts[label] += 1


cdef inline void tally_flush(Tally* t, int64_t N, int64_t rmax, int64_t* hist_row,
                             int64_t* counts_row) noexcept nogil:
    cdef int64_t i, lab, c
    hist_row[0] += N - t.ntouched
    for i in range(t.ntouched):
        lab = t.touched[i]
        c = t.counts[lab]
        if c <= rmax:
            hist_row[c] += 1
        if counts_row != NULL:
            counts_row[lab] = c
        t.counts[lab] = 0
    t.ntouched = 0


cdef int tally_init(Tally* t, int64_t N, int64_t max_labels) noexcept nogil:
    t.counts = <int64_t*>calloc(N, sizeof(int64_t))
    t.touched = <int64_t*>malloc((max_labels if max_labels < N else N) * sizeof(int64_t) + 8)
    t.ntouched = 0
    return 0 if (t.counts != NULL and t.touched != NULL) else -1


cdef void tally_free(Tally* t) noexcept nogil:
    free(t.counts)
    free(t.touched)


def _outputs(reps, N, rmax, counts_out):
    hist = np.zeros((reps, rmax + 1), dtype=np.int64)
    if counts_out is not None:
        if counts_out.shape != (reps, N) or counts_out.dtype != np.int64:
            raise ValueError("counts_out must be an int64 array of shape (reps, N)")
        counts_out[...] = 0
    return hist


cdef inline int64_t* row_or_null(int64_t[:, ::1] arr, int64_t i, bint has) noexcept nogil:
    if has:
        return &arr[i, 0]
    return NULL


# -- samplers --------------------------------------------------------------------

def occupancy_distinct(uint64_t seed, int64_t rep0, int64_t reps, int64_t n, int64_t N,
                       int64_t rmax, counts_out=None):
    """n distinguishable balls, each in a uniform box."""
    hist = _outputs(reps, N, rmax, counts_out)
    cdef int64_t[:, ::1] h = hist
    cdef bint has = counts_out is not None
    cdef int64_t[:, ::1] co = counts_out if has else np.zeros((1, 1), dtype=np.int64)
    cdef Tally t
    cdef int64_t i, j
    cdef uint64_t st
    with nogil:
        if tally_init(&t, N, n) != 0:
            with gil:
                raise MemoryError()
        for i in range(reps):
            st = rep_state(seed, <uint64_t>(rep0 + i))
            for j in range(n):
                tally_add(&t, next_below(&st, N))
            tally_flush(&t, N, rmax, &h[i, 0], row_or_null(co, i, has))
        tally_free(&t)
    return hist


def occupancy_indistinct(uint64_t seed, int64_t rep0, int64_t reps, int64_t n, int64_t N,
                         int64_t rmax, counts_out=None):
    """Uniform composition of n into N parts: a uniform n-subset of the
    n + N - 1 stars-and-bars slots (Floyd), stars mapped to boxes."""
    hist = _outputs(reps, N, rmax, counts_out)
    cdef int64_t[:, ::1] h = hist
    cdef bint has = counts_out is not None
    cdef int64_t[:, ::1] co = counts_out if has else np.zeros((1, 1), dtype=np.int64)
    cdef int64_t M = n + N - 1
    cdef Tally t
    cdef int64_t i, j, k, pos, idx
    cdef uint64_t st
    cdef uint8_t* taken
    with nogil:
        taken = <uint8_t*>calloc(M + 1, 1)
        if taken == NULL or tally_init(&t, N, n) != 0:
            with gil:
                raise MemoryError()
        for i in range(reps):
            st = rep_state(seed, <uint64_t>(rep0 + i))
            for j in range(M - n, M):
                k = next_below(&st, j + 1)
                if taken[k]:
                    taken[j] = 1
                else:
                    taken[k] = 1
            idx = 0
            for pos in range(M):
                if taken[pos]:
                    tally_add(&t, pos - idx)
                    idx += 1
                    taken[pos] = 0
            tally_flush(&t, N, rmax, &h[i, 0], row_or_null(co, i, has))
        free(taken)
        tally_free(&t)
    return hist


def occupancy_coloured(uint64_t seed, int64_t rep0, int64_t reps, int64_t n, int64_t N,
                       int64_t M, int64_t rmax, counts_out=None):
    """Simple random sample of n balls from N colours with M balls each."""
    if n > N * M:
        raise ValueError("n exceeds the number of balls")
    hist = _outputs(reps, N, rmax, counts_out)
    cdef int64_t[:, ::1] h = hist
    cdef bint has = counts_out is not None
    cdef int64_t[:, ::1] co = counts_out if has else np.zeros((1, 1), dtype=np.int64)
    cdef Tally t
    cdef int64_t i, j, x, pos, step, remaining, top
    cdef uint64_t st
    cdef int64_t* fen
    top = 1
    while top * 2 <= N:
        top *= 2
    with nogil:
        fen = <int64_t*>malloc((N + 1) * sizeof(int64_t))
        if fen == NULL or tally_init(&t, N, n) != 0:
            with gil:
                raise MemoryError()
        for i in range(reps):
            st = rep_state(seed, <uint64_t>(rep0 + i))
            # Fenwick tree with M in every slot
            for j in range(1, N + 1):
                fen[j] = M * (j & (-j))
            remaining = N * M
            for j in range(n):
                x = next_below(&st, remaining)
                # smallest colour c (0-based) with prefix(c + 1) > x
                pos = 0
                step = top
                while step > 0:
                    if pos + step <= N and fen[pos + step] <= x:
                        pos += step
                        x -= fen[pos]
                    step >>= 1
                tally_add(&t, pos)
                x = pos + 1
                while x <= N:
                    fen[x] -= 1
                    x += x & (-x)
                remaining -= 1
            tally_flush(&t, N, rmax, &h[i, 0], row_or_null(co, i, has))
        free(fen)
        tally_free(&t)
    return hist


def occupancy_forest(uint64_t seed, int64_t rep0, int64_t reps, int64_t n, int64_t N,
                     int64_t rmax, counts_out=None):
    """Uniform forest on roots 0..N-1 and non-roots N..N+n-1 by Wilson's
    algorithm on the complete graph; a tree's size is its non-root count."""
    hist = _outputs(reps, N, rmax, counts_out)
    cdef int64_t[:, ::1] h = hist
    cdef bint has = counts_out is not None
    cdef int64_t[:, ::1] co = counts_out if has else np.zeros((1, 1), dtype=np.int64)
    cdef int64_t V = N + n
    cdef Tally t
    cdef int64_t i, v, u, w, root
    cdef uint64_t st
    cdef int64_t* nxt
    cdef int64_t* label
    cdef uint8_t* in_tree
    with nogil:
        nxt = <int64_t*>malloc(V * sizeof(int64_t))
        label = <int64_t*>malloc(V * sizeof(int64_t))
        in_tree = <uint8_t*>malloc(V)
        if nxt == NULL or label == NULL or in_tree == NULL or tally_init(&t, N, n) != 0:
            with gil:
                raise MemoryError()
        for i in range(reps):
            st = rep_state(seed, <uint64_t>(rep0 + i))
            for v in range(V):
                in_tree[v] = 1 if v < N else 0
                label[v] = v if v < N else -1
            for v in range(N, V):
                u = v
                while not in_tree[u]:
                    w = next_below(&st, V - 1)
                    if w >= u:
                        w += 1
                    nxt[u] = w
                    u = w
                u = v
                while not in_tree[u]:
                    in_tree[u] = 1
                    u = nxt[u]
            for v in range(N, V):
                u = v
                while label[u] < 0:
                    u = nxt[u]
                root = label[u]
                u = v
                while label[u] < 0:
                    label[u] = root
                    u = nxt[u]
                tally_add(&t, root)
            tally_flush(&t, N, rmax, &h[i, 0], row_or_null(co, i, has))
        free(nxt)
        free(label)
        free(in_tree)
        tally_free(&t)
    return hist


cdef struct Growable:
    int64_t* data
    int64_t size
    int64_t cap


cdef int grow_push(Growable* g, int64_t x) noexcept nogil:
    cdef int64_t* nd
    cdef int64_t j
    if g.size == g.cap:
        nd = <int64_t*>malloc(2 * g.cap * sizeof(int64_t))
        if nd == NULL:
            return -1
        for j in range(g.size):
            nd[j] = g.data[j]
        free(g.data)
        g.data = nd
        g.cap *= 2
    g.data[g.size] = x
    g.size += 1
    return 0


cdef struct Labels:
    Tally t
    Growable g


def occupancy_negmulti(uint64_t seed, int64_t rep0, int64_t reps, int64_t n, int64_t N,
                       double p, int64_t rmax, counts_out=None):
    """Trials hit colour c with probability p each and stop with 1 - N p;
    counts are taken at the (n + 1)-th stop."""
    if not (p > 0 and N * p < 1):
        raise ValueError("need p > 0 and N p < 1")
    hist = _outputs(reps, N, rmax, counts_out)
    cdef int64_t[:, ::1] h = hist
    cdef bint has = counts_out is not None
    cdef int64_t[:, ::1] co = counts_out if has else np.zeros((1, 1), dtype=np.int64)
    cdef Tally t
    cdef int64_t i, stops, c
    cdef double u, Np = N * p
    cdef uint64_t st
    with nogil:
        if tally_init(&t, N, N) != 0:
            with gil:
                raise MemoryError()
        for i in range(reps):
            st = rep_state(seed, <uint64_t>(rep0 + i))
            stops = 0
            while stops <= n:
                u = next_uniform(&st)
                if u < Np:
                    c = <int64_t>(u / p)
                    if c >= N:
                        c = N - 1
                    tally_add(&t, c)
                else:
                    stops += 1
            tally_flush(&t, N, rmax, &h[i, 0], row_or_null(co, i, has))
        tally_free(&t)
    return hist


def occupancy_dirichlet(uint64_t seed, int64_t rep0, int64_t reps, int64_t n, int64_t N,
                        double a, double b, int64_t rmax, counts_out=None,
                        black_stops=None):
    """Polya urn with mass b black, mass a per colour, +1 per draw; counts are
    read when ``black_stops`` (default n + 1) black draws have occurred."""
    if not (a > 0 and b > 0):
        raise ValueError("need a > 0 and b > 0")
    cdef int64_t stops_needed = n + 1 if black_stops is None else black_stops
    hist = _outputs(reps, N, rmax, counts_out)
    cdef int64_t[:, ::1] h = hist
    cdef bint has = counts_out is not None
    cdef int64_t[:, ::1] co = counts_out if has else np.zeros((1, 1), dtype=np.int64)
    cdef Tally t
    cdef Growable g
    cdef int64_t i, B, c, idx
    cdef double Na = N * a, W, x, v
    cdef uint64_t st
    with nogil:
        g.cap = 1024
        g.size = 0
        g.data = <int64_t*>malloc(g.cap * sizeof(int64_t))
        if g.data == NULL or tally_init(&t, N, N) != 0:
            with gil:
                raise MemoryError()
        for i in range(reps):
            st = rep_state(seed, <uint64_t>(rep0 + i))
            B = 0
            g.size = 0
            while B < stops_needed:
                W = Na + b + <double>B + <double>g.size
                x = next_uniform(&st) * W
                if x < b + <double>B:
                    B += 1
                    continue
                v = x - (b + <double>B)
                if v < Na:
                    c = <int64_t>(v / a)
                    if c >= N:
                        c = N - 1
                else:
                    idx = <int64_t>(v - Na)
                    if idx >= g.size:
                        idx = g.size - 1
                    c = g.data[idx]
                if grow_push(&g, c) != 0:
                    with gil:
                        raise MemoryError()
                tally_add(&t, c)
            tally_flush(&t, N, rmax, &h[i, 0], row_or_null(co, i, has))
        free(g.data)
        tally_free(&t)
    return hist


def inverse_cdf(uint64_t seed, int64_t rep0, int64_t reps, cdf):
    """``S = #{k : cdf[k] <= u}`` (capped at len - 1) for one uniform per rep."""
    cdef const double[::1] F = np.ascontiguousarray(cdf, dtype=np.float64)
    out = np.empty(reps, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef int64_t m = F.shape[0]
    cdef int64_t i, lo, hi, mid
    cdef double u
    cdef uint64_t st
    with nogil:
        for i in range(reps):
            st = rep_state(seed, <uint64_t>(rep0 + i))
            u = next_uniform(&st)
            lo = 0
            hi = m
            while lo < hi:
                mid = (lo + hi) >> 1
                if F[mid] <= u:
                    lo = mid + 1
                else:
                    hi = mid
            o[i] = lo if lo < m else m - 1
    return out


def uniforms(uint64_t seed, int64_t rep, int64_t count):
    """The first ``count`` uniforms of replicate ``rep``."""
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] o = out
    cdef uint64_t st = rep_state(seed, <uint64_t>rep)
    cdef int64_t j
    for j in range(count):
        o[j] = next_uniform(&st)
    return out
