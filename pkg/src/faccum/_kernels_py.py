"""Pure-Python twin of the compiled kernels.

Same signatures, same per-replicate SplitMix64 streams and the same
floating-point operations, so outputs agree exactly with ``_kernels``.
Random words are produced in numpy blocks; the sampling loops are plain
Python and therefore slow.
"""

from __future__ import annotations

import numpy as np

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
STREAM = 0xD1B54A32D192ED03
TWO_M53 = 1.0 / 9007199254740992.0
_BLOCK = 4096


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def _mix64_array(z):
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def rep_state(seed: int, rep: int) -> int:
    return mix64(mix64(seed) ^ ((rep * STREAM) & MASK))


class Stream:
    """Counter-based uniforms: the j-th draw is ``mix64(state0 + j * GOLDEN)``."""

    def __init__(self, seed: int, rep: int):
        self._base = rep_state(seed & MASK, rep)
        self._done = 0
        self._buf: list = []
        self._pos = 0

    def _refill(self):
        j = np.arange(self._done + 1, self._done + _BLOCK + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            words = _mix64_array(np.uint64(self._base) + j * np.uint64(GOLDEN))
        self._buf = ((words >> np.uint64(11)).astype(np.float64) * TWO_M53).tolist()
        self._pos = 0
        self._done += _BLOCK

    def uniform(self) -> float:
        if self._pos == len(self._buf):
            self._refill()
        u = self._buf[self._pos]
        self._pos += 1
        return u

    def take(self, m: int) -> np.ndarray:
        return np.array([self.uniform() for _ in range(m)], dtype=np.float64)

    def below(self, m: int) -> int:
        v = int(self.uniform() * float(m))
        return v if v < m else m - 1


def _outputs(reps, N, rmax, counts_out):
    hist = np.zeros((reps, rmax + 1), dtype=np.int64)
    if counts_out is not None:
        if counts_out.shape != (reps, N) or counts_out.dtype != np.int64:
            raise ValueError("counts_out must be an int64 array of shape (reps, N)")
        counts_out[...] = 0
    return hist


def _flush(counts: dict, N, rmax, hist_row, counts_row):
    hist_row[0] += N - len(counts)
    for lab, c in counts.items():
        if c <= rmax:
            hist_row[c] += 1
        if counts_row is not None:
            counts_row[lab] = c


def _run(seed, rep0, reps, N, rmax, counts_out, draw):
    hist = _outputs(reps, N, rmax, counts_out)
    for i in range(reps):
        counts: dict = {}
        for lab in draw(Stream(seed, rep0 + i)):
            counts[lab] = counts.get(lab, 0) + 1
        _flush(counts, N, rmax, hist[i], None if counts_out is None else counts_out[i])
    return hist


def occupancy_distinct(seed, rep0, reps, n, N, rmax, counts_out=None):
    def draw(st):
        for _ in range(n):
            yield st.below(N)

    return _run(seed, rep0, reps, N, rmax, counts_out, draw)


def occupancy_indistinct(seed, rep0, reps, n, N, rmax, counts_out=None):
    M = n + N - 1

    def draw(st):
        taken = set()
        for j in range(M - n, M):
            k = st.below(j + 1)
            taken.add(j if k in taken else k)
        for idx, pos in enumerate(sorted(taken)):
            yield pos - idx

    return _run(seed, rep0, reps, N, rmax, counts_out, draw)


def occupancy_coloured(seed, rep0, reps, n, N, M, rmax, counts_out=None):
    if n > N * M:
        raise ValueError("n exceeds the number of balls")
    top = 1
    while top * 2 <= N:
        top *= 2

    def draw(st):
        fen = [0] + [M * (j & -j) for j in range(1, N + 1)]
        remaining = N * M
        for _ in range(n):
            x = st.below(remaining)
            pos, step = 0, top
            while step > 0:
                if pos + step <= N and fen[pos + step] <= x:
                    pos += step
                    x -= fen[pos]
                step >>= 1
            yield pos
            x = pos + 1
            while x <= N:
                fen[x] -= 1
                x += x & -x
            remaining -= 1

    return _run(seed, rep0, reps, N, rmax, counts_out, draw)


def occupancy_forest(seed, rep0, reps, n, N, rmax, counts_out=None):
    V = N + n

    def draw(st):
        nxt = [0] * V
        in_tree = [v < N for v in range(V)]
        label = [v if v < N else -1 for v in range(V)]
        for v in range(N, V):
            u = v
            while not in_tree[u]:
                w = st.below(V - 1)
                if w >= u:
                    w += 1
                nxt[u] = w
                u = w
            u = v
            while not in_tree[u]:
                in_tree[u] = True
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
            yield root

    return _run(seed, rep0, reps, N, rmax, counts_out, draw)


def occupancy_negmulti(seed, rep0, reps, n, N, p, rmax, counts_out=None):
    p = float(p)
    if not (p > 0 and N * p < 1):
        raise ValueError("need p > 0 and N p < 1")
    Np = float(N) * p

    def draw(st):
        stops = 0
        while stops <= n:
            u = st.uniform()
            if u < Np:
                c = int(u / p)
                yield c if c < N else N - 1
            else:
                stops += 1

    return _run(seed, rep0, reps, N, rmax, counts_out, draw)


def occupancy_dirichlet(seed, rep0, reps, n, N, a, b, rmax, counts_out=None, black_stops=None):
    a, b = float(a), float(b)
    if not (a > 0 and b > 0):
        raise ValueError("need a > 0 and b > 0")
    need = n + 1 if black_stops is None else int(black_stops)
    Na = float(N) * a

    def draw(st):
        B = 0
        drawn = []
        while B < need:
            W = Na + b + float(B) + float(len(drawn))
            x = st.uniform() * W
            if x < b + float(B):
                B += 1
                continue
            v = x - (b + float(B))
            if v < Na:
                c = int(v / a)
                if c >= N:
                    c = N - 1
            else:
                idx = int(v - Na)
                c = drawn[min(idx, len(drawn) - 1)]
            drawn.append(c)
            yield c

    return _run(seed, rep0, reps, N, rmax, counts_out, draw)


def inverse_cdf(seed, rep0, reps, cdf):
    F = np.ascontiguousarray(cdf, dtype=np.float64)
    u = np.array([Stream(seed, rep0 + i).uniform() for i in range(reps)], dtype=np.float64)
    return np.minimum(np.searchsorted(F, u, side="right"), len(F) - 1).astype(np.int64)


def uniforms(seed, rep, count):
    st = Stream(seed, rep)
    return np.array([st.uniform() for _ in range(count)], dtype=np.float64)
