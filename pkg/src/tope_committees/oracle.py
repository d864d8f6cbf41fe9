"""Exhaustive committee enumeration: the ground truth for every formula.

Two strategies are available.  ``sweep`` visits all ``2**N`` tope subsets
(``N`` = number of topes) in vectorised blocks: the tope set is split into
a low half of ``L`` bits and a high half, and for each fixed high part the
per-element positive counts of all ``2**L`` low parts are one numpy add.
``combinations`` walks the ``k``-subsets for a few requested sizes with
depth-first pruning.  ``kappa_sweep`` chooses between them by a cost model.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .bits import iter_bits, mask_of, popcount
from .errors import CapExceeded, IndexOutOfRange, NotACommittee
from .om import OrientedMatroid, max_positive_mask

VARIANTS = ("free", "min", "maxplus")

MAX_SWEEP_TOPES = 32
MAX_MIN_BITMAP_TOPES = 30
_LOW_BITS = 16


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------

def _as_mask(om: OrientedMatroid, K) -> int:
    if isinstance(K, int):
        if K < 0 or K >> om.num_topes:
            raise IndexOutOfRange("tope mask has bits beyond the tope list")
        return K
    K = list(K)
    for i in K:
        if not 0 <= i < om.num_topes:
            raise IndexOutOfRange(f"tope index {i} outside 0..{om.num_topes - 1}")
    return mask_of(K)


def _committee_mask(pos, K: int) -> bool:
    k = popcount(K)
    return all(2 * popcount(K & p) > k for p in pos)


def is_committee(om: OrientedMatroid, K) -> bool:
    """Strict majority of ``K`` inside every positive halfspace."""
    K = _as_mask(om, K)
    if K == 0:
        raise IndexOutOfRange("a committee candidate must be nonempty")
    return _committee_mask(om.positive_masks, K)


def is_anti_committee(om: OrientedMatroid, K) -> bool:
    K = _as_mask(om, K)
    k = popcount(K)
    return k > 0 and all(2 * popcount(K & p) < k for p in om.positive_masks)


def is_free_of_opposites(om: OrientedMatroid, K) -> bool:
    return om.is_opposite_free_mask(_as_mask(om, K))


def committee_by_split(om: OrientedMatroid, K) -> bool:
    """Committee test through the per-element split of ``K``.

    ``K`` is a committee iff for every element the pair
    ``(|K & T_e^-|, |K & T_e^+|) = (k - j, j)`` has ``ceil((k+1)/2) <= j <= k``.
    """
    K = _as_mask(om, K)
    k = popcount(K)
    lo = (k + 2) // 2
    full = om.full_mask
    for p in om.positive_masks:
        j = popcount(K & p)
        if not (lo <= j <= k and popcount(K & (full ^ p)) == k - j):
            return False
    return True


def blocks_halfspace_layers(om: OrientedMatroid, K, size: int) -> bool:
    """Does ``K`` meet every ``size``-subset of every positive halfspace?

    A set meets all ``s``-subsets of a halfspace ``H`` iff it misses at most
    ``s - 1`` members of ``H``, i.e. ``|H - K| < s``.
    """
    K = _as_mask(om, K)
    if size <= 0:
        return False
    return all(popcount(p & ~K) < size for p in om.positive_masks if popcount(p) >= size)


def is_blocking_committee(om: OrientedMatroid, K) -> bool:
    """The blocking-set characterisation of a committee.

    A ``k``-set is a committee iff it blocks every
    ``floor((N-k+1)/2)``-subset of every positive halfspace.
    """
    K = _as_mask(om, K)
    k = popcount(K)
    return blocks_halfspace_layers(om, K, (om.num_topes - k + 1) // 2)


def _proper_committee_subset(pos, K: int) -> bool:
    members = list(iter_bits(K))
    k = len(members)
    for size in range(1, k):
        if _find_committee_within(pos, members, size):
            return True
    return False


def _find_committee_within(pos, members, size) -> bool:
    need = size // 2 + 1
    t = len(pos)
    counts = [0] * t
    flags = [[p >> i & 1 for p in pos] for i in members]
    n = len(members)

    def rec(start, chosen):
        if chosen == size:
            return all(c >= need for c in counts)
        left = size - chosen
        for e in range(t):
            if counts[e] + left < need:
                return False
        for idx in range(start, n - left + 1):
            f = flags[idx]
            for e in range(t):
                counts[e] += f[e]
            hit = rec(idx + 1, chosen + 1)
            for e in range(t):
                counts[e] -= f[e]
            if hit:
                return True
        return False

    return rec(0, 0)


def is_minimal_committee(om: OrientedMatroid, K) -> bool:
    """True iff no proper nonempty subset of the committee ``K`` is a committee.

    For an ``i``-subset ``I`` and a halfspace of size ``N/2`` the blocking
    condition ``|I & T_e^+| > N/2 - floor((N-i+1)/2)`` is the same as
    ``|I & T_e^+| > i/2``: for ``N`` even, ``N/2 - floor((N-i+1)/2)``
    equals ``floor(i/2)``.  So "no proper subset blocks" reads "no proper
    subset is a committee".
    """
    K = _as_mask(om, K)
    if K == 0 or not _committee_mask(om.positive_masks, K):
        raise NotACommittee("minimality is only defined for committees")
    return not _proper_committee_subset(om.positive_masks, K)


def is_minimal_by_blocking(om: OrientedMatroid, K) -> bool:
    """Literal blocking-set form of minimality (exponential; for tests)."""
    K = _as_mask(om, K)
    if not is_blocking_committee(om, K):
        raise NotACommittee("minimality is only defined for committees")
    N = om.num_topes
    members = list(iter_bits(K))
    from itertools import combinations
    for i in range(1, len(members)):
        for combo in combinations(members, i):
            if blocks_halfspace_layers(om, mask_of(combo), (N - i + 1) // 2):
                return False
    return True


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

@dataclass
class KappaReport:
    t: int
    num_topes: int
    k_range: list
    kappa: dict
    n_star: dict
    kappa_free: dict | None = None
    kappa_min: dict | None = None
    kappa_maxplus: dict | None = None
    method: str = "brute"
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)

    def total(self, variant: str = "kappa") -> int:
        values = getattr(self, variant)
        return sum(values.values()) if values is not None else 0

    def vector(self, variant: str = "kappa") -> list:
        values = getattr(self, variant)
        return [values[k] for k in self.k_range]

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("kappa", "n_star", "kappa_free", "kappa_min", "kappa_maxplus"):
            if d[key] is not None:
                d[key] = {str(k): v for k, v in sorted(d[key].items())}
        d["totals"] = {key: self.total(key) for key in
                       ("kappa", "kappa_free", "kappa_min", "kappa_maxplus")
                       if getattr(self, key) is not None}
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "KappaReport":
        d = dict(d)
        d.pop("totals", None)
        for key in ("kappa", "n_star", "kappa_free", "kappa_min", "kappa_maxplus"):
            if d.get(key) is not None:
                d[key] = {int(k): v for k, v in d[key].items()}
        return cls(**d)

    TSV_COLUMNS = ("k", "kappa", "kappa_free", "kappa_min", "kappa_maxplus", "n_star")

    def to_tsv(self) -> str:
        lines = ["\t".join(self.TSV_COLUMNS)]
        for k in self.k_range:
            row = [k]
            for key in self.TSV_COLUMNS[1:]:
                values = getattr(self, key)
                row.append("" if values is None else values[k])
            lines.append("\t".join(str(x) for x in row))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# vectorised sweep
# ---------------------------------------------------------------------------

def _popcount_table(nbits: int) -> np.ndarray:
    table = np.zeros(1 << nbits, dtype=np.int16)
    for b in range(nbits):
        table[1 << b:1 << (b + 1)] = table[:1 << b] + 1
    return table


class _SweepContext:
    def __init__(self, om: OrientedMatroid, want_free: bool, want_maxplus: bool,
                 want_bitmap: bool):
        N = om.num_topes
        L = min(N, _LOW_BITS)
        H = N - L
        self.N, self.L, self.H = N, L, H
        low_mask = (1 << L) - 1
        self.pc_low = _popcount_table(L)
        self.pc_high = [popcount(h) for h in range(1 << H)]
        low = np.arange(1 << L, dtype=np.int64)
        self.low = low
        self.cnt_low = []
        self.cnt_high = []
        for p in om.positive_masks:
            pl = p & low_mask
            self.cnt_low.append(self.pc_low[low & pl].astype(np.int16))
            self.cnt_high.append([popcount(h & (p >> L)) for h in range(1 << H)])
        self.want_free = want_free
        self.want_maxplus = want_maxplus
        self.want_bitmap = want_bitmap
        if want_free:
            neg = om.negation
            neg_of_bit = np.array([1 << neg[i] for i in range(N)], dtype=np.int64)
            nl = np.zeros(1 << L, dtype=np.int64)
            for b in range(L):
                nl[1 << b:1 << (b + 1)] = nl[:1 << b] | neg_of_bit[b]
            self.neg_low = nl
            nh = [0] * (1 << H)
            for b in range(H):
                for h in range(1 << b, 1 << (b + 1)):
                    nh[h] = nh[h - (1 << b)] | (1 << neg[L + b])
            self.neg_high = nh
        if want_maxplus:
            mp = max_positive_mask(om)
            self.max_low_ok = (low & ~(mp & low_mask)) == 0
            self.max_high = mp >> L


def _sweep_rows(ctx: _SweepContext, h_start: int, h_stop: int):
    N, L = ctx.N, ctx.L
    comm = np.zeros(N + 1, dtype=np.int64)
    anti = np.zeros(N + 1, dtype=np.int64)
    free = np.zeros(N + 1, dtype=np.int64) if ctx.want_free else None
    maxp = np.zeros(N + 1, dtype=np.int64) if ctx.want_maxplus else None
    rows = [] if ctx.want_bitmap else None
    ne = len(ctx.cnt_low)
    for h in range(h_start, h_stop):
        size = ctx.pc_low + ctx.pc_high[h]
        is_c = None
        is_a = None
        for e in range(ne):
            twice = 2 * (ctx.cnt_low[e] + ctx.cnt_high[e][h])
            c = twice > size
            a = twice < size
            is_c = c if is_c is None else (is_c & c)
            is_a = a if is_a is None else (is_a & a)
        sc = size[is_c]
        comm += np.bincount(sc, minlength=N + 1)
        anti += np.bincount(size[is_a], minlength=N + 1)
        if free is not None:
            full = ctx.low | (h << L)
            ok = (full & (ctx.neg_low | ctx.neg_high[h])) == 0
            free += np.bincount(size[is_c & ok], minlength=N + 1)
        if maxp is not None and (h & ~ctx.max_high) == 0:
            maxp += np.bincount(size[is_c & ctx.max_low_ok], minlength=N + 1)
        if rows is not None:
            rows.append(np.packbits(is_c, bitorder="little"))
    bitmap = np.concatenate(rows) if rows else None
    return comm, anti, free, maxp, bitmap


_WORKER_CTX = None


def _worker_init(ctx):
    global _WORKER_CTX
    _WORKER_CTX = ctx


def _worker_rows(bounds):
    return _sweep_rows(_WORKER_CTX, *bounds)


def _upward_closure(bitmap: np.ndarray, nbits: int) -> np.ndarray:
    """Set bit ``S`` whenever some subset of ``S`` is set (packed, little)."""
    up = bitmap.copy()
    for j in range(nbits):
        _or_shift(up, up, j)
    return up


_IN_BYTE_MASKS = (0x55, 0x33, 0x0F)


def _or_shift(dst: np.ndarray, src: np.ndarray, j: int):
    """``dst[S | bit j] |= src[S]`` for every ``S`` without bit ``j``."""
    if j < 3:
        shifted = ((src & _IN_BYTE_MASKS[j]).astype(np.uint16) << (1 << j)).astype(np.uint8)
        dst |= shifted
    else:
        stride = 1 << (j - 3)
        d = dst.reshape(-1, 2, stride)
        s = src.reshape(-1, 2, stride)
        d[:, 1, :] |= s[:, 0, :]


def _minimal_counts(bitmap: np.ndarray, N: int, ctx: _SweepContext) -> np.ndarray:
    up = _upward_closure(bitmap, N)
    below = np.zeros_like(bitmap)
    for j in range(N):
        _or_shift(below, up, j)
    minimal = bitmap & ~below
    counts = np.zeros(N + 1, dtype=np.int64)
    row_bytes = (1 << ctx.L) // 8
    for h in range(1 << ctx.H):
        row = np.unpackbits(minimal[h * row_bytes:(h + 1) * row_bytes], bitorder="little")
        row = row[:1 << ctx.L].astype(bool)
        size = ctx.pc_low + ctx.pc_high[h]
        counts += np.bincount(size[row], minlength=N + 1)
    return counts


def sweep_counts(om: OrientedMatroid, variants=(), workers: int = 1) -> dict:
    """All per-size counts from one pass over the ``2**N`` subsets."""
    N = om.num_topes
    if N > MAX_SWEEP_TOPES:
        raise CapExceeded("sweep_topes", MAX_SWEEP_TOPES, N)
    want_min = "min" in variants
    if want_min and (N > MAX_MIN_BITMAP_TOPES or N < 3):
        raise CapExceeded("min_bitmap_topes", MAX_MIN_BITMAP_TOPES, N)
    ctx = _SweepContext(om, "free" in variants, "maxplus" in variants, want_min)
    nrows = 1 << ctx.H
    if workers <= 1 or nrows < 2:
        parts = [_sweep_rows(ctx, 0, nrows)]
    else:
        step = -(-nrows // (4 * workers))
        chunks = [(s, min(s + step, nrows)) for s in range(0, nrows, step)]
        with ProcessPoolExecutor(max_workers=workers, initializer=_worker_init,
                                 initargs=(ctx,)) as ex:
            parts = list(ex.map(_worker_rows, chunks))
    out = {"kappa": sum(p[0] for p in parts), "anti": sum(p[1] for p in parts)}
    if ctx.want_free:
        out["kappa_free"] = sum(p[2] for p in parts)
    if ctx.want_maxplus:
        out["kappa_maxplus"] = sum(p[3] for p in parts)
    if want_min:
        bitmap = np.concatenate([p[4] for p in parts])
        out["kappa_min"] = _minimal_counts(bitmap, N, ctx)
    return {key: [int(x) for x in val] for key, val in out.items()}


# ---------------------------------------------------------------------------
# per-k enumeration
# ---------------------------------------------------------------------------

def committees_of_size(om: OrientedMatroid, k: int, halfspaces=None):
    """Yield the masks of all ``k``-committees, pruning hopeless branches.

    ``halfspaces`` overrides the positive halfspaces; passing the negative
    ones enumerates anti-committees.
    """
    pos = list(om.positive_masks if halfspaces is None else halfspaces)
    N = om.num_topes
    t = len(pos)
    need = k // 2 + 1
    flags = [[p >> i & 1 for p in pos] for i in range(N)]
    # suffix[i][e] = positives of element e among topes i..N-1
    suffix = [[0] * t for _ in range(N + 1)]
    for i in range(N - 1, -1, -1):
        suffix[i] = [suffix[i + 1][e] + flags[i][e] for e in range(t)]
    counts = [0] * t

    def rec(start, chosen, mask):
        if chosen == k:
            if all(c >= need for c in counts):
                yield mask
            return
        left = k - chosen
        for idx in range(start, N - left + 1):
            ok = True
            for e in range(t):
                if counts[e] + min(left, suffix[idx][e]) < need:
                    ok = False
                    break
            if not ok:
                return
            f = flags[idx]
            for e in range(t):
                counts[e] += f[e]
            yield from rec(idx + 1, chosen + 1, mask | (1 << idx))
            for e in range(t):
                counts[e] -= f[e]

    if 1 <= k <= N:
        yield from rec(0, 0, 0)


def _combination_counts(om: OrientedMatroid, ks, variants) -> dict:
    full = om.full_mask
    negs = [full ^ p for p in om.positive_masks]
    maxmask = max_positive_mask(om) if "maxplus" in variants else None
    out = {"kappa": {}, "anti": {}}
    for v in variants:
        out["kappa_" + v] = {}
    for k in ks:
        c = f = mn = mp = 0
        for K in committees_of_size(om, k):
            c += 1
            if "free" in variants and om.is_opposite_free_mask(K):
                f += 1
            if "maxplus" in variants and K & ~maxmask == 0:
                mp += 1
            if "min" in variants and not _proper_committee_subset(om.positive_masks, K):
                mn += 1
        out["kappa"][k] = c
        out["anti"][k] = sum(1 for _ in committees_of_size(om, k, negs))
        if "free" in variants:
            out["kappa_free"][k] = f
        if "min" in variants:
            out["kappa_min"][k] = mn
        if "maxplus" in variants:
            out["kappa_maxplus"][k] = mp
    return out


# ---------------------------------------------------------------------------
# public entry point
# ---------------------------------------------------------------------------

def choose_strategy(num_topes: int, ks) -> str:
    if num_topes > MAX_SWEEP_TOPES:
        return "combinations"
    work = sum(math.comb(num_topes, k) for k in ks)
    return "combinations" if 64 * work < (1 << num_topes) else "sweep"


def kappa_sweep(om: OrientedMatroid, k_range=None, variants=(), strategy: str = "auto",
                workers: int | None = 1) -> KappaReport:
    """Exact committee counts per size, by exhaustive enumeration.

    ``variants`` is any subset of ``{"free", "min", "maxplus"}``.  The
    plain count ``kappa`` and the count ``n_star`` of sets that are neither
    committees nor anti-committees are always reported.
    """
    N = om.num_topes
    ks = list(range(1, N)) if k_range is None else sorted(set(k_range))
    for k in ks:
        if not 1 <= k <= N - 1:
            raise ValueError(f"k={k} outside 1..{N - 1}")
    variants = tuple(v for v in VARIANTS if v in set(variants))
    if strategy == "auto":
        strategy = choose_strategy(N, ks)
    if workers is None:
        workers = os.cpu_count() or 1
    start = time.perf_counter()
    if strategy == "sweep":
        raw = sweep_counts(om, variants, workers)
        counts = {key: {k: val[k] for k in ks} for key, val in raw.items()}
    elif strategy == "combinations":
        counts = _combination_counts(om, ks, variants)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    elapsed = time.perf_counter() - start
    kappa = counts["kappa"]
    anti = counts["anti"]
    n_star = {k: math.comb(N, k) - kappa[k] - anti[k] for k in ks}
    return KappaReport(
        t=om.t, num_topes=N, k_range=ks, kappa=kappa, n_star=n_star,
        kappa_free=counts.get("kappa_free"), kappa_min=counts.get("kappa_min"),
        kappa_maxplus=counts.get("kappa_maxplus"), method=f"brute-{strategy}",
        elapsed=elapsed, extra={"anti": {str(k): anti[k] for k in ks}},
    )
