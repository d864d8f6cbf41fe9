"""Small helpers for finite sets packed into Python integers.

Bit ``i`` of a mask stands for the 0-based item ``i``.  Python integers are
unbounded, so masks over more than 64 items simply become multi-word
integers; only the vectorised sweep in :mod:`tope_committees.oracle` is
limited to 63 items.
"""

from itertools import combinations


def popcount(x: int) -> int:
    return x.bit_count()


def iter_bits(x: int):
    """Yield the indices of the set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def bits(x: int) -> list:
    return list(iter_bits(x))


def mask_of(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def submasks(x: int):
    """Yield every submask of ``x``, from ``x`` itself down to 0."""
    s = x
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & x


def proper_submasks(x: int):
    """Submasks of ``x`` other than ``x`` itself (0 included)."""
    if x == 0:
        return
    s = (x - 1) & x
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & x


def k_subsets(x: int, k: int):
    """Yield the submasks of ``x`` with exactly ``k`` bits."""
    for combo in combinations(bits(x), k):
        yield mask_of(combo)


def to_set(x: int, offset: int = 1) -> frozenset:
    """Convert a mask to a frozenset of ``offset``-based indices."""
    return frozenset(i + offset for i in iter_bits(x))


def from_set(items, offset: int = 1) -> int:
    return mask_of(i - offset for i in items)
