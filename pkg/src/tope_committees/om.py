"""Tope sets of simple oriented matroids: parsing, validation, halfspaces.

An oriented matroid is given entirely by its list of topes.  Each tope is a
full-support sign vector over the ground set ``{1..t}``; we store only its
positive part.  Tope subsets are packed into integers (bit ``i`` is the
tope with 0-based index ``i``), which turns halfspace intersections into
``&`` and a popcount.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

from .bits import iter_bits, mask_of, popcount
from .errors import (
    DuplicateTope,
    ElementOutOfRange,
    MalformedLine,
    SymmetryViolation,
    ValidationFailure,
)

_MINUS = {"-", "−"}


@dataclass(frozen=True, order=True)
class SignVector:
    """A full-support sign vector of length ``t``."""

    t: int
    positives: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "positives", frozenset(self.positives))
        if self.t < 1:
            raise ValueError("sign vector length must be positive")
        bad = [e for e in self.positives if not 1 <= e <= self.t]
        if bad:
            raise ElementOutOfRange(f"elements {sorted(bad)} outside 1..{self.t}")

    @classmethod
    def from_string(cls, s: str) -> "SignVector":
        s = "".join(s.split())
        pos = []
        for i, ch in enumerate(s, start=1):
            if ch == "+":
                pos.append(i)
            elif ch not in _MINUS:
                raise MalformedLine(f"bad sign character {ch!r} in {s!r}")
        return cls(len(s), frozenset(pos))

    @classmethod
    def from_mask(cls, t: int, mask: int) -> "SignVector":
        return cls(t, frozenset(i + 1 for i in iter_bits(mask)))

    @property
    def mask(self) -> int:
        """Positive part as an element mask (bit ``e-1`` for element ``e``)."""
        return mask_of(e - 1 for e in self.positives)

    def __getitem__(self, e: int) -> str:
        if not 1 <= e <= self.t:
            raise ElementOutOfRange(f"element {e} outside 1..{self.t}")
        return "+" if e in self.positives else "-"

    def __neg__(self) -> "SignVector":
        return SignVector(self.t, frozenset(range(1, self.t + 1)) - self.positives)

    def reoriented(self, S) -> "SignVector":
        return SignVector(self.t, self.positives.symmetric_difference(S))

    def __str__(self) -> str:
        return "".join("+" if e in self.positives else "-" for e in range(1, self.t + 1))

    def __repr__(self) -> str:
        return f"SignVector({str(self)!r})"


@dataclass(frozen=True)
class Halfspace:
    element: int
    sign: str
    members: frozenset
    mask: int

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class Violation:
    kind: str  # "symmetry" | "simplicity" | "acyclic"
    message: str
    elements: tuple = ()
    topes: tuple = ()

    def __str__(self):
        return f"{self.kind}: {self.message}"


class OrientedMatroid:
    """Ground-set size plus an ordered list of distinct topes.

    Construction only checks structure (lengths, duplicates); the oriented
    matroid conditions are reported by :func:`validate`.  Instances are
    immutable and safe to share between workers.
    """

    def __init__(self, t: int, topes):
        topes = tuple(SignVector.from_string(x) if isinstance(x, str) else x for x in topes)
        if t < 1:
            raise ValueError("ground set must be nonempty")
        for T in topes:
            if T.t != t:
                raise MalformedLine(f"tope {T} has length {T.t}, expected {t}")
        seen = {}
        for i, T in enumerate(topes):
            if T in seen:
                raise DuplicateTope(f"tope {T} listed at rows {seen[T]} and {i}")
            seen[T] = i
        self._t = t
        self._topes = topes
        self._index = seen
        self._tope_masks = tuple(T.mask for T in topes)
        pos = [0] * t
        for i, m in enumerate(self._tope_masks):
            for e in iter_bits(m):
                pos[e] |= 1 << i
        self._pos = tuple(pos)
        self._neg_index = tuple(seen.get(-T, -1) for T in topes)

    # -- basic accessors -------------------------------------------------
    @property
    def t(self) -> int:
        return self._t

    @property
    def topes(self) -> tuple:
        return self._topes

    @property
    def num_topes(self) -> int:
        return len(self._topes)

    @property
    def full_mask(self) -> int:
        return (1 << len(self._topes)) - 1

    @property
    def positive_masks(self) -> tuple:
        """Tope masks of the positive halfspaces, indexed by element - 1."""
        return self._pos

    @property
    def tope_masks(self) -> tuple:
        """Element masks of the positive parts, indexed by tope."""
        return self._tope_masks

    @property
    def negation(self) -> tuple:
        """``negation[i]`` is the index of ``-topes[i]``, or -1 if absent."""
        return self._neg_index

    def index(self, T) -> int:
        if isinstance(T, str):
            T = SignVector.from_string(T)
        return self._index[T]

    def indices(self, topes) -> frozenset:
        return frozenset(self.index(T) for T in topes)

    def mask_of_topes(self, topes) -> int:
        return mask_of(self.index(T) for T in topes)

    def negate_mask(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            j = self._neg_index[i]
            if j < 0:
                raise SymmetryViolation(f"negation of {self._topes[i]} is not a tope")
            out |= 1 << j
        return out

    def is_opposite_free_mask(self, mask: int) -> bool:
        for i in iter_bits(mask):
            j = self._neg_index[i]
            if j >= 0 and mask >> j & 1:
                return False
        return True

    def describe(self, mask: int) -> list:
        """Sign strings of the topes in ``mask`` (file order)."""
        return [str(self._topes[i]) for i in iter_bits(mask)]

    # -- equality / display ----------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, OrientedMatroid):
            return NotImplemented
        return self._t == other._t and self._topes == other._topes

    def __hash__(self):
        return hash((self._t, self._topes))

    def __repr__(self):
        return f"OrientedMatroid(t={self._t}, num_topes={len(self._topes)})"


def parse_topes(text) -> OrientedMatroid:
    """Read the ``.topes`` text format.

    ``text`` may be a string or a readable text stream.  ``symmetry half``
    files list one tope of each opposite pair; their negations are appended
    after the listed rows, in the same order.
    """
    if not isinstance(text, str):
        text = text.read()
    t = None
    symmetry = None
    rows = []
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head = line.split()
        if head[0] == "t" and t is None:
            if len(head) != 2 or not head[1].isdigit() or int(head[1]) < 1:
                raise MalformedLine(f"line {lineno}: expected 't <int>'")
            t = int(head[1])
            continue
        if head[0] == "symmetry" and symmetry is None:
            if len(head) != 2 or head[1] not in ("full", "half"):
                raise MalformedLine(f"line {lineno}: expected 'symmetry full|half'")
            symmetry = head[1]
            continue
        if t is None or symmetry is None:
            raise MalformedLine(f"line {lineno}: header 't <int>' and 'symmetry' must precede topes")
        try:
            T = SignVector.from_string(line)
        except MalformedLine as exc:
            raise MalformedLine(f"line {lineno}: {exc}") from None
        if T.t != t:
            raise MalformedLine(f"line {lineno}: tope has length {T.t}, expected {t}")
        rows.append(T)
    if t is None or symmetry is None:
        raise MalformedLine("missing 't' or 'symmetry' header")

    seen = set()
    for T in rows:
        if T in seen:
            raise DuplicateTope(f"tope {T} listed twice")
        seen.add(T)
    if symmetry == "half":
        for T in rows:
            if -T in seen:
                raise SymmetryViolation(f"half listing contains both {T} and {-T}")
        rows = rows + [-T for T in rows]
    else:
        for T in rows:
            if -T not in seen:
                raise SymmetryViolation(f"negation of {T} is missing")

    om = OrientedMatroid(t, rows)
    violations = validate(om)
    if violations:
        raise ValidationFailure(violations)
    return om


def format_topes(om: OrientedMatroid, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"t {om.t}")
    lines.append("symmetry full")
    lines.extend(str(T) for T in om.topes)
    return "\n".join(lines) + "\n"


def validate(om: OrientedMatroid) -> list:
    """Check the cheap necessary conditions; return a list of violations.

    Only symmetry ``T = -T``, column simplicity and non-acyclicity are
    checked.  The full oriented matroid axioms are taken on trust.
    """
    out = []
    for i, T in enumerate(om.topes):
        if om.negation[i] < 0:
            out.append(Violation("symmetry", f"negation of {T} is missing", topes=(str(T),)))
    cols = om.positive_masks
    full = om.full_mask
    for e in range(om.t):
        for f in range(e + 1, om.t):
            if cols[e] == cols[f]:
                out.append(Violation("simplicity", f"elements {e + 1} and {f + 1} are parallel",
                                     elements=(e + 1, f + 1)))
            elif cols[e] == full ^ cols[f]:
                out.append(Violation("simplicity", f"elements {e + 1} and {f + 1} are antiparallel",
                                     elements=(e + 1, f + 1)))
    plus = SignVector(om.t, frozenset(range(1, om.t + 1)))
    if plus in om._index:
        out.append(Violation("acyclic", f"all-plus tope {plus} is present", topes=(str(plus),)))
    return out


def halfspace(om: OrientedMatroid, e: int, sign: str = "+") -> Halfspace:
    if not 1 <= e <= om.t:
        raise ElementOutOfRange(f"element {e} outside 1..{om.t}")
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    mask = om.positive_masks[e - 1]
    if sign == "-":
        mask = om.full_mask ^ mask
    return Halfspace(e, sign, frozenset(iter_bits(mask)), mask)


def reorient(om: OrientedMatroid, S) -> OrientedMatroid:
    S = frozenset(S)
    bad = [e for e in S if not 1 <= e <= om.t]
    if bad:
        raise ElementOutOfRange(f"elements {sorted(bad)} outside 1..{om.t}")
    return OrientedMatroid(om.t, [T.reoriented(S) for T in om.topes])


def max_positive_topes(om: OrientedMatroid) -> frozenset:
    """Indices of topes whose positive part is inclusion-maximal."""
    parts = om.tope_masks
    out = []
    for i, p in enumerate(parts):
        if not any(q != p and p & q == p for q in parts):
            out.append(i)
    return frozenset(out)


def max_positive_mask(om: OrientedMatroid) -> int:
    return mask_of(max_positive_topes(om))


def halfspace_sizes(om: OrientedMatroid) -> list:
    return [popcount(m) for m in om.positive_masks]
