"""Functional DES core: bit domains, fixed-width words, the standard tables,
and a straight-line implementation used as the correctness reference for the
circuit model.

Words use the FIPS bit convention: positions are 1-based, most significant
first.  Two value domains are supported: the concrete domain with bits {0, 1}
and the abstract domain whose bit type holds a single value, which collapses
every word of a given width to one value and every word function to a
constant map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce


class DesError(ValueError):
    """Contract violation in a word or table operation."""


# ---------------------------------------------------------------------------
# Bit domains

@dataclass(frozen=True)
class BitDomain:
    """Value domain for wires: 'concrete' bits {0,1} or the one-value
    'abstract' bit."""

    kind: str  # "concrete" | "abstract"

    @property
    def values(self):
        return (0, 1) if self.kind == "concrete" else (0,)

    def xor(self, a, b):
        if self.kind == "concrete":
            return a ^ b
        return 0

    def word(self, width, value=0):
        if self.kind == "abstract":
            return Word("abstract", width, None)
        if not 0 <= value < (1 << width):
            raise DesError("value %r out of range for width %d" % (value, width))
        return Word("concrete", width, value)

    def enumerate_words(self, width):
        """All words of a width, or None when the domain is too large to
        enumerate (concrete words of any width)."""
        if self.kind == "abstract":
            return (Word("abstract", width, None),)
        return None


CONCRETE = BitDomain("concrete")
ABSTRACT = BitDomain("abstract")

WORD_WIDTHS = (4, 6, 28, 32, 48, 56, 64)


@dataclass(frozen=True)
class Word:
    """Fixed-width bit word.  In the abstract domain ``value`` is None and
    all words of equal width compare equal."""

    domain: str
    width: int
    value: int | None

    def __post_init__(self):
        if self.domain == "concrete" and not 0 <= self.value < (1 << self.width):
            raise DesError("word value out of range")

    def bit(self, i):
        """Bit at 1-based position i, position 1 being the most significant."""
        if not 1 <= i <= self.width:
            raise DesError("bit index %d outside 1..%d" % (i, self.width))
        if self.domain == "abstract":
            return 0
        return (self.value >> (self.width - i)) & 1

    def is_abstract(self):
        return self.domain == "abstract"


def _dom(w: Word) -> BitDomain:
    return ABSTRACT if w.domain == "abstract" else CONCRETE


def xor_words(a: Word, b: Word) -> Word:
    if a.width != b.width or a.domain != b.domain:
        raise DesError("xor on mismatched words")
    if a.domain == "abstract":
        return a
    return Word("concrete", a.width, a.value ^ b.value)


def concat(a: Word, b: Word) -> Word:
    if a.domain != b.domain:
        raise DesError("concat on mismatched domains")
    if a.domain == "abstract":
        return Word("abstract", a.width + b.width, None)
    return Word("concrete", a.width + b.width, (a.value << b.width) | b.value)


def split(w: Word, left_width: int) -> tuple[Word, Word]:
    if not 0 < left_width < w.width:
        raise DesError("bad split width")
    right_width = w.width - left_width
    if w.domain == "abstract":
        return Word("abstract", left_width, None), Word("abstract", right_width, None)
    return (Word("concrete", left_width, w.value >> right_width),
            Word("concrete", right_width, w.value & ((1 << right_width) - 1)))


def subword(w: Word, start: int, width: int) -> Word:
    """Contiguous field of ``width`` bits beginning at 1-based position
    ``start``."""
    if start < 1 or start + width - 1 > w.width:
        raise DesError("subword out of range")
    if w.domain == "abstract":
        return Word("abstract", width, None)
    shift = w.width - (start + width - 1)
    return Word("concrete", width, (w.value >> shift) & ((1 << width) - 1))


def rotate(w: Word, count: int, left: bool) -> Word:
    if w.domain == "abstract":
        return w
    n = count % w.width
    if not left:
        n = (w.width - n) % w.width
    mask = (1 << w.width) - 1
    return Word("concrete", w.width, ((w.value << n) | (w.value >> (w.width - n))) & mask)


# ---------------------------------------------------------------------------
# Tables (FIPS-46-3).  Tables are data, validated below; the bit-selection
# semantics lives in permute() alone.

@dataclass(frozen=True)
class PermutationTable:
    name: str
    in_width: int
    out_width: int
    entries: tuple = ()

    def __post_init__(self):
        if len(self.entries) != self.out_width:
            raise DesError("%s: %d entries for out width %d"
                           % (self.name, len(self.entries), self.out_width))
        for e in self.entries:
            if not 1 <= e <= self.in_width:
                raise DesError("%s: entry %d outside 1..%d"
                               % (self.name, e, self.in_width))


def _table(name, in_width, rows):
    entries = tuple(e for row in rows for e in row)
    return PermutationTable(name, in_width, len(entries), entries)


IP = _table("IP", 64, [
    (58, 50, 42, 34, 26, 18, 10, 2),
    (60, 52, 44, 36, 28, 20, 12, 4),
    (62, 54, 46, 38, 30, 22, 14, 6),
    (64, 56, 48, 40, 32, 24, 16, 8),
    (57, 49, 41, 33, 25, 17, 9, 1),
    (59, 51, 43, 35, 27, 19, 11, 3),
    (61, 53, 45, 37, 29, 21, 13, 5),
    (63, 55, 47, 39, 31, 23, 15, 7),
])

FP = _table("FP", 64, [
    (40, 8, 48, 16, 56, 24, 64, 32),
    (39, 7, 47, 15, 55, 23, 63, 31),
    (38, 6, 46, 14, 54, 22, 62, 30),
    (37, 5, 45, 13, 53, 21, 61, 29),
    (36, 4, 44, 12, 52, 20, 60, 28),
    (35, 3, 43, 11, 51, 19, 59, 27),
    (34, 2, 42, 10, 50, 18, 58, 26),
    (33, 1, 41, 9, 49, 17, 57, 25),
])

E = _table("E", 32, [
    (32, 1, 2, 3, 4, 5),
    (4, 5, 6, 7, 8, 9),
    (8, 9, 10, 11, 12, 13),
    (12, 13, 14, 15, 16, 17),
    (16, 17, 18, 19, 20, 21),
    (20, 21, 22, 23, 24, 25),
    (24, 25, 26, 27, 28, 29),
    (28, 29, 30, 31, 32, 1),
])

P = _table("P", 32, [
    (16, 7, 20, 21),
    (29, 12, 28, 17),
    (1, 15, 23, 26),
    (5, 18, 31, 10),
    (2, 8, 24, 14),
    (32, 27, 3, 9),
    (19, 13, 30, 6),
    (22, 11, 4, 25),
])

PC1 = _table("PC1", 64, [
    (57, 49, 41, 33, 25, 17, 9),
    (1, 58, 50, 42, 34, 26, 18),
    (10, 2, 59, 51, 43, 35, 27),
    (19, 11, 3, 60, 52, 44, 36),
    (63, 55, 47, 39, 31, 23, 15),
    (7, 62, 54, 46, 38, 30, 22),
    (14, 6, 61, 53, 45, 37, 29),
    (21, 13, 5, 28, 20, 12, 4),
])

PC2 = _table("PC2", 56, [
    (14, 17, 11, 24, 1, 5),
    (3, 28, 15, 6, 21, 10),
    (23, 19, 12, 4, 26, 8),
    (16, 7, 27, 20, 13, 2),
    (41, 52, 31, 37, 47, 55),
    (30, 40, 51, 45, 33, 48),
    (44, 49, 39, 56, 34, 53),
    (46, 42, 50, 36, 29, 32),
])

TABLES = {t.name: t for t in (IP, FP, E, P, PC1, PC2)}


@dataclass(frozen=True)
class SBoxTable:
    index: int
    rows: tuple  # 4 rows of 16 four-bit values

    def __post_init__(self):
        if len(self.rows) != 4 or any(len(r) != 16 for r in self.rows):
            raise DesError("S-box %d must be 4x16" % self.index)
        for row in self.rows:
            if sorted(row) != list(range(16)):
                raise DesError("S-box %d row is not a permutation of 0..15"
                               % self.index)


SBOXES = (
    SBoxTable(1, (
        (14, 4, 13, 1, 2, 15, 11, 8, 3, 10, 6, 12, 5, 9, 0, 7),
        (0, 15, 7, 4, 14, 2, 13, 1, 10, 6, 12, 11, 9, 5, 3, 8),
        (4, 1, 14, 8, 13, 6, 2, 11, 15, 12, 9, 7, 3, 10, 5, 0),
        (15, 12, 8, 2, 4, 9, 1, 7, 5, 11, 3, 14, 10, 0, 6, 13))),
    SBoxTable(2, (
        (15, 1, 8, 14, 6, 11, 3, 4, 9, 7, 2, 13, 12, 0, 5, 10),
        (3, 13, 4, 7, 15, 2, 8, 14, 12, 0, 1, 10, 6, 9, 11, 5),
        (0, 14, 7, 11, 10, 4, 13, 1, 5, 8, 12, 6, 9, 3, 2, 15),
        (13, 8, 10, 1, 3, 15, 4, 2, 11, 6, 7, 12, 0, 5, 14, 9))),
    SBoxTable(3, (
        (10, 0, 9, 14, 6, 3, 15, 5, 1, 13, 12, 7, 11, 4, 2, 8),
        (13, 7, 0, 9, 3, 4, 6, 10, 2, 8, 5, 14, 12, 11, 15, 1),
        (13, 6, 4, 9, 8, 15, 3, 0, 11, 1, 2, 12, 5, 10, 14, 7),
        (1, 10, 13, 0, 6, 9, 8, 7, 4, 15, 14, 3, 11, 5, 2, 12))),
    SBoxTable(4, (
        (7, 13, 14, 3, 0, 6, 9, 10, 1, 2, 8, 5, 11, 12, 4, 15),
        (13, 8, 11, 5, 6, 15, 0, 3, 4, 7, 2, 12, 1, 10, 14, 9),
        (10, 6, 9, 0, 12, 11, 7, 13, 15, 1, 3, 14, 5, 2, 8, 4),
        (3, 15, 0, 6, 10, 1, 13, 8, 9, 4, 5, 11, 12, 7, 2, 14))),
    SBoxTable(5, (
        (2, 12, 4, 1, 7, 10, 11, 6, 8, 5, 3, 15, 13, 0, 14, 9),
        (14, 11, 2, 12, 4, 7, 13, 1, 5, 0, 15, 10, 3, 9, 8, 6),
        (4, 2, 1, 11, 10, 13, 7, 8, 15, 9, 12, 5, 6, 3, 0, 14),
        (11, 8, 12, 7, 1, 14, 2, 13, 6, 15, 0, 9, 10, 4, 5, 3))),
    SBoxTable(6, (
        (12, 1, 10, 15, 9, 2, 6, 8, 0, 13, 3, 4, 14, 7, 5, 11),
        (10, 15, 4, 2, 7, 12, 9, 5, 6, 1, 13, 14, 0, 11, 3, 8),
        (9, 14, 15, 5, 2, 8, 12, 3, 7, 0, 4, 10, 1, 13, 11, 6),
        (4, 3, 2, 12, 9, 5, 15, 10, 11, 14, 1, 7, 6, 0, 8, 13))),
    SBoxTable(7, (
        (4, 11, 2, 14, 15, 0, 8, 13, 3, 12, 9, 7, 5, 10, 6, 1),
        (13, 0, 11, 7, 4, 9, 1, 10, 14, 3, 5, 12, 2, 15, 8, 6),
        (1, 4, 11, 13, 12, 3, 7, 14, 10, 15, 6, 8, 0, 5, 9, 2),
        (6, 11, 13, 8, 1, 4, 10, 7, 9, 5, 0, 15, 14, 2, 3, 12))),
    SBoxTable(8, (
        (13, 2, 8, 4, 6, 15, 11, 1, 10, 9, 3, 14, 5, 0, 12, 7),
        (1, 15, 13, 8, 10, 3, 7, 4, 12, 5, 6, 11, 0, 14, 9, 2),
        (7, 11, 4, 1, 9, 12, 14, 2, 0, 6, 10, 13, 15, 3, 5, 8),
        (2, 1, 14, 7, 4, 10, 8, 13, 15, 12, 9, 0, 3, 5, 6, 11))),
)


@dataclass(frozen=True)
class ShiftSchedule:
    """Per-round rotation counts; the rotation direction is derived from the
    crypt flag (left when encrypting, right when decrypting)."""

    shifts: tuple = (1, 1, 2, 2, 2, 2, 2, 2, 1, 2, 2, 2, 2, 2, 2, 1)

    def __post_init__(self):
        if len(self.shifts) != 16 or any(s not in (1, 2) for s in self.shifts):
            raise DesError("shift schedule must be 16 counts in {1,2}")

    def commands(self, encrypt: bool):
        """The 16 per-round (count, left) rotation commands.

        Encryption rotates left by the schedule.  Decryption rotates right;
        because the registers are reloaded for every run, round n must leave
        the registers holding C/D of encryption round 17-n, which the right
        rotations (0, s16, s15, ..., s2) achieve (the total left shift is 28,
        so the unshifted load already equals the final encryption state).
        """
        if encrypt:
            return tuple((s, True) for s in self.shifts)
        counts = (0,) + tuple(reversed(self.shifts[1:]))
        return tuple((s, False) for s in counts)


SHIFT_SCHEDULE = ShiftSchedule()


def validate_tables():
    """Structural checks on the transcribed tables; raises DesError on any
    violation.  Run at import."""
    for name, t in TABLES.items():
        if len(t.entries) != t.out_width:
            raise DesError("%s entry count" % name)
    if sorted(IP.entries) != list(range(1, 65)) or sorted(FP.entries) != list(range(1, 65)):
        raise DesError("IP/FP must be permutations of 1..64")
    for j, src in enumerate(FP.entries, start=1):
        if IP.entries[src - 1] != j:
            raise DesError("FP is not the inverse of IP at position %d" % j)
    if len(E.entries) != 48 or len(E.entries) - len(set(E.entries)) != 16:
        raise DesError("E must have 48 entries with 16 duplicates over 32 inputs")
    if len(set(PC1.entries)) != 56 or len(PC2.entries) != 48:
        raise DesError("PC1/PC2 sizes")
    if sum(SHIFT_SCHEDULE.shifts) != 28:
        raise DesError("shift counts must sum to 28")


validate_tables()


# ---------------------------------------------------------------------------
# Operations

def permute(table: PermutationTable, w: Word) -> Word:
    """Output bit j equals input bit table.entries[j]."""
    if w.width != table.in_width:
        raise DesError("%s applied to %d-bit word, expects %d"
                       % (table.name, w.width, table.in_width))
    if w.domain == "abstract":
        return Word("abstract", table.out_width, None)
    out = 0
    for src in table.entries:
        out = (out << 1) | ((w.value >> (w.width - src)) & 1)
    return Word("concrete", table.out_width, out)


def sbox_lookup(i: int, w: Word) -> Word:
    """S-box i applied to a 6-bit word: row b1b6, column b2b3b4b5."""
    if not 1 <= i <= 8:
        raise DesError("S-box index %d" % i)
    if w.width != 6:
        raise DesError("S-box input must be 6 bits")
    if w.domain == "abstract":
        return Word("abstract", 4, None)
    row = 2 * w.bit(1) + w.bit(6)
    col = 8 * w.bit(2) + 4 * w.bit(3) + 2 * w.bit(4) + w.bit(5)
    return Word("concrete", 4, SBOXES[i - 1].rows[row][col])


@dataclass(frozen=True)
class KeySchedule:
    subkeys: tuple      # 16 Word<48>, in application order
    c_words: tuple      # C_0 .. C_16
    d_words: tuple      # D_0 .. D_16


def key_schedule(key: Word, encrypt: bool = True) -> KeySchedule:
    """PC1, the 16 scheduled rotations, and PC2 per round; decryption applies
    the same subkeys in the opposite order."""
    cd = permute(PC1, key)
    c, d = split(cd, 28)
    cs, ds, ks = [c], [d], []
    for count in SHIFT_SCHEDULE.shifts:
        c, d = rotate(c, count, True), rotate(d, count, True)
        cs.append(c)
        ds.append(d)
        ks.append(permute(PC2, concat(c, d)))
    if not encrypt:
        ks.reverse()
    return KeySchedule(tuple(ks), tuple(cs), tuple(ds))


def cipher_function(r: Word, k: Word) -> Word:
    """The round function f: E-expansion, subkey sum, the eight S-boxes, P."""
    x = xor_words(permute(E, r), k)
    parts = [sbox_lookup(i, subword(x, 6 * (i - 1) + 1, 6)) for i in range(1, 9)]
    return permute(P, reduce(concat, parts))


def des_apply(data: Word, key: Word, encrypt: bool = True) -> Word:
    """Straight-line DES over 64-bit words; the independent reference for the
    process-network execution."""
    if data.width != 64 or key.width != 64:
        raise DesError("data and key must be 64-bit words")
    ks = key_schedule(key, encrypt)
    l, r = split(permute(IP, data), 32)
    for k in ks.subkeys:
        l, r = r, xor_words(l, cipher_function(r, k))
    return permute(FP, concat(r, l))
