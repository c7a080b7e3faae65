"""Explicit labeled transition system store and the AUT text format.

Labels are canonical strings ("GATE !offer ..." or "i" for the internal
action).  Transitions are kept sorted by (source, label id, target) and the
AUT rendering is byte-deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

TAU = "i"


class AutParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)


@dataclass
class Lts:
    n_states: int
    initial: int
    labels: list          # interned label strings, lexicographically sorted
    transitions: list     # (src, label_id, dst) sorted ascending

    def __post_init__(self):
        self._normalize()
        self.validate()

    def _normalize(self):
        # Canonical form: label ids are lexicographic ranks, so equal
        # content always renders to identical bytes.
        if self.labels != sorted(self.labels):
            order = sorted(range(len(self.labels)), key=lambda i: self.labels[i])
            remap = [0] * len(self.labels)
            for rank, old in enumerate(order):
                remap[old] = rank
            self.labels = sorted(self.labels)
            self.transitions = sorted((s, remap[l], d) for s, l, d in self.transitions)

    def validate(self):
        if not 0 <= self.initial < max(self.n_states, 1):
            raise ValueError("initial state %d out of range" % self.initial)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate labels in label table")
        prev = None
        for t in self.transitions:
            src, lab, dst = t
            if not (0 <= src < self.n_states and 0 <= dst < self.n_states):
                raise ValueError("transition endpoint out of range: %r" % (t,))
            if not 0 <= lab < len(self.labels):
                raise ValueError("label id out of range: %r" % (t,))
            if prev is not None and t <= prev:
                raise ValueError("transitions not strictly sorted at %r" % (t,))
            prev = t

    @property
    def n_transitions(self):
        return len(self.transitions)

    def label_id(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            return None

    def successors(self):
        """List of per-state transition lists [(label_id, dst), ...]."""
        out = [[] for _ in range(self.n_states)]
        for src, lab, dst in self.transitions:
            out[src].append((lab, dst))
        return out

    def deadlock_states(self):
        has_out = [False] * self.n_states
        for src, _, _ in self.transitions:
            has_out[src] = True
        return [s for s in range(self.n_states) if not has_out[s]]

    def relabel(self, fn):
        """New Lts with every label string rewritten by fn; transitions are
        deduplicated and re-sorted."""
        new_names = [fn(lab) for lab in self.labels]
        table = []
        ids = {}
        remap = []
        for name in new_names:
            if name not in ids:
                ids[name] = len(table)
                table.append(name)
            remap.append(ids[name])
        trans = sorted({(s, remap[l], d) for s, l, d in self.transitions})
        return Lts(self.n_states, self.initial, table, trans)


def make_lts(n_states, initial, labeled_transitions):
    """Build an Lts from (src, label_string, dst) triples, interning labels
    in first-encounter order of the given sequence."""
    table = []
    ids = {}
    trans = set()
    for src, label, dst in labeled_transitions:
        if label not in ids:
            ids[label] = len(table)
            table.append(label)
        trans.add((src, ids[label], dst))
    return Lts(n_states, initial, table, sorted(trans))


def stats(lts: Lts) -> dict:
    return {
        "states": lts.n_states,
        "transitions": lts.n_transitions,
        "labels": len(lts.labels),
        "deadlocks": len(lts.deadlock_states()),
    }


def strip_offers(lts: Lts) -> Lts:
    """Rewrite every visible label 'GATE !o1 !o2...' to plain 'GATE'; the
    internal action is unchanged.  Idempotent."""
    return lts.relabel(lambda lab: lab if lab == TAU else lab.split(" !", 1)[0])


# ---------------------------------------------------------------------------
# AUT format:   des (initial, n_transitions, n_states)
#               (src, "LABEL", dst)

def write_aut(lts: Lts) -> str:
    lines = ["des (%d, %d, %d)" % (lts.initial, lts.n_transitions, lts.n_states)]
    labels = lts.labels
    for src, lab, dst in lts.transitions:
        lines.append('(%d, "%s", %d)' % (src, labels[lab], dst))
    return "\n".join(lines) + "\n"


def save_aut(lts: Lts, path) -> None:
    with open(path, "w") as fh:
        fh.write(write_aut(lts))


def read_aut(text: str) -> Lts:
    lines = text.splitlines()
    if not lines:
        raise AutParseError("empty input")
    header = lines[0].strip()
    if not (header.startswith("des") and header.endswith(")")):
        raise AutParseError("expected 'des (initial, transitions, states)'", 1)
    try:
        inner = header[header.index("(") + 1:-1]
        initial, n_trans, n_states = (int(x.strip()) for x in inner.split(","))
    except Exception:
        raise AutParseError("malformed header %r" % header, 1)
    triples = []
    for no, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        if not (line.startswith("(") and line.endswith(")")):
            raise AutParseError("expected '(src, \"label\", dst)'", no)
        body = line[1:-1]
        try:
            src_s, rest = body.split(",", 1)
            rest = rest.strip()
            if rest.startswith('"'):
                end = rest.index('"', 1)
                label = rest[1:end]
                dst_s = rest[end + 1:].lstrip(", ").strip()
            else:
                label, dst_s = (x.strip() for x in rest.rsplit(",", 1))
            triples.append((int(src_s), label, int(dst_s)))
        except AutParseError:
            raise
        except Exception:
            raise AutParseError("malformed transition %r" % raw, no)
    if len(triples) != n_trans:
        raise AutParseError("header announces %d transitions, found %d"
                            % (n_trans, len(triples)), 1)
    lts = make_lts(n_states, initial, triples)
    if lts.n_transitions != n_trans:
        raise AutParseError("duplicate transitions in input", 1)
    return lts


def load_aut(path) -> Lts:
    with open(path) as fh:
        return read_aut(fh.read())
