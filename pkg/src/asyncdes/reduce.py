"""Bisimulation machinery: strong and branching minimization by signature
refinement, equivalence checking with distinguishing-trace extraction, and a
simulation preorder used for LTS inclusion.

Branching minimization first collapses cycles of internal steps (divergence
is deliberately not preserved), then refines the partition with branching
signatures propagated along inert internal steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from asyncdes.lts import TAU, Lts, make_lts

STRONG = "strong"
BRANCHING = "branching"


@dataclass
class Partition:
    """Refinement result: block id per state, blocks ordered by their minimal
    member state index, plus the per-round history used for witnesses."""

    blocks: list
    n_blocks: int
    history: list = field(default_factory=list)


def _succ_lists(n_states, transitions):
    succ = [[] for _ in range(n_states)]
    for s, lab, d in transitions:
        succ[s].append((lab, d))
    return succ


def _tau_scc_collapse(n_states, transitions, tau):
    """Map each state to its τ-SCC (iterative Tarjan); returns (component id
    per state, component count).  Components are numbered so that the
    component of the smallest state index comes first."""
    tsucc = [[] for _ in range(n_states)]
    for s, lab, d in transitions:
        if lab == tau:
            tsucc[s].append(d)
    index = [0] * n_states
    low = [0] * n_states
    on_stack = [False] * n_states
    comp = [-1] * n_states
    counter = 1
    stack = []
    n_comp = 0
    for root in range(n_states):
        if index[root]:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            while pi < len(tsucc[v]):
                w = tsucc[v][pi]
                pi += 1
                if not index[w]:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
            if work:
                u, _ = work[-1]
                low[u] = min(low[u], low[v])
    # renumber components by minimal member for deterministic output
    first = {}
    order = []
    for s in range(n_states):
        if comp[s] not in first:
            first[comp[s]] = len(order)
            order.append(comp[s])
    renum = {old: new for new, old in enumerate(order)}
    return [renum[c] for c in comp], n_comp


def _tau_topo_order(n_states, transitions, tau):
    """Reverse topological order of the τ graph (must be acyclic)."""
    tsucc = [[] for _ in range(n_states)]
    indeg = [0] * n_states
    for s, lab, d in transitions:
        if lab == tau:
            tsucc[s].append(d)
            indeg[d] += 1
    queue = [s for s in range(n_states) if indeg[s] == 0]
    topo = []
    while queue:
        v = queue.pop()
        topo.append(v)
        for w in tsucc[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if len(topo) != n_states:
        raise ValueError("internal-step graph has a cycle; collapse SCCs first")
    return list(reversed(topo))


def refine(n_states, transitions, tau, branching):
    """Signature refinement to the coarsest (strong or branching)
    bisimulation.  ``transitions`` must be τ-acyclic when branching."""
    blocks = [0] * n_states
    n_blocks = 1
    succ = _succ_lists(n_states, transitions)
    topo = _tau_topo_order(n_states, transitions, tau) if branching else None
    history = [list(blocks)]
    while True:
        sigs = [None] * n_states
        if branching:
            for s in topo:
                sig = set()
                for lab, d in succ[s]:
                    if lab == tau and blocks[d] == blocks[s]:
                        sig |= sigs[d]      # inert step: inherit
                    else:
                        sig.add((lab, blocks[d]))
                sigs[s] = frozenset(sig)
        else:
            for s in range(n_states):
                sigs[s] = frozenset((lab, blocks[d]) for lab, d in succ[s])
        ids = {}
        new_blocks = [0] * n_states
        for s in range(n_states):
            key = (blocks[s], sigs[s])
            if key not in ids:
                ids[key] = len(ids)
            new_blocks[s] = ids[key]
        if len(ids) == n_blocks:
            return Partition(blocks, n_blocks, history)
        blocks = new_blocks
        n_blocks = len(ids)
        history.append(list(blocks))


def compress_inert_chains(lts: Lts) -> Lts:
    """Collapse states whose only move is a single internal step onto their
    successor; such states are branching-bisimilar to the successor.  Cheap
    O(m) accelerator applied before branching refinement.  τ-cycles are left
    alone (the SCC collapse deals with them)."""
    tau = lts.label_id(TAU)
    if tau is None:
        return lts
    succ = lts.successors()
    forward = [None] * lts.n_states
    for s in range(lts.n_states):
        if len(succ[s]) == 1 and succ[s][0][0] == tau and succ[s][0][1] != s:
            forward[s] = succ[s][0][1]

    def resolve(s):
        path = []
        while forward[s] is not None:
            path.append(s)
            if forward[s] in path or len(path) > lts.n_states:
                break   # τ-cycle: stop compressing here
            s = forward[s]
        for p in path:
            forward[p] = s if p != s else None
        return s

    target = [resolve(s) for s in range(lts.n_states)]
    kept = sorted({target[s] for s in range(lts.n_states)} | {target[lts.initial]})
    renum = {old: new for new, old in enumerate(kept)}
    triples = set()
    for s, lab, d in lts.transitions:
        if forward[s] is not None and s != target[s]:
            continue   # interior chain step, absorbed
        triples.add((renum[target[s]], lts.labels[lab], renum[target[d]]))
    return make_lts(len(kept), renum[target[lts.initial]], sorted(triples))


def _partition(lts: Lts, relation: str):
    """Partition of lts states; for branching the τ-SCC collapse is applied
    first and the returned blocks refer to original states."""
    tau = lts.label_id(TAU)
    if relation == STRONG or tau is None:
        branching = relation == BRANCHING and tau is not None
        part = refine(lts.n_states, lts.transitions, tau, branching)
        return part.blocks, part
    if relation != BRANCHING:
        raise ValueError("unknown relation %r" % relation)
    comp, n_comp = _tau_scc_collapse(lts.n_states, lts.transitions, tau)
    collapsed = sorted({(comp[s], lab, comp[d])
                        for s, lab, d in lts.transitions
                        if not (lab == tau and comp[s] == comp[d])})
    part = refine(n_comp, collapsed, tau, True)
    return [part.blocks[comp[s]] for s in range(lts.n_states)], part


def minimize(lts: Lts, relation: str = BRANCHING) -> Lts:
    """Quotient LTS, minimal and unique up to isomorphism; block numbering is
    by minimal member state index."""
    if relation == BRANCHING and lts.label_id(TAU) is not None:
        lts = compress_inert_chains(lts)
    blocks, _ = _partition(lts, relation)
    order = {}
    for s in range(lts.n_states):
        if blocks[s] not in order:
            order[blocks[s]] = len(order)
    renum = [order[b] for b in blocks]
    tau = lts.label_id(TAU)
    triples = set()
    for s, lab, d in lts.transitions:
        if relation == BRANCHING and lab == tau and renum[s] == renum[d]:
            continue   # inert internal step disappears in the quotient
        triples.add((renum[s], lts.labels[lab], renum[d]))
    return make_lts(len(order), renum[lts.initial], sorted(triples))


def _union(a: Lts, b: Lts):
    """Disjoint union; b's states are shifted by a.n_states."""
    triples = [(s, a.labels[l], d) for s, l, d in a.transitions]
    triples += [(s + a.n_states, b.labels[l], d + a.n_states)
                for s, l, d in b.transitions]
    labels = sorted({t[1] for t in triples})
    ids = {lab: i for i, lab in enumerate(labels)}
    trans = sorted((s, ids[lab], d) for s, lab, d in triples)
    return a.n_states + b.n_states, labels, trans, ids.get(TAU)


@dataclass
class Verdict:
    holds: bool
    witness: list | None = None   # label trace to a divergence point

    def __bool__(self):
        return self.holds


def equivalent(a: Lts, b: Lts, relation: str = BRANCHING) -> Verdict:
    """Bisimulation equivalence of the initial states; on failure the witness
    is a distinguishing trace (internal steps spelled 'i')."""
    n, labels, trans, tau = _union(a, b)
    ia, ib = a.initial, b.initial + a.n_states
    if relation == BRANCHING and tau is not None:
        comp, n_comp = _tau_scc_collapse(n, trans, tau)
        ctrans = sorted({(comp[s], l, comp[d]) for s, l, d in trans
                         if not (l == tau and comp[s] == comp[d])})
        part = refine(n_comp, ctrans, tau, True)
        if part.blocks[comp[ia]] == part.blocks[comp[ib]]:
            return Verdict(True)
        witness = _distinguish(comp[ia], comp[ib], n_comp, ctrans, labels,
                               tau, part, branching=True)
        return Verdict(False, witness)
    branching = relation == BRANCHING and tau is not None
    part = refine(n, trans, tau, branching)
    if part.blocks[ia] == part.blocks[ib]:
        return Verdict(True)
    witness = _distinguish(ia, ib, n, trans, labels, tau, part,
                           branching=branching)
    return Verdict(False, witness)


def _distinguish(s, t, n, trans, labels, tau, part: Partition, branching):
    """Trace leading to a point where one side enables a move the other
    cannot match into the same class.  Descends through the refinement
    history, so it terminates."""
    succ = _succ_lists(n, trans)
    history = part.history

    def rank(x, y):
        for r, blocks in enumerate(history):
            if blocks[x] != blocks[y]:
                return r
        return len(history)

    def moves(x, blocks):
        """(label, target-class, path-of-(label,state)) triples; for
        branching, reachable through inert τ steps first."""
        out = []
        if not branching:
            for lab, d in succ[x]:
                out.append((lab, blocks[d], ((lab, d),)))
            return out
        seen = {x}
        frontier = [(x, ())]
        while frontier:
            u, path = frontier.pop(0)
            for lab, d in succ[u]:
                if lab == tau and blocks[d] == blocks[u]:
                    if d not in seen:
                        seen.add(d)
                        frontier.append((d, path + ((lab, d),)))
                else:
                    out.append((lab, blocks[d], path + ((lab, d),)))
        return out

    trace = []
    while True:
        r = rank(s, t)
        prev = history[r - 1] if r > 0 else [0] * n
        ms = moves(s, prev)
        mt = moves(t, prev)
        sig_s = {(lab, c) for lab, c, _ in ms}
        sig_t = {(lab, c) for lab, c, _ in mt}
        if not sig_s - sig_t:
            # the extra move is on t's side; present the trace from there
            ms, mt = mt, ms
            sig_s, sig_t = sig_t, sig_s
        lab, cls = sorted(sig_s - sig_t)[0]
        path = next(p for l, c, p in ms if (l, c) == (lab, cls))
        for step_lab, _ in path:
            trace.append(labels[step_lab] if step_lab is not None else TAU)
        matches = [p for l, c, p in mt if l == lab]
        if not matches:
            return trace
        s2 = path[-1][1]
        t2 = min((p[-1][1] for p in matches), key=lambda t2: rank(s2, t2))
        s, t = s2, t2
        if rank(s, t) >= r:
            return trace   # defensive: never loop


def simulated_by(a: Lts, b: Lts, modulo_tau: bool = False) -> Verdict:
    """True iff a's initial state is simulated by b's (weakly when
    modulo_tau); on failure the witness is a trace of a ending in the move b
    cannot match."""
    tau_a = a.label_id(TAU)
    tau_b = b.label_id(TAU)
    succ_a = a.successors()
    succ_b = b.successors()
    lab_a = a.labels
    lab_b = {lab: i for i, lab in enumerate(b.labels)}

    def tau_closure(t):
        seen = {t}
        stack = [t]
        while stack:
            u = stack.pop()
            for lab, d in succ_b[u]:
                if lab == tau_b and d not in seen:
                    seen.add(d)
                    stack.append(d)
        return seen

    closures = [tau_closure(t) for t in range(b.n_states)] if modulo_tau else None

    def b_matches(t, label):
        """States of b reachable by `label` (weakly when modulo_tau)."""
        if modulo_tau and label == TAU:
            return closures[t]
        lid = lab_b.get(label)
        if lid is None:
            return set()
        sources = closures[t] if modulo_tau else {t}
        targets = set()
        for u in sources:
            for lab, d in succ_b[u]:
                if lab == lid:
                    targets.add(d)
        if modulo_tau:
            expanded = set()
            for d in targets:
                expanded |= closures[d]
            return expanded
        return targets

    alive = [[True] * b.n_states for _ in range(a.n_states)]
    removed_round = {}
    fail_move = {}
    rnd = 0
    changed = True
    while changed:
        changed = False
        rnd += 1
        for s in range(a.n_states):
            for t in range(b.n_states):
                if not alive[s][t]:
                    continue
                for lab, s2 in succ_a[s]:
                    label = lab_a[lab]
                    if not any(alive[s2][t2] for t2 in b_matches(t, label)):
                        alive[s][t] = False
                        removed_round[(s, t)] = rnd
                        fail_move[(s, t)] = (label, s2)
                        changed = True
                        break
    s, t = a.initial, b.initial
    if alive[s][t]:
        return Verdict(True)
    trace = []
    while True:
        label, s2 = fail_move[(s, t)]
        trace.append(label)
        candidates = [(s2, t2) for t2 in b_matches(t, label)]
        if not candidates:
            return Verdict(False, trace)
        # descend into the most recently removed pair; rounds strictly drop
        s, t = max(candidates, key=lambda p: removed_round.get(p, 0))
        if (s, t) not in fail_move:
            return Verdict(False, trace)
