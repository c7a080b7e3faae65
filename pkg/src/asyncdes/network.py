"""Process networks: rendezvous composition of behaviors, reachability
exploration into an explicit LTS, and bottom-up compositional generation.

A network is a list of components plus one synchronization rule per gate:
every component using a gate takes part in each rendezvous on it.  Offer
unification is by matching: senders propose literal values, receivers accept
anything; a slot no participant fixes is expanded over the (finite) offer
domain, which is what makes the abstract open network explorable and makes
exploration reject an open concrete network.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product

from asyncdes import blocks as bl
from asyncdes import desfunc as df
from asyncdes.blocks import (DEFAULT_OPTIONS, EXTERNAL_GATES, GATE_SIGNATURES,
                             Label, SemanticsOptions, enumerate_tag,
                             make_block, parse_offer)
from asyncdes.lts import Lts, make_lts

TAU = "i"


class NetworkError(ValueError):
    pass


class ExploreLimit(RuntimeError):
    """Raised when exploration exceeds a requested bound; carries the counts
    reached so far."""

    def __init__(self, message, n_states, n_transitions):
        super().__init__(message)
        self.n_states = n_states
        self.n_transitions = n_transitions


class LtsBehavior:
    """An explored-and-possibly-minimized LTS wrapped back into a component.
    Offer values are recovered from the label strings via the gate
    signatures, so the wrapped component keeps synchronizing by value."""

    def __init__(self, block_id, lts, signatures):
        self.block_id = block_id
        self.lts = lts
        moves = [[] for _ in range(lts.n_states)]
        gates = set()
        for idx, (src, lab, dst) in enumerate(lts.transitions):
            text = lts.labels[lab]
            if text == TAU:
                moves[src].append((bl.TAU_GATE, (), idx))
                continue
            parts = text.split(" !")
            gate, offers = parts[0], parts[1:]
            if gate not in signatures:
                raise NetworkError("label %r uses unknown gate %r" % (text, gate))
            tags = signatures[gate]
            if len(tags) != len(offers):
                raise NetworkError("label %r does not match signature of %s"
                                   % (text, gate))
            values = tuple(parse_offer(t, o) for t, o in zip(tags, offers))
            pattern = tuple(("lit", v) for v in values)
            gates.add(gate)
            moves[src].append((gate, pattern, idx))
        self.gates = sorted(gates)
        self._moves = moves
        self._targets = [dst for _, _, dst in lts.transitions]

    def initial_state(self):
        return self.lts.initial

    def moves(self, state):
        return self._moves[state]

    def step(self, state, token, offers):
        return self._targets[token]


@dataclass
class Network:
    """Components plus derived synchronization rules and the hide set."""

    components: list
    domain: df.BitDomain = df.ABSTRACT
    hide: frozenset = frozenset()
    signatures: dict = field(default_factory=lambda: dict(GATE_SIGNATURES))
    name: str = "net"

    def __post_init__(self):
        self.hide = frozenset(self.hide)
        self.sync_rules = {}
        for idx, comp in enumerate(self.components):
            for gate in comp.gates:
                self.sync_rules.setdefault(gate, []).append(idx)
        for gate in self.sync_rules:
            if gate not in self.signatures:
                raise NetworkError("no signature for gate %r" % gate)
        unknown = self.hide - set(self.signatures)
        if unknown:
            raise NetworkError("hide set names unknown gates %s" % sorted(unknown))

    def component_ids(self):
        return [c.block_id for c in self.components]

    def visible_gates(self):
        return sorted(g for g in self.sync_rules if g not in self.hide)

    def hiding(self, gates):
        """Same network with additional gates hidden."""
        return Network(self.components, self.domain,
                       self.hide | frozenset(gates), self.signatures, self.name)

    def keeping(self, gates):
        """Same network with exactly `gates` visible."""
        hide = {g for g in self.sync_rules if g not in gates}
        return Network(self.components, self.domain, frozenset(hide),
                       self.signatures, self.name)


def _unify(patterns, gate, tags, domain):
    """Combine one move pattern per participant into concrete offer tuples.
    Returns a list of offer tuples (several when free slots get expanded),
    or raises NetworkError when a free slot is not enumerable."""
    width = len(tags)
    fixed = []
    for slot in range(width):
        value = None
        have = False
        for pat in patterns:
            kind, payload = pat[slot]
            if kind == "lit":
                if have and payload != value:
                    return []          # conflicting proposals: no rendezvous
                value, have = payload, True
        fixed.append((have, value))
    choices = []
    for slot, (have, value) in enumerate(fixed):
        if have:
            choices.append((value,))
        else:
            values = enumerate_tag(tags[slot], domain)
            if values is None:
                raise NetworkError(
                    "offer on gate %s is unconstrained and not enumerable; "
                    "an open concrete network cannot be explored" % gate)
            choices.append(tuple(values))
    return [tuple(c) for c in product(*choices)]


class _Explorer:
    """Per-exploration caches: interned local states and bucketed moves."""

    def __init__(self, net: Network, tau_priority=False):
        self.net = net
        self.tau_priority = tau_priority
        self.comps = net.components
        n = len(self.comps)
        self.state_ids = [dict() for _ in range(n)]
        self.state_objs = [[] for _ in range(n)]
        self.buckets = [[] for _ in range(n)]    # per local id: dict gate->[(pattern, token)]
        self.taus = [[] for _ in range(n)]       # per local id: [token]
        self.rules = sorted((gate, tuple(parts))
                            for gate, parts in net.sync_rules.items())
        self.step_cache = {}

    def intern(self, comp_idx, obj):
        ids = self.state_ids[comp_idx]
        if obj in ids:
            return ids[obj]
        new = len(self.state_objs[comp_idx])
        ids[obj] = new
        self.state_objs[comp_idx].append(obj)
        bucket = {}
        taus = []
        for gate, pattern, token in self.comps[comp_idx].moves(obj):
            if gate is bl.TAU_GATE:
                taus.append(token)
            else:
                bucket.setdefault(gate, []).append((pattern, token))
        self.buckets[comp_idx].append(bucket)
        self.taus[comp_idx].append(taus)
        return new

    def initial(self):
        return tuple(self.intern(i, c.initial_state())
                     for i, c in enumerate(self.comps))

    def local_step(self, comp_idx, local_id, token, offers):
        key = (comp_idx, local_id, token, offers)
        hit = self.step_cache.get(key)
        if hit is not None:
            return hit
        obj = self.comps[comp_idx].step(self.state_objs[comp_idx][local_id],
                                        token, offers)
        new = self.intern(comp_idx, obj)
        self.step_cache[key] = new
        return new

    def successors(self, gstate):
        """(label, successor local-state vector) pairs in canonical order.

        The order is structural (component order, gate order, move-listing
        order, offer-enumeration order) and therefore independent of state
        interning, which keeps BFS numbering identical across runs and
        across worker counts."""
        net = self.net
        out = []
        parts_of = []
        for i in range(len(self.comps)):
            for token in self.taus[i][gstate[i]]:
                target = list(gstate)
                target[i] = self.local_step(i, gstate[i], token, ())
                out.append((TAU, tuple(target)))
                parts_of.append((i,))
        for gate, parts in self.rules:
            movesets = []
            for i in parts:
                ms = self.buckets[i][gstate[i]].get(gate)
                if not ms:
                    break
                movesets.append(ms)
            else:
                tags = net.signatures[gate]
                hidden = gate in net.hide
                for combo in product(*movesets):
                    offer_sets = _unify([pattern for pattern, _ in combo],
                                        gate, tags, net.domain)
                    for offers in offer_sets:
                        target = list(gstate)
                        for i, (_, token) in zip(parts, combo):
                            target[i] = self.local_step(i, gstate[i], token, offers)
                        label = TAU if hidden else Label(gate, offers).render()
                        out.append((label, tuple(target)))
                        parts_of.append(parts)
        if self.tau_priority and len(out) > 1:
            chosen = self._confluent_tau(gstate, out, parts_of)
            if chosen is not None:
                return [out[chosen]]
        return out

    def _confluent_tau(self, gstate, out, parts_of):
        """Index of the first internal transition whose participants are
        disjoint from those of every other enabled transition, or None.
        Executing only such a transition preserves branching equivalence:
        it commutes with every co-enabled transition and disables none.
        Sound provided no reachable cycle consists purely of internal steps,
        which holds for these circuits (every run loop crosses the visible
        input gates); self-loops are never prioritized."""
        for idx, (label, target) in enumerate(out):
            if label != TAU or target == gstate:
                continue
            mine = parts_of[idx]
            ok = True
            for j, other in enumerate(parts_of):
                if j == idx:
                    continue
                if any(p in other for p in mine):
                    ok = False
                    break
            if ok:
                return idx
        return None


def explore(net: Network, max_states=None, max_transitions=None, jobs=1,
            transition_sink=None, tau_priority=False) -> Lts:
    """Reachable explicit LTS; BFS with canonical successor ordering, so the
    numbering is deterministic and independent of the worker count.

    With ``tau_priority`` the exploration follows structurally confluent
    internal transitions exclusively where one exists, a partial-order
    reduction that preserves branching equivalence but not raw counts."""
    if jobs > 1:
        return _explore_parallel(net, max_states, max_transitions, jobs,
                                 transition_sink)
    ex = _Explorer(net, tau_priority)
    init = ex.initial()
    ids = {init: 0}
    order = deque([init])
    triples = []
    n_transitions = 0
    while order:
        gstate = order.popleft()
        src = ids[gstate]
        for label, target in ex.successors(gstate):
            dst = ids.get(target)
            if dst is None:
                if max_states is not None and len(ids) >= max_states:
                    raise ExploreLimit("state limit %d exceeded" % max_states,
                                       len(ids), n_transitions)
                dst = len(ids)
                ids[target] = dst
                order.append(target)
            n_transitions += 1
            if max_transitions is not None and n_transitions > max_transitions:
                raise ExploreLimit("transition limit %d exceeded" % max_transitions,
                                   len(ids), n_transitions)
            if transition_sink is None:
                triples.append((src, label, dst))
            else:
                transition_sink(src, label, dst)
    if transition_sink is not None:
        return make_lts(len(ids), 0, [])
    return make_lts(len(ids), 0, triples)


def _explore_parallel(net, max_states, max_transitions, jobs, transition_sink):
    """Level-synchronous BFS over a process pool; results are merged in
    frontier order, so the numbering matches the sequential run exactly."""
    import concurrent.futures as cf
    import multiprocessing as mp

    global _WORKER_EXPLORER
    _WORKER_EXPLORER = _Explorer(net)
    ex = _WORKER_EXPLORER
    ctx = mp.get_context("fork")
    init_obj = tuple(c.initial_state() for c in net.components)
    ids = {init_obj: 0}
    frontier = [init_obj]
    triples = []
    n_transitions = 0
    with cf.ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as pool:
        while frontier:
            chunks = [frontier[i::jobs] for i in range(jobs)]
            results = list(pool.map(_worker_successors, chunks))
            merged = {}
            for chunk, res in zip(chunks, results):
                for state, succ in zip(chunk, res):
                    merged[state] = succ
            next_frontier = []
            for state in frontier:
                src = ids[state]
                for label, target in merged[state]:
                    dst = ids.get(target)
                    if dst is None:
                        if max_states is not None and len(ids) >= max_states:
                            raise ExploreLimit("state limit %d exceeded" % max_states,
                                               len(ids), n_transitions)
                        dst = len(ids)
                        ids[target] = dst
                        next_frontier.append(target)
                    n_transitions += 1
                    if max_transitions is not None and n_transitions > max_transitions:
                        raise ExploreLimit("transition limit %d exceeded"
                                           % max_transitions, len(ids), n_transitions)
                    if transition_sink is None:
                        triples.append((src, label, dst))
                    else:
                        transition_sink(src, label, dst)
            frontier = next_frontier
    if transition_sink is not None:
        return make_lts(len(ids), 0, [])
    return make_lts(len(ids), 0, triples)


_WORKER_EXPLORER = None


def _worker_successors(states):
    ex = _WORKER_EXPLORER
    out = []
    for obj_state in states:
        gstate = tuple(ex.intern(i, s) for i, s in enumerate(obj_state))
        succ = []
        for label, target in ex.successors(gstate):
            succ.append((label, tuple(ex.state_objs[i][t]
                                      for i, t in enumerate(target))))
        out.append(succ)
    return out


# ---------------------------------------------------------------------------
# Compositional generation

def compose_incremental(net: Network, plan=None, minimize_relation="branching",
                        max_states=None) -> Lts:
    """Bottom-up LTS construction alternating generation and minimization.

    Each plan step composes a subset of the current components; gates used
    only inside the subset and marked hidden in the network are hidden right
    away, and the intermediate LTS is minimized before further composition.
    The result is branching-equivalent to explore-then-minimize of the whole
    network at a fraction of the peak size.
    """
    from asyncdes import reduce as rd

    if plan is None:
        plan = default_plan(net)
    current = list(net.components)

    def compose(subset_ids, step_name):
        nonlocal current
        chosen = [c for c in current if c.block_id in subset_ids]
        if len(chosen) != len(subset_ids):
            have = {c.block_id for c in current}
            raise NetworkError("plan references unknown components %s"
                               % sorted(set(subset_ids) - have))
        rest = [c for c in current if c.block_id not in subset_ids]
        outside_gates = set()
        for c in rest:
            outside_gates.update(c.gates)
        # a hidden gate can be internalized as soon as no outside component
        # synchronizes on it
        inner_hide = {g for g in net.hide if g not in outside_gates
                      and any(g in c.gates for c in chosen)}
        sub = Network(chosen, net.domain, frozenset(inner_hide),
                      net.signatures, step_name)
        lts = explore(sub, max_states=max_states)
        lts = rd.minimize(lts, minimize_relation)
        current = rest + [LtsBehavior(step_name, lts, net.signatures)]
        return lts

    result = None
    for idx, step in enumerate(plan):
        subset = list(step["subset"])
        result = compose(subset, step.get("name", "group%d" % idx))
    if len(current) > 1:
        result = compose([c.block_id for c in current], "all")
    elif len(current) == 1 and not isinstance(current[0], LtsBehavior):
        result = compose([current[0].block_id], "all")
    else:
        # apply any hiding that was deferred because gates crossed subsets
        final = Network(current, net.domain, net.hide, net.signatures, "final")
        result = rd.minimize(explore(final, max_states=max_states),
                             minimize_relation)
    return result


def default_plan(net: Network):
    """Cluster plan for the DES architecture: cipher, key path, data path,
    then everything with the controller."""
    ids = set(net.component_ids())
    plan = []
    cipher = [b for b in ("E", "XOR48", "SBOX_1", "SBOX_2", "SBOX_3", "SBOX_4",
                          "SBOX_5", "SBOX_6", "SBOX_7", "SBOX_8", "P") if b in ids]
    key = [b for b in ("PC1", "CHOOSE_K", "SPLIT", "SHIFT_C", "SHIFT_D", "PC2",
                       "DUP_K") if b in ids]
    data = [b for b in ("IP", "CHOOSE_L", "CHOOSE_R", "XOR32", "FP_JOIN")
            if b in ids]
    if cipher:
        plan.append({"subset": cipher, "name": "cipher"})
    if key:
        plan.append({"subset": key, "name": "keypath"})
    if data:
        plan.append({"subset": data, "name": "datapath"})
    return plan


# ---------------------------------------------------------------------------
# The DES network

def controller_behavior(domain=df.ABSTRACT, options=DEFAULT_OPTIONS):
    """The six controller processes composed over their multiway CS
    rendezvous, packaged as one component.  CS stays visible inside the
    component (the network hides it)."""
    procs = [make_block(b, domain, options) for b in bl.CONTROLLER_PROCESSES]
    sub = Network(procs, domain, frozenset(), dict(GATE_SIGNATURES), "controller")
    lts = explore(sub)
    return LtsBehavior("CONTROLLER", lts, GATE_SIGNATURES)


def des_network(domain=df.ABSTRACT, options=DEFAULT_OPTIONS, closed=False,
                sample=None) -> Network:
    """The full architecture: 24 components (the merged controller, the four
    arbiters, and the nineteen computation blocks), plus the closing
    environment when ``closed``.

    ``sample`` optionally fixes the environment triplet as (crypt, data, key)
    words; the default is the standard single-encryption sample.
    """
    comps = [controller_behavior(domain, options)]
    for block_id in bl.NETWORK_COMPONENTS[1:]:
        comps.append(make_block(block_id, domain, options))
    if closed:
        if sample is None:
            sample = (True,
                      domain.word(64, 0x0123456789ABCDEF),
                      domain.word(64, 0x133457799BBCDFF1))
        crypt, data, key = sample
        comps.append(bl.environment_behavior(crypt, data, key, options))
    hide = frozenset(g for g in GATE_SIGNATURES if g not in EXTERNAL_GATES)
    name = "des_%s%s" % (domain.kind, "_sample" if closed else "")
    return Network(comps, domain, hide, dict(GATE_SIGNATURES), name)
