"""Circuit blocks as deterministic local transition generators.

Every box of the architecture (data path, key path, cipher, controller
processes, arbiters) is a cyclic process communicating by rendezvous.  A
block is written as a small program over Recv/Send/Par/Case statements and
interpreted into a local transition relation: hashable local states, a
``moves`` function listing enabled half-rendezvous, and a ``step`` function
applying one.  There is no internal nondeterministic choice anywhere: for a
fixed local state and label at most one successor exists, though several
distinct labels may be enabled at once (parallel joins and forks).

Value passing: a Send offers literal values, a Recv offers typed wildcards;
the network layer unifies the two sides and feeds the agreed offers back
into ``step``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from asyncdes import desfunc as df
from asyncdes.desfunc import Word

TAU_GATE = None   # gate of the internal action

# Offer type tags.  Nat tags carry their (finite) value range so that a
# wildcard slot can be expanded when no participant supplies a literal.
BOOL = ("bool",)


def WORD(width):
    return ("word", width)


def NAT(values):
    return ("nat", tuple(values))


def render_offer(value):
    if isinstance(value, Word):
        if value.is_abstract():
            return "*"
        return "%0*X" % ((value.width + 3) // 4, value.value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def parse_offer(tag, text):
    kind = tag[0]
    if kind == "bool":
        if text in ("true", "false"):
            return text == "true"
    elif kind == "nat":
        return int(text)
    elif kind == "word":
        if text == "*":
            return df.ABSTRACT.word(tag[1])
        return df.CONCRETE.word(tag[1], int(text, 16))
    raise ValueError("cannot parse offer %r as %r" % (text, tag))


def enumerate_tag(tag, domain):
    """All values of a tag, or None when not enumerable."""
    kind = tag[0]
    if kind == "bool":
        return (False, True)
    if kind == "nat":
        return tag[1]
    return domain.enumerate_words(tag[1])


@dataclass(frozen=True)
class Label:
    """A gate with its offer tuple, or the internal action (gate None)."""

    gate: str | None
    offers: tuple = ()

    def is_tau(self):
        return self.gate is None

    def render(self):
        if self.gate is None:
            return "i"
        if not self.offers:
            return self.gate
        return self.gate + " " + " ".join("!" + render_offer(o) for o in self.offers)


TAU_LABEL = Label(None)


@dataclass(frozen=True)
class SemanticsOptions:
    """Two modeled semantic variants: ``tau_on_join`` inserts an internal
    step between a completed parallel input-join and the block's output (the
    behaviour of symmetric sequential composition in the older calculus);
    ``sequential_sboxes`` forces the eight S-boxes to be fed and collected in
    index order."""

    tau_on_join: bool = False
    sequential_sboxes: bool = False


DEFAULT_OPTIONS = SemanticsOptions()


# ---------------------------------------------------------------------------
# Statements

@dataclass(frozen=True)
class Recv:
    gate: str
    tags: tuple
    names: tuple


@dataclass(frozen=True)
class RecvLit:
    gate: str
    values: tuple


@dataclass(frozen=True)
class Send:
    gate: str
    exprs: tuple   # per-slot: ("lit", v) | ("var", name) | ("fn", callable)


@dataclass(frozen=True)
class Par:
    branches: tuple   # of statement tuples


@dataclass(frozen=True)
class Case:
    var: str
    arms: tuple       # ((value, statement tuple), ...)


@dataclass(frozen=True)
class Tau:
    pass


@dataclass(frozen=True)
class Assign:
    """Environment update without a transition, applied while advancing."""

    name: str
    expr: tuple


def lit(v):
    return ("lit", v)


def var(name):
    return ("var", name)


def fn(callable_):
    return ("fn", callable_)


DONE = "done"


def _has_recv(stmts):
    for st in stmts:
        if isinstance(st, (Recv, RecvLit)):
            return True
        if isinstance(st, Par) and any(_has_recv(b) for b in st.branches):
            return True
        if isinstance(st, Case) and any(_has_recv(b) for _, b in st.arms):
            return True
    return False


class ProcessBehavior:
    """One block: an optional prologue followed by a repeated cycle.

    Local states are hashable tuples (phase, program counter structure,
    variable environment).  An empty cycle makes the behaviour stop after the
    prologue (used by the closing environment).
    """

    def __init__(self, block_id, cycle, prologue=(), options=DEFAULT_OPTIONS):
        self.block_id = block_id
        self.prologue = tuple(prologue)
        self.cycle = tuple(cycle)
        self.options = options
        self.gates = sorted(self._collect_gates(self.prologue + self.cycle))
        self._var_names = []
        self._collect_vars(self.prologue + self.cycle)
        # Assign targets survive cycle wraps (state carried between runs);
        # everything else resets so a completed round returns to the initial
        # local state.
        self._persistent = frozenset(self._assign_targets(self.prologue + self.cycle))

    def _collect_gates(self, stmts):
        gates = set()
        for st in stmts:
            if isinstance(st, (Recv, RecvLit, Send)):
                gates.add(st.gate)
            elif isinstance(st, Par):
                for b in st.branches:
                    gates |= self._collect_gates(b)
            elif isinstance(st, Case):
                for _, b in st.arms:
                    gates |= self._collect_gates(b)
        return gates

    def _collect_vars(self, stmts):
        for st in stmts:
            if isinstance(st, Recv):
                for n in st.names:
                    if n not in self._var_names:
                        self._var_names.append(n)
            elif isinstance(st, Assign):
                if st.name not in self._var_names:
                    self._var_names.append(st.name)
            elif isinstance(st, Par):
                for b in st.branches:
                    self._collect_vars(b)
            elif isinstance(st, Case):
                for _, b in st.arms:
                    self._collect_vars(b)

    # -- environment ------------------------------------------------------
    def _env0(self):
        return (None,) * len(self._var_names)

    def _env_dict(self, env):
        return dict(zip(self._var_names, env))

    def _bind(self, env, names, values):
        env = list(env)
        for n, v in zip(names, values):
            env[self._var_names.index(n)] = v
        return tuple(env)

    def _eval(self, expr, env):
        kind, payload = expr
        if kind == "lit":
            return payload
        if kind == "var":
            return env[self._var_names.index(payload)]
        return payload(self._env_dict(env))

    # -- sequence interpreter ----------------------------------------------
    # A sequence state is (pos, sub) with sub the state of the statement at
    # pos; DONE marks completion.

    def _seq_init(self, stmts, env):
        pos = 0
        while pos < len(stmts):
            sub, env = self._stmt_init(stmts[pos], env)
            if sub is not DONE:
                return (pos, sub), env
            pos += 1
        return DONE, env

    def _seq_moves(self, stmts, state, env):
        pos, sub = state
        return self._stmt_moves(stmts[pos], sub, env)

    def _seq_step(self, stmts, state, env, token, offers):
        pos, sub = state
        sub, env = self._stmt_step(stmts[pos], sub, env, token, offers)
        if sub is not DONE:
            return (pos, sub), env
        pos += 1
        while pos < len(stmts):
            sub, env = self._stmt_init(stmts[pos], env)
            if sub is not DONE:
                return (pos, sub), env
            pos += 1
        return DONE, env

    # -- statement interpreter ----------------------------------------------
    def _stmt_init(self, st, env):
        if isinstance(st, (Recv, RecvLit, Send, Tau)):
            return (), env
        if isinstance(st, Assign):
            return DONE, self._bind(env, (st.name,), (self._eval(st.expr, env),))
        if isinstance(st, Par):
            subs = []
            for b in st.branches:
                s, env = self._seq_init(b, env)
                subs.append(s)
            if all(s is DONE for s in subs):
                return DONE, env
            return ("par", tuple(subs)), env
        if isinstance(st, Case):
            key = env[self._var_names.index(st.var)]
            for value, body in st.arms:
                if value == key:
                    s, env = self._seq_init(body, env)
                    if s is DONE:
                        return DONE, env
                    return ("case", value, s), env
            raise ValueError("%s: no case arm for %r" % (self.block_id, key))
        raise TypeError(st)

    def _stmt_moves(self, st, sub, env):
        if isinstance(st, Recv):
            return [(st.gate, tuple(("any", t) for t in st.tags), ())]
        if isinstance(st, RecvLit):
            return [(st.gate, tuple(("lit", v) for v in st.values), ())]
        if isinstance(st, Send):
            offers = tuple(self._eval(e, env) for e in st.exprs)
            return [(st.gate, tuple(("lit", v) for v in offers), ())]
        if isinstance(st, Tau):
            return [(TAU_GATE, (), ())]
        if isinstance(st, Par):
            if sub == "join-tau":
                return [(TAU_GATE, (), ())]
            moves = []
            for i, s in enumerate(sub[1]):
                if s is DONE:
                    continue
                for gate, pattern, token in self._seq_moves(st.branches[i], s, env):
                    moves.append((gate, pattern, (i,) + (token,)))
            return moves
        if isinstance(st, Case):
            _, value, s = sub
            body = next(b for v, b in st.arms if v == value)
            return [(g, p, (t,)) for g, p, t in self._seq_moves(body, s, env)]
        raise TypeError(st)

    def _stmt_step(self, st, sub, env, token, offers):
        if isinstance(st, Recv):
            return DONE, self._bind(env, st.names, offers)
        if isinstance(st, (RecvLit, Send, Tau)):
            return DONE, env
        if isinstance(st, Par):
            if sub == "join-tau":
                return DONE, env
            i, inner = token
            subs = list(sub[1])
            subs[i], env = self._seq_step(st.branches[i], subs[i], env, inner, offers)
            if all(s is DONE for s in subs):
                if self.options.tau_on_join and _has_recv(st.branches):
                    return "join-tau", env
                return DONE, env
            return ("par", tuple(subs)), env
        if isinstance(st, Case):
            _, value, s = sub
            body = next(b for v, b in st.arms if v == value)
            s, env = self._seq_step(body, s, env, token[0], offers)
            if s is DONE:
                return DONE, env
            return ("case", value, s), env
        raise TypeError(st)

    # -- public surface ------------------------------------------------------
    def initial_state(self):
        state, env = self._seq_init(self.prologue, self._env0())
        if state is not DONE:
            return ("p", state, env)
        state, env = self._seq_init(self.cycle, env)
        if state is DONE:
            return ("end", None, env)
        return ("c", state, env)

    def moves(self, state):
        """Enabled half-rendezvous: (gate, offer pattern, token).  Pattern
        slots are ('lit', value) or ('any', tag)."""
        phase, seq, env = state
        if phase == "end":
            return []
        stmts = self.prologue if phase == "p" else self.cycle
        return self._seq_moves(stmts, seq, env)

    def step(self, state, token, offers):
        phase, seq, env = state
        stmts = self.prologue if phase == "p" else self.cycle
        seq, env = self._seq_step(stmts, seq, env, token, offers)
        if seq is not DONE:
            return (phase, seq, env)
        if not self.cycle:
            return ("end", None, env)
        seq, env = self._seq_init(self.cycle, env)
        if seq is DONE:
            return ("end", None, env)
        return ("c", seq, env)


# ---------------------------------------------------------------------------
# Gate directory: offer signatures for every gate in the architecture.

SEL_INIT, SEL_LOOP, SEL_OUT = 0, 1, 2     # CHOOSE_L / CHOOSE_R commands
KEY_FIRST, KEY_NEXT = 0, 1                # CHOOSE_K commands
DUP_GO = 0                                # DUP_K command

EXTERNAL_GATES = ("CRYPT", "DATA", "KEY", "OUTPUT", "SUBKEY")


def gate_signatures():
    sig = {
        "CRYPT": (BOOL,),
        "DATA": (WORD(64),),
        "KEY": (WORD(64),),
        "OUTPUT": (WORD(64),),
        "SUBKEY": (WORD(48),),
        "CS": (NAT(range(17)),),
        "CMD_L": (NAT((SEL_INIT, SEL_LOOP, SEL_OUT)),),
        "CMD_R": (NAT((SEL_INIT, SEL_LOOP, SEL_OUT)),),
        "CMD_K": (NAT((KEY_FIRST, KEY_NEXT)),),
        "CMD_DUP": (NAT((DUP_GO,)),),
        "SHIFT": (NAT((0, 1, 2)), BOOL, BOOL),   # count, left?, last?
        "L0": (WORD(32),), "R0": (WORD(32),),
        "L_CUR": (WORD(32),), "R_CUR": (WORD(32),),
        "L_NEXT": (WORD(32),), "R_NEXT": (WORD(32),),
        "L_LAST": (WORD(32),), "R_LAST": (WORD(32),),
        "E_OUT": (WORD(48),), "K_CUR": (WORD(48),), "K_RAW": (WORD(48),),
        "F_OUT": (WORD(32),),
        "CD0": (WORD(56),), "CD_CUR": (WORD(56),),
        "C_IN": (WORD(28),), "D_IN": (WORD(28),),
        "C_OUT": (WORD(28),), "D_OUT": (WORD(28),),
        "C_NEXT": (WORD(28),), "D_NEXT": (WORD(28),),
    }
    for i in range(1, 9):
        sig["B%d" % i] = (WORD(6),)
        sig["S%d" % i] = (WORD(4),)
    return sig


GATE_SIGNATURES = gate_signatures()

# The 24 network components: the merged controller, the four arbiters, and
# the nineteen computation blocks (S-boxes and shift registers individually).
CONTROLLER_PROCESSES = ("COUNTER", "CTRL_MUX_L", "CTRL_MUX_R", "CTRL_MUX_K",
                        "CTRL_DMUX_K", "CTRL_SHIFT")
ARBITERS = ("CHOOSE_L", "CHOOSE_R", "CHOOSE_K", "DUP_K")
# SPLIT is the register-word splitter sitting in the key loop; the data-side
# 64-to-2x32 split happens inside IP (one buffer stage on each input chain).
KEY_PATH_BLOCKS = ("PC1", "SPLIT", "SHIFT_C", "SHIFT_D", "PC2")
DATA_PATH_BLOCKS = ("IP", "XOR32", "FP_JOIN")
CIPHER_BLOCKS = ("E", "XOR48") + tuple("SBOX_%d" % i for i in range(1, 9)) + ("P",)

BLOCK_TAXONOMY = (CONTROLLER_PROCESSES + ARBITERS + KEY_PATH_BLOCKS
                  + DATA_PATH_BLOCKS + CIPHER_BLOCKS)
NETWORK_COMPONENTS = (("CONTROLLER",) + ARBITERS + KEY_PATH_BLOCKS
                      + DATA_PATH_BLOCKS + CIPHER_BLOCKS)


# ---------------------------------------------------------------------------
# Block definitions

def _counter():
    return [Send("CS", (lit(i),)) for i in range(17)]


def _ctrl_mux_lr(cmd_gate):
    # one command per counter step; step 16 routes to the final output
    cycle = []
    for i in range(17):
        sel = SEL_INIT if i == 0 else (SEL_LOOP if i < 16 else SEL_OUT)
        cycle += [RecvLit("CS", (i,)), Send(cmd_gate, (lit(sel),))]
    return cycle


def _ctrl_mux_k():
    cycle = []
    for i in range(16):
        sel = KEY_FIRST if i == 0 else KEY_NEXT
        cycle += [RecvLit("CS", (i,)), Send("CMD_K", (lit(sel),))]
    cycle.append(RecvLit("CS", (16,)))    # consumed silently
    return cycle


def _ctrl_dmux_k():
    cycle = []
    for i in range(16):
        cycle += [RecvLit("CS", (i,)), Send("CMD_DUP", (lit(DUP_GO),))]
    cycle.append(RecvLit("CS", (16,)))    # consumed silently
    return cycle


def _ctrl_shift():
    # Reads the crypt flag once per run and issues the sixteen rotation
    # commands.  The next flag may be accepted as soon as the last command
    # is out, without waiting for run completion; it takes effect on the
    # following cycle.
    def count(i):
        return fn(lambda env, i=i: df.SHIFT_SCHEDULE.commands(env["b"])[i][0])

    def direction(i):
        return fn(lambda env, i=i: df.SHIFT_SCHEDULE.commands(env["b"])[i][1])

    cycle = []
    for i in range(16):
        cycle += [RecvLit("CS", (i,)),
                  Send("SHIFT", (count(i), direction(i), lit(i == 15)))]
    cycle += [Par(((Recv("CRYPT", (BOOL,), ("b2",)),),
                   (RecvLit("CS", (16,)),))),
              Assign("b", fn(lambda env: env["b2"]))]
    prologue = [Recv("CRYPT", (BOOL,), ("b",))]
    return cycle, prologue


def _ip():
    # initial permutation, emitting the two 32-bit halves L0 and R0
    def half(i):
        return fn(lambda e, i=i: df.split(df.permute(df.IP, e["x"]), 32)[i])
    return [Recv("DATA", (WORD(64),), ("x",)),
            Par(((Send("L0", (half(0),)),),
                 (Send("R0", (half(1),)),)))]


def _split():
    # the key-path splitter: the multiplexed 56-bit register word into its
    # two 28-bit register halves
    return [Recv("CD_CUR", (WORD(56),), ("cd",)),
            Par(((Send("C_IN", (fn(lambda e: df.split(e["cd"], 28)[0]),)),),
                 (Send("D_IN", (fn(lambda e: df.split(e["cd"], 28)[1]),)),)))]


def _choose_l():
    return [Recv("CMD_L", (NAT((0, 1, 2)),), ("sel",)),
            Case("sel", (
                (SEL_INIT, (Recv("L0", (WORD(32),), ("x",)),
                            Send("L_CUR", (var("x"),)))),
                (SEL_LOOP, (Recv("L_NEXT", (WORD(32),), ("x",)),
                            Send("L_CUR", (var("x"),)))),
                (SEL_OUT, (Recv("L_NEXT", (WORD(32),), ("x",)),
                           Send("L_LAST", (var("x"),)))),
            ))]


def _choose_r():
    dup = Par(((Send("R_CUR", (var("x"),)),),
               (Send("L_NEXT", (var("x"),)),)))
    return [Recv("CMD_R", (NAT((0, 1, 2)),), ("sel",)),
            Case("sel", (
                (SEL_INIT, (Recv("R0", (WORD(32),), ("x",)), dup)),
                (SEL_LOOP, (Recv("R_NEXT", (WORD(32),), ("x",)), dup)),
                (SEL_OUT, (Recv("R_NEXT", (WORD(32),), ("x",)),
                           Send("R_LAST", (var("x"),)))),
            ))]


def _xor32():
    return [Par(((Recv("L_CUR", (WORD(32),), ("l",)),),
                 (Recv("F_OUT", (WORD(32),), ("f",)),))),
            Send("R_NEXT", (fn(lambda e: df.xor_words(e["l"], e["f"])),))]


def _fp_join():
    # preoutput is R16 || L16, then the inverse initial permutation
    return [Par(((Recv("L_LAST", (WORD(32),), ("l",)),),
                 (Recv("R_LAST", (WORD(32),), ("r",)),))),
            Send("OUTPUT", (fn(lambda e: df.permute(df.FP, df.concat(e["r"], e["l"]))),))]


def _e():
    return [Recv("R_CUR", (WORD(32),), ("r",)),
            Send("E_OUT", (fn(lambda e: df.permute(df.E, e["r"])),))]


def _xor48(options):
    def slice_(i):
        return fn(lambda e, i=i: df.subword(df.xor_words(e["e"], e["k"]),
                                            6 * (i - 1) + 1, 6))
    sends = [Send("B%d" % i, (slice_(i),)) for i in range(1, 9)]
    body = [Par(((Recv("E_OUT", (WORD(48),), ("e",)),),
                 (Recv("K_CUR", (WORD(48),), ("k",)),)))]
    if options.sequential_sboxes:
        body += sends
    else:
        body.append(Par(tuple((s,) for s in sends)))
    return body


def _sbox(i):
    return [Recv("B%d" % i, (WORD(6),), ("w",)),
            Send("S%d" % i, (fn(lambda e, i=i: df.sbox_lookup(i, e["w"])),))]


def _p(options):
    recvs = [Recv("S%d" % i, (WORD(4),), ("v%d" % i,)) for i in range(1, 9)]
    if options.sequential_sboxes:
        join = list(recvs)
    else:
        join = [Par(tuple((r,) for r in recvs))]

    def result(e):
        word = e["v1"]
        for i in range(2, 9):
            word = df.concat(word, e["v%d" % i])
        return df.permute(df.P, word)

    return join + [Send("F_OUT", (fn(result),))]


def _pc1():
    return [Recv("KEY", (WORD(64),), ("k",)),
            Send("CD0", (fn(lambda e: df.permute(df.PC1, e["k"])),))]


def _choose_k():
    return [Recv("CMD_K", (NAT((0, 1)),), ("sel",)),
            Case("sel", (
                (KEY_FIRST, (Recv("CD0", (WORD(56),), ("cd",)),
                             Send("CD_CUR", (var("cd"),)))),
                (KEY_NEXT, (Par(((Recv("C_NEXT", (WORD(28),), ("c",)),),
                                 (Recv("D_NEXT", (WORD(28),), ("d",)),))),
                            Send("CD_CUR", (fn(lambda e: df.concat(e["c"], e["d"])),)))),
            ))]


def _shift_register(half):
    # half: 0 for the C register, 1 for D; rotation count and direction come
    # with the shared shift command, whose last flag suppresses the loop-back
    in_gate = "C_IN" if half == 0 else "D_IN"
    out_gate = "C_OUT" if half == 0 else "D_OUT"
    next_gate = "C_NEXT" if half == 0 else "D_NEXT"

    def shifted(e):
        return df.rotate(e["w"], e["n"], e["left"])

    return [Par(((Recv(in_gate, (WORD(28),), ("w",)),),
                 (Recv("SHIFT", (NAT((0, 1, 2)), BOOL, BOOL), ("n", "left", "last")),))),
            Send(out_gate, (fn(shifted),)),
            Case("last", (
                (False, (Send(next_gate, (fn(shifted),)),)),
                (True, ()),
            ))]


def _pc2():
    return [Par(((Recv("C_OUT", (WORD(28),), ("c",)),),
                 (Recv("D_OUT", (WORD(28),), ("d",)),))),
            Send("K_RAW", (fn(lambda e: df.permute(df.PC2, df.concat(e["c"], e["d"]))),))]


def _dup_k():
    # duplicates each subkey: first the observable SUBKEY, then the cipher
    return [Par(((RecvLit("CMD_DUP", (DUP_GO,)),),
                 (Recv("K_RAW", (WORD(48),), ("k",)),))),
            Send("SUBKEY", (var("k"),)),
            Send("K_CUR", (var("k"),))]


def make_block(block_id, domain=df.ABSTRACT, options=DEFAULT_OPTIONS):
    """Behavior of one taxonomy block.  ``domain`` only matters for blocks
    that construct words; the structure is domain-independent."""
    builders = {
        "COUNTER": lambda: (_counter(), ()),
        "CTRL_MUX_L": lambda: (_ctrl_mux_lr("CMD_L"), ()),
        "CTRL_MUX_R": lambda: (_ctrl_mux_lr("CMD_R"), ()),
        "CTRL_MUX_K": lambda: (_ctrl_mux_k(), ()),
        "CTRL_DMUX_K": lambda: (_ctrl_dmux_k(), ()),
        "CTRL_SHIFT": _ctrl_shift,
        "CHOOSE_L": lambda: (_choose_l(), ()),
        "CHOOSE_R": lambda: (_choose_r(), ()),
        "CHOOSE_K": lambda: (_choose_k(), ()),
        "DUP_K": lambda: (_dup_k(), ()),
        "PC1": lambda: (_pc1(), ()),
        "SHIFT_C": lambda: (_shift_register(0), ()),
        "SHIFT_D": lambda: (_shift_register(1), ()),
        "PC2": lambda: (_pc2(), ()),
        "IP": lambda: (_ip(), ()),
        "SPLIT": lambda: (_split(), ()),
        "XOR32": lambda: (_xor32(), ()),
        "FP_JOIN": lambda: (_fp_join(), ()),
        "E": lambda: (_e(), ()),
        "XOR48": lambda: (_xor48(options), ()),
        "P": lambda: (_p(options), ()),
    }
    for i in range(1, 9):
        builders["SBOX_%d" % i] = lambda i=i: (_sbox(i), ())
    if block_id not in builders:
        raise ValueError("unknown block %r" % block_id)
    cycle, prologue = builders[block_id]()
    return ProcessBehavior(block_id, cycle, prologue, options)


def environment_behavior(crypt, data, key, options=DEFAULT_OPTIONS):
    """Sequential closing environment: offers one (CRYPT, DATA, KEY) triplet,
    accepts only the correct OUTPUT, and stops."""
    expected = df.des_apply(data, key, crypt)
    prologue = [Send("CRYPT", (lit(crypt),)),
                Send("DATA", (lit(data),)),
                Send("KEY", (lit(key),)),
                RecvLit("OUTPUT", (expected,))]
    return ProcessBehavior("ENV", (), prologue, options)
