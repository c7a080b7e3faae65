"""Block behavior tests: cycles, determinism, joins, and label rendering."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asyncdes import desfunc as df
from asyncdes.blocks import (BLOCK_TAXONOMY, CONTROLLER_PROCESSES, Label,
                             SemanticsOptions, environment_behavior,
                             make_block, parse_offer, render_offer)
from asyncdes.desfunc import ABSTRACT, CONCRETE
from asyncdes.network import Network, explore

TAU_JOIN = SemanticsOptions(tau_on_join=True)


def local_lts(block_id, options=SemanticsOptions(), domain=ABSTRACT):
    b = make_block(block_id, domain, options)
    return explore(Network([b], domain, frozenset(), name=block_id))


def behavior_states(b, max_states=10000):
    """Enumerate reachable local states by expanding wildcard inputs over the
    abstract domain."""
    from asyncdes.blocks import enumerate_tag
    seen = {b.initial_state()}
    stack = [b.initial_state()]
    while stack:
        s = stack.pop()
        for gate, pattern, token in b.moves(s):
            choices = []
            for kind, payload in pattern:
                if kind == "lit":
                    choices.append((payload,))
                else:
                    choices.append(enumerate_tag(payload, ABSTRACT))
            for offers in itertools.product(*choices):
                t = b.step(s, token, offers)
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
                    assert len(seen) <= max_states
    return seen


class TestLabels:
    def test_render_forms(self):
        assert Label("CS", (7,)).render() == "CS !7"
        assert Label("CRYPT", (True,)).render() == "CRYPT !true"
        assert Label("CRYPT", (False,)).render() == "CRYPT !false"
        assert Label(None).render() == "i"
        w = CONCRETE.word(64, 0x0123456789ABCDEF)
        assert Label("OUTPUT", (w,)).render() == "OUTPUT !0123456789ABCDEF"
        assert Label("DATA", (ABSTRACT.word(64),)).render() == "DATA !*"

    def test_offer_width_rendering(self):
        assert render_offer(CONCRETE.word(6, 0x3F)) == "3F"
        assert render_offer(CONCRETE.word(28, 1)) == "0000001"

    @given(st.integers(0, 2**48 - 1))
    def test_parse_render_round_trip(self, v):
        w = CONCRETE.word(48, v)
        assert parse_offer(("word", 48), render_offer(w)) == w

    def test_parse_bool_and_nat(self):
        assert parse_offer(("bool",), "true") is True
        assert parse_offer(("nat", (0, 1)), "1") == 1
        assert parse_offer(("word", 64), "*") == ABSTRACT.word(64)


class TestCounter:
    def test_emits_seventeen_steps_then_restarts(self):
        lts = local_lts("COUNTER")
        assert lts.n_states == 17
        # follow the single path: CS !0 ... CS !16 back to the start
        succ = lts.successors()
        state, seen = lts.initial, []
        for _ in range(17):
            (lab, nxt), = succ[state]
            seen.append(lts.labels[lab])
            state = nxt
        assert seen == ["CS !%d" % i for i in range(17)]
        assert state == lts.initial


class TestBlockInvariants:
    @pytest.mark.parametrize("block_id", BLOCK_TAXONOMY)
    def test_deterministic_moves(self, block_id):
        b = make_block(block_id, ABSTRACT)
        for s in behavior_states(b):
            keys = [(g, p) for g, p, _ in b.moves(s)]
            assert len(keys) == len(set(keys)), (block_id, s)

    @pytest.mark.parametrize("block_id",
                             [b for b in BLOCK_TAXONOMY if b != "CTRL_SHIFT"])
    def test_cyclic_through_initial(self, block_id):
        lts = local_lts(block_id)
        assert not lts.deadlock_states()
        # strongly connected: initial reaches all (by construction) and
        # every state reaches the initial state
        rev = [[] for _ in range(lts.n_states)]
        for s, _, d in lts.transitions:
            rev[d].append(s)
        seen = {lts.initial}
        stack = [lts.initial]
        while stack:
            for p in rev[stack.pop()]:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        assert len(seen) == lts.n_states

    def test_ctrl_shift_cyclic_after_first_crypt(self):
        # the crypt flag is read once up front, so the prologue states are
        # left forever; the rest must be one strongly-connected cycle
        lts = local_lts("CTRL_SHIFT")
        assert not lts.deadlock_states()

    def test_abstract_local_sizes_frozen(self):
        expected = {
            "COUNTER": 17, "CTRL_MUX_L": 34, "CTRL_MUX_R": 34,
            "CTRL_MUX_K": 33, "CTRL_DMUX_K": 33, "CTRL_SHIFT": 141,
            "CHOOSE_L": 13, "CHOOSE_R": 17, "CHOOSE_K": 25, "DUP_K": 7,
            "PC1": 3, "SPLIT": 5, "SHIFT_C": 68, "SHIFT_D": 68, "PC2": 7,
            "IP": 5, "XOR32": 7, "FP_JOIN": 7,
            "E": 3, "XOR48": 261, "P": 511,
            **{"SBOX_%d" % i: 3 for i in range(1, 9)},
        }
        for block_id, size in expected.items():
            assert local_lts(block_id).n_states == size, block_id


class TestSboxBlock:
    def test_single_input_single_output_cycle(self):
        b = make_block("SBOX_3", CONCRETE)
        s0 = b.initial_state()
        moves = b.moves(s0)
        assert [(g, p[0][0]) for g, p, _ in moves] == [("B3", "any")]
        w = CONCRETE.word(6, 0b101101)
        s1 = b.step(s0, moves[0][2], (w,))
        (gate, pattern, token), = b.moves(s1)
        assert gate == "S3"
        assert pattern[0] == ("lit", df.sbox_lookup(3, w))
        assert b.step(s1, token, (pattern[0][1],)) == s0


class TestJoins:
    def test_p_join_confluent_all_orders(self):
        # every arrival order of the eight S-box outputs leads to the same
        # output label and the same successor state
        b = make_block("P", ABSTRACT)
        final_states = set()
        outputs = set()
        rng = random.Random(5)
        orders = [list(p) for p in itertools.permutations(range(1, 9), 3)]
        full_orders = [rng.sample(range(1, 9), 8) for _ in range(200)]
        for order in full_orders:
            s = b.initial_state()
            for i in order:
                move = [m for m in b.moves(s) if m[0] == "S%d" % i]
                assert len(move) == 1
                s = b.step(s, move[0][2], (ABSTRACT.word(4),))
            (gate, pattern, token), = b.moves(s)
            assert gate == "F_OUT"
            outputs.add(pattern[0][1])
            final_states.add(s)
            assert b.step(s, token, (pattern[0][1],)) == b.initial_state()
        assert len(final_states) == 1 and len(outputs) == 1
        # partial orders commute as well: the state depends only on the set
        partial = {}
        for order in orders:
            s = b.initial_state()
            for i in order:
                move = [m for m in b.moves(s) if m[0] == "S%d" % i][0]
                s = b.step(s, move[2], (ABSTRACT.word(4),))
            key = frozenset(order)
            assert partial.setdefault(key, s) == s

    def test_tau_on_join_adds_one_state_to_p(self):
        assert (local_lts("P", TAU_JOIN).n_states
                == local_lts("P").n_states + 1)

    def test_tau_on_join_inserts_internal_step(self):
        lts = local_lts("XOR32", TAU_JOIN)
        assert "i" in lts.labels
        assert "i" not in local_lts("XOR32").labels


class TestShiftRegister:
    def drive(self, count, left, value=0x0000001):
        b = make_block("SHIFT_C", CONCRETE)
        s = b.initial_state()
        w = CONCRETE.word(28, value)
        in_move = [m for m in b.moves(s) if m[0] == "C_IN"][0]
        s = b.step(s, in_move[2], (w,))
        cmd_move = [m for m in b.moves(s) if m[0] == "SHIFT"][0]
        s = b.step(s, cmd_move[2], (count, left, False))
        (gate, pattern, token), = b.moves(s)
        assert gate == "C_OUT"
        return pattern[0][1], df.rotate(w, count, left)

    def test_applies_commanded_rotation(self):
        for count in (0, 1, 2):
            for left in (True, False):
                got, want = self.drive(count, left)
                assert got == want

    def test_last_flag_suppresses_loop_back(self):
        b = make_block("SHIFT_C", CONCRETE)
        s = b.initial_state()
        in_move = [m for m in b.moves(s) if m[0] == "C_IN"][0]
        s = b.step(s, in_move[2], (CONCRETE.word(28, 5),))
        cmd_move = [m for m in b.moves(s) if m[0] == "SHIFT"][0]
        s = b.step(s, cmd_move[2], (1, True, True))
        (gate, _, token), = b.moves(s)
        assert gate == "C_OUT"
        s = b.step(s, token, (df.rotate(CONCRETE.word(28, 5), 1, True),))
        assert s == b.initial_state()   # no C_NEXT emission


class TestCtrlShift:
    def test_accepts_next_crypt_before_step_sixteen(self):
        # after the 16th shift command, CRYPT and CS !16 are both enabled
        b = make_block("CTRL_SHIFT", ABSTRACT)
        s = b.initial_state()
        crypt = [m for m in b.moves(s) if m[0] == "CRYPT"][0]
        s = b.step(s, crypt[2], (True,))
        for i in range(16):
            cs = [m for m in b.moves(s) if m[0] == "CS"][0]
            assert cs[1][0] == ("lit", i)
            s = b.step(s, cs[2], (i,))
            cmd = [m for m in b.moves(s) if m[0] == "SHIFT"][0]
            count, left, last = (slot[1] for slot in cmd[1])
            assert (count, left) == df.SHIFT_SCHEDULE.commands(True)[i]
            assert last == (i == 15)
            s = b.step(s, cmd[2], (count, left, last))
        gates = sorted(m[0] for m in b.moves(s))
        assert gates == ["CRYPT", "CS"]

    def test_decrypt_command_stream(self):
        b = make_block("CTRL_SHIFT", ABSTRACT)
        s = b.initial_state()
        crypt = [m for m in b.moves(s) if m[0] == "CRYPT"][0]
        s = b.step(s, crypt[2], (False,))
        cs = [m for m in b.moves(s) if m[0] == "CS"][0]
        s = b.step(s, cs[2], (0,))
        cmd = [m for m in b.moves(s) if m[0] == "SHIFT"][0]
        count, left, last = (slot[1] for slot in cmd[1])
        assert (count, left, last) == (0, False, False)


class TestEnvironment:
    def test_sequential_then_stop(self):
        data = CONCRETE.word(64, 0x0123456789ABCDEF)
        key = CONCRETE.word(64, 0x133457799BBCDFF1)
        env = environment_behavior(True, data, key)
        s = env.initial_state()
        expected_gates = ["CRYPT", "DATA", "KEY", "OUTPUT"]
        for gate in expected_gates:
            moves = env.moves(s)
            assert [m[0] for m in moves] == [gate]
            offers = tuple(slot[1] for slot in moves[0][1])
            s = env.step(s, moves[0][2], offers)
        assert env.moves(s) == []

    def test_output_matched_against_reference(self):
        data = CONCRETE.word(64, 0x0123456789ABCDEF)
        key = CONCRETE.word(64, 0x133457799BBCDFF1)
        env = environment_behavior(True, data, key)
        s = env.initial_state()
        for _ in range(3):
            moves = env.moves(s)
            offers = tuple(slot[1] for slot in moves[0][1])
            s = env.step(s, moves[0][2], offers)
        (gate, pattern, _), = env.moves(s)
        assert gate == "OUTPUT"
        assert pattern[0] == ("lit", df.des_apply(data, key, True))


class TestMakeBlock:
    def test_unknown_block_rejected(self):
        with pytest.raises(ValueError):
            make_block("NO_SUCH_BLOCK")

    def test_sequential_sboxes_orders_spread(self):
        lts_par = local_lts("XOR48")
        lts_seq = local_lts("XOR48", SemanticsOptions(sequential_sboxes=True))
        assert lts_seq.n_states < lts_par.n_states
