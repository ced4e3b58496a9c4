import json
import math
from fractions import Fraction

import pytest

from cardmin.deck import CLUB, HEART, Card, Face
from cardmin.engine import (
    DeckState,
    ExecutionLeaf,
    Output,
    Permute,
    ProtocolBuild,
    Reveal,
    Shuffle,
    TakeFromFree,
    _conserved,
    check_structure,
    count_shuffles,
    depth_bound,
    execute_all,
    replay,
    sample_run,
)
from cardmin.errors import (
    ArityMismatch,
    BranchTableIncomplete,
    CardConservationViolated,
    FreeCardUnavailable,
    NonTermination,
    NonUniformShuffleCount,
    StructuralError,
)
from cardmin.protocols import build_add_commitments, build_mod3
from cardmin.shuffles import Permutation, random_cut

from oracles import all_bits


def output_only(bit=0, n=1):
    return ProtocolBuild((Output(bit),), n, "const")


def test_output_only_protocol():
    (leaf,) = execute_all(output_only(0), (1,))
    assert leaf.probability == 1 and leaf.output == 0 and leaf.trace == ()
    assert count_shuffles(output_only()) == 0


def test_div3_n3_all_zero_input():
    leaves = execute_all(build_mod3(3, 0), (0, 0, 0))
    assert len(leaves) == 2 * 2 * 3
    assert all(leaf.output == 1 for leaf in leaves)


@pytest.mark.parametrize("x", all_bits(4))
def test_div3_n4_probability_sums_to_one(x):
    leaves = execute_all(build_mod3(4, 0), x)
    assert len(leaves) == 36
    assert sum(leaf.probability for leaf in leaves) == 1
    assert all(leaf.probability == Fraction(1, 36) for leaf in leaves)


def test_leaves_in_canonical_order():
    leaves = execute_all(build_mod3(4, 0), (1, 0, 1, 1))
    keys = [leaf.outcomes for leaf in leaves]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    assert execute_all(build_mod3(4, 0), (1, 0, 1, 1)) == leaves


def test_sample_run_is_deterministic_and_a_member():
    protocol = build_mod3(4, 0)
    first = sample_run(protocol, (1, 0, 1, 1), seed=42)
    assert sample_run(protocol, (1, 0, 1, 1), seed=42) == first
    assert first in execute_all(protocol, (1, 0, 1, 1))


def test_sampled_reveal_frequency_matches_exact_half():
    # exact value 1/2 comes from enumerating the four outcomes
    protocol = build_add_commitments()
    runs = 10_000
    clubs = sum(sample_run(protocol, (1, 0), seed).trace[2] == "REVEAL@[1]=C" for seed in range(runs))
    sd = math.sqrt(runs * 0.25)
    assert abs(clubs - runs / 2) < 5 * sd


@pytest.mark.parametrize("n", [3, 4])
def test_count_shuffles_mod3(n):
    assert count_shuffles(build_mod3(n, 0)) == n


def test_non_uniform_shuffle_count():
    root = (Reveal((0,), {
        (CLUB,): (Shuffle(random_cut(2)), Output(0)),
        (HEART,): (Output(1),),
    }),)
    with pytest.raises(NonUniformShuffleCount):
        count_shuffles(ProtocolBuild(root, 1))


def test_missing_branch():
    root = (Reveal((0,), {(CLUB,): (Output(0),)}),)
    protocol = ProtocolBuild(root, 1)
    assert execute_all(protocol, (0,))[0].output == 0
    with pytest.raises(BranchTableIncomplete):
        execute_all(protocol, (1,))


def test_take_without_free_card():
    protocol = ProtocolBuild((TakeFromFree(CLUB, 0), Output(0)), 1)
    with pytest.raises(FreeCardUnavailable):
        execute_all(protocol, (0,))
    with pytest.raises(FreeCardUnavailable):
        check_structure(protocol)


def test_depth_guard():
    steps = tuple(Permute((0, 1), Permutation((1, 0)), "swap") for _ in range(depth_bound(1)))
    protocol = ProtocolBuild(steps + (Output(0),), 1)
    with pytest.raises(NonTermination):
        execute_all(protocol, (0,))
    with pytest.raises(NonTermination):
        execute_all(build_mod3(3, 0), (0, 0, 0), max_depth=5)


def test_step_list_must_terminate():
    with pytest.raises(StructuralError):
        execute_all(ProtocolBuild((Shuffle(random_cut(2)),), 1), (0,))


def test_arity_checked():
    with pytest.raises(ArityMismatch):
        execute_all(build_mod3(3, 0), (0, 1))


def test_conservation_check_detects_lost_card():
    state = DeckState.deal((0, 1))
    _conserved(state, 0b1111)
    broken = DeckState(state.sequence[:-1], (), state.n_clubs, state.n_hearts)
    with pytest.raises(CardConservationViolated):
        _conserved(broken, 0b1111)
    dup = DeckState(state.sequence[:-1] + (state.sequence[0],), (), 2, 2)
    with pytest.raises(CardConservationViolated):
        _conserved(dup, 0b1111)


def test_reveal_keep_leaves_card_in_place():
    root = (Reveal((0,), {(CLUB,): (Reveal((0,), {(CLUB,): (Output(1),)}, keep=True),)}, keep=True),)
    (leaf,) = execute_all(ProtocolBuild(root, 1), (0,))
    assert leaf.trace == ("REVEAL@[0]=C", "REVEAL@[0]=C") and leaf.output == 1


def test_deal_assigns_uids_in_order():
    state = DeckState.deal((1, 0))
    assert [c.uid for c in state.sequence] == [0, 1, 2, 3]
    assert [c.symbol for c in state.sequence] == [HEART, CLUB, CLUB, HEART]
    assert state.render() == "???? | free:"


@pytest.mark.parametrize("x", all_bits(4))
def test_traces_replay_from_public_events(x):
    protocol = build_mod3(4, 1)
    for leaf in execute_all(protocol, x):
        assert replay(protocol, leaf.trace) == leaf.output


def test_traces_hide_card_identities():
    leaf = execute_all(build_mod3(3, 0), (1, 1, 0))[5]
    for event in leaf.trace:
        assert event.startswith(("RC(", "RSC(", "REVEAL@", "PERM:", "TAKE:"))


def test_leaf_json_schema():
    leaf = execute_all(build_mod3(3, 0), (0, 0, 1))[0]
    obj = json.loads(json.dumps(leaf.to_json()))
    assert set(obj) == {"trace", "prob", "output"}
    assert obj["prob"] == "1/12"
    back = ExecutionLeaf.from_json(obj)
    assert (back.trace, back.probability, back.output) == (leaf.trace, leaf.probability, leaf.output)


def test_structure_summary_mod3():
    summary = check_structure(build_mod3(5, 2))
    # first reveal x three s-values per addition x final reveal
    assert summary.paths == 2 * 3 ** 3 * 2
    assert summary.max_depth <= depth_bound(5)


def test_card_render_face_down():
    assert Card(CLUB, Face.DOWN, 0).render() == "?"
