from collections import Counter
from fractions import Fraction
from itertools import product

import pytest

from cardmin.deck import CLUB, HEART, E3Kind
from cardmin.engine import ProtocolBuild, check_structure, count_shuffles, execute_all
from cardmin.errors import FreeCardUnavailable, MalformedEncoding, UnsupportedArity
from cardmin.protocols import (
    add_integers,
    build_add_commitments,
    build_add_integers,
    build_e3_from_commitment,
    build_mod3,
    drop_shuffle,
    e3_from_commitment,
    get_build,
    open_triple,
)

from oracles import add_commitments_outcomes, add_commitments_result, add_integers_outcome, all_bits, e3_chars


def revealed(leaf, prefix):
    return [e.split("=")[1] for e in leaf.trace if e.startswith(prefix)]


@pytest.mark.parametrize("a,b", list(product((0, 1), repeat=2)))
def test_add_commitments_matches_oracle(a, b):
    leaves = execute_all(build_add_commitments(), (a, b))
    expected = [add_commitments_result(c) for c in add_commitments_outcomes(a, b)]
    assert len(leaves) == 4
    for leaf, (sym, marker, value) in zip(leaves, expected):
        assert leaf.probability == Fraction(1, 4)
        assert revealed(leaf, "REVEAL@[1]=") == [sym]
        assert revealed(leaf, "REVEAL@[0,1,2]=") == [e3_chars(marker, value)]
        assert value == a + b


def test_add_commitments_zero_zero():
    leaves = execute_all(build_add_commitments(), (0, 0))
    p_club = sum(l.probability for l in leaves if revealed(l, "REVEAL@[1]=") == ["C"])
    assert p_club == Fraction(1, 2)
    club_triples = {revealed(l, "REVEAL@[0,1,2]=")[0] for l in leaves if revealed(l, "REVEAL@[1]=") == ["C"]}
    assert club_triples == {e3_chars("C", 0)}


def test_add_commitments_identity_outcome():
    leaf = execute_all(build_add_commitments(), (1, 0))[0]
    assert leaf.outcomes == (0, 0)
    assert revealed(leaf, "REVEAL@[1]=") == ["C"]
    assert revealed(leaf, "REVEAL@[0,1,2]=") == ["HCH"]


def test_add_commitments_one_one_gives_two():
    for leaf in execute_all(build_add_commitments(), (1, 1)):
        triple = revealed(leaf, "REVEAL@[0,1,2]=")[0]
        marker = revealed(leaf, "REVEAL@[1]=")[0]
        assert triple == e3_chars(marker, 2)


@pytest.mark.parametrize("a,b", list(product(range(3), repeat=2)))
def test_add_integers_matches_index_algebra(a, b):
    leaves = execute_all(build_add_integers(), (a, b))
    assert len(leaves) == 3
    for r, leaf in enumerate(leaves):
        s, result = add_integers_outcome(a, b, r)
        assert leaf.probability == Fraction(1, 3)
        assert revealed(leaf, "REVEAL@[3,4,5]=") == [e3_chars("H", s)]
        assert revealed(leaf, "REVEAL@[0,1,2]=") == [result]
        assert result == e3_chars("C", (a + b) % 3)


def test_add_integers_identity_shift_reveals_b():
    for a, b in product(range(3), repeat=2):
        leaf = execute_all(build_add_integers(), (a, b))[0]
        assert revealed(leaf, "REVEAL@[3,4,5]=") == [e3_chars("H", b)]


def test_add_integers_two_plus_two():
    for leaf in execute_all(build_add_integers(), (2, 2)):
        assert revealed(leaf, "REVEAL@[0,1,2]=") == [e3_chars("C", 1)]


def test_add_integers_rejects_bad_layout():
    # commitments where encodings are expected: some opened triple is not heart-coded
    protocol = ProtocolBuild(add_integers(0, open_triple(0)), 3)
    raised = 0
    for x in all_bits(3):
        try:
            execute_all(protocol, x)
        except MalformedEncoding:
            raised += 1
    assert raised > 0


@pytest.mark.parametrize("kind,free,x,want", [
    (E3Kind.HEART_CODED, CLUB, 0, "HCC"),
    (E3Kind.HEART_CODED, CLUB, 1, "CHC"),
    (E3Kind.CLUB_CODED, HEART, 1, "HCH"),
    (E3Kind.CLUB_CODED, HEART, 0, "CHH"),
])
def test_e3_from_commitment(kind, free, x, want):
    (leaf,) = execute_all(build_e3_from_commitment(kind, free), (x,))
    assert revealed(leaf, "REVEAL@[0,1,2]=") == [want]
    assert want == e3_chars("H" if kind is E3Kind.HEART_CODED else "C", x)


def test_e3_from_commitment_needs_matching_free_card():
    with pytest.raises(ValueError):
        e3_from_commitment(E3Kind.HEART_CODED, HEART, 0)
    protocol = ProtocolBuild(e3_from_commitment(E3Kind.HEART_CODED, CLUB, 0) + open_triple(0), 1)
    with pytest.raises(FreeCardUnavailable):
        execute_all(protocol, (0,))


@pytest.mark.parametrize("n,k", [(n, k) for n in (3, 4, 5) for k in range(3)])
def test_mod3_correct_on_every_leaf(n, k):
    protocol = build_mod3(n, k)
    for x in all_bits(n):
        leaves = execute_all(protocol, x)
        assert len(leaves) == 4 * 3 ** (n - 2)
        assert {leaf.output for leaf in leaves} == {int(sum(x) % 3 == k)}


@pytest.mark.parametrize("n", range(3, 8))
def test_mod3_structure(n):
    protocol = build_mod3(n, 0)
    assert count_shuffles(protocol) == n
    assert protocol.deck_size == 2 * n
    summary = check_structure(protocol)
    assert summary.takes > 0


def test_mod3_arity():
    with pytest.raises(UnsupportedArity):
        build_mod3(2, 0)
    with pytest.raises(ValueError):
        build_mod3(4, 3)


def test_first_reveal_is_fair_and_s_is_uniform():
    protocol = build_mod3(3, 0)
    for x in all_bits(3):
        first = Counter()
        s_vals = Counter()
        for leaf in execute_all(protocol, x):
            first[leaf.trace[2]] += leaf.probability
            s_vals[revealed(leaf, "REVEAL@[3,4,5]=")[0]] += leaf.probability
        assert set(first.values()) == {Fraction(1, 2)}
        assert len(s_vals) == 3 and set(s_vals.values()) == {Fraction(1, 3)}


def test_drop_shuffle():
    protocol = build_mod3(4, 0)
    for i in range(4):
        assert count_shuffles(drop_shuffle(protocol, i)) == 3


def test_registry():
    assert get_build("mod3:5:2").n == 5
    assert get_build("add2commit").n == 2
    assert get_build("add2int").input_values == (0, 1, 2)
    with pytest.raises(KeyError):
        get_build("xor")
