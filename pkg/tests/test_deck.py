import itertools

import pytest

from cardmin.deck import (
    CLUB,
    HEART,
    Card,
    Commitment,
    E3Kind,
    Face,
    complement,
    decode_bit,
    decode_e3,
    e3,
    encode_bit,
    parse_symbols,
    render_symbols,
)
from cardmin.errors import MalformedEncoding


def test_bit_zero_is_club_heart():
    assert encode_bit(0).cards == (CLUB, HEART)


def test_bit_one_is_heart_club():
    assert encode_bit(1).cards == (HEART, CLUB)


@pytest.mark.parametrize("b", [0, 1])
def test_swapping_commitment_negates(b):
    c1, c2 = encode_bit(b).cards
    assert decode_bit((c2, c1)) == 1 - b


@pytest.mark.parametrize("b", [0, 1])
def test_commitment_has_one_of_each(b):
    assert sorted(encode_bit(b).cards) == [CLUB, HEART]


def test_encode_bit_rejects_non_bits():
    with pytest.raises(ValueError):
        encode_bit(2)


def test_commitment_invariant_enforced():
    with pytest.raises(MalformedEncoding):
        Commitment(0, (HEART, CLUB))
    with pytest.raises(MalformedEncoding):
        Commitment(0, (CLUB, CLUB))


def test_e3_examples():
    assert e3(E3Kind.CLUB_CODED, 1).symbols == (HEART, CLUB, HEART)
    assert e3(E3Kind.HEART_CODED, 0).symbols == (HEART, CLUB, CLUB)
    assert e3(E3Kind.CLUB_CODED, 0).symbols == (CLUB, HEART, HEART)


def test_decode_e3_example():
    assert decode_e3((HEART, CLUB, HEART)) == (E3Kind.CLUB_CODED, 1)


@pytest.mark.parametrize("kind,i", list(itertools.product(E3Kind, range(3))))
def test_e3_round_trip(kind, i):
    assert decode_e3(e3(kind, i).symbols) == (kind, i)


@pytest.mark.parametrize("i", range(3))
def test_club_and_heart_coded_are_complements(i):
    assert complement(e3(E3Kind.CLUB_CODED, i).symbols) == e3(E3Kind.HEART_CODED, i).symbols


@pytest.mark.parametrize("triple", ["CCC", "HHH", "CC", "CHCH"])
def test_decode_e3_malformed(triple):
    with pytest.raises(MalformedEncoding):
        decode_e3(parse_symbols(triple))


def test_every_three_card_pattern_decodes_or_is_uniform():
    for triple in itertools.product((CLUB, HEART), repeat=3):
        if len(set(triple)) == 1:
            with pytest.raises(MalformedEncoding):
                decode_e3(triple)
        else:
            kind, v = decode_e3(triple)
            assert e3(kind, v).symbols == triple


def test_text_rendering():
    cards = [Card(s, Face.DOWN, uid) for uid, s in enumerate(encode_bit(0).cards)]
    assert "".join(c.render() for c in cards) == "??"
    assert "".join(c.turned(Face.UP).render() for c in cards) == "CH"
    assert render_symbols(parse_symbols("HCC")) == "HCC"


def test_symbols_are_ordered():
    assert CLUB < HEART
    assert sorted([HEART, CLUB]) == [CLUB, HEART]
