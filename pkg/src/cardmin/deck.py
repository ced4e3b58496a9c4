"""Two-symbol cards, bit commitments and the three-card Z/3 encodings."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import MalformedEncoding


class CardSymbol(enum.IntEnum):
    CLUB = 0
    HEART = 1

    @property
    def char(self) -> str:
        return "C" if self is CardSymbol.CLUB else "H"

    @property
    def other(self) -> "CardSymbol":
        return CardSymbol(1 - self)

    @classmethod
    def from_char(cls, c: str) -> "CardSymbol":
        try:
            return {"C": cls.CLUB, "H": cls.HEART}[c.upper()]
        except KeyError:
            raise ValueError(f"unknown card symbol {c!r}") from None


CLUB = CardSymbol.CLUB
HEART = CardSymbol.HEART


class Face(enum.Enum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class Card:
    symbol: CardSymbol
    face: Face
    uid: int

    def turned(self, face: Face) -> "Card":
        return Card(self.symbol, face, self.uid)

    def render(self) -> str:
        return self.symbol.char if self.face is Face.UP else "?"


class E3Kind(enum.Enum):
    CLUB_CODED = "club"
    HEART_CODED = "heart"

    @property
    def marker(self) -> CardSymbol:
        """The single minority symbol whose position carries the value."""
        return CLUB if self is E3Kind.CLUB_CODED else HEART


@dataclass(frozen=True)
class Commitment:
    bit: int
    cards: tuple[CardSymbol, CardSymbol]

    def __post_init__(self):
        if self.cards[0] == self.cards[1]:
            raise MalformedEncoding(f"commitment needs two distinct symbols, got {self.cards}")
        if self.cards != _COMMIT[self.bit]:
            raise MalformedEncoding(f"{render_symbols(self.cards)} does not encode bit {self.bit}")


@dataclass(frozen=True)
class E3Encoding:
    kind: E3Kind
    value: int
    symbols: tuple[CardSymbol, CardSymbol, CardSymbol]


_COMMIT = {0: (CLUB, HEART), 1: (HEART, CLUB)}


def encode_bit(b: int) -> Commitment:
    if b not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {b!r}")
    return Commitment(b, _COMMIT[b])


def decode_bit(cards: Sequence[CardSymbol]) -> int:
    pair = tuple(cards)
    for bit, pattern in _COMMIT.items():
        if pair == pattern:
            return bit
    raise MalformedEncoding(f"{render_symbols(pair)} is not a commitment")


def e3(kind: E3Kind, i: int) -> E3Encoding:
    if i not in (0, 1, 2):
        raise ValueError(f"E3 value must be in Z/3Z, got {i!r}")
    marker = kind.marker
    symbols = tuple(marker if j == i else marker.other for j in range(3))
    return E3Encoding(kind, i, symbols)


def decode_e3(triple: Sequence[CardSymbol]) -> tuple[E3Kind, int]:
    triple = tuple(triple)
    if len(triple) != 3:
        raise MalformedEncoding(f"E3 encodings have three cards, got {len(triple)}")
    for kind in E3Kind:
        hits = [j for j, s in enumerate(triple) if s == kind.marker]
        if len(hits) == 1:
            return kind, hits[0]
    raise MalformedEncoding(f"{render_symbols(triple)} has no single minority symbol")


def complement(symbols: Iterable[CardSymbol]) -> tuple[CardSymbol, ...]:
    return tuple(s.other for s in symbols)


def render_symbols(symbols: Iterable[CardSymbol]) -> str:
    return "".join("CH"[s] for s in symbols)


def parse_symbols(text: str) -> tuple[CardSymbol, ...]:
    return tuple(CardSymbol.from_char(c) for c in text)
