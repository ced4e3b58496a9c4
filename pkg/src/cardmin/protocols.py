"""Builders for the Z/3 addition subprotocols and the 2n-card mod-3 protocol.

Fragments are written in continuation style: each takes the step list(s) to
run afterwards and returns a step tuple. Continuations are shared between
branches, so a build is a DAG whose unfolding is the protocol tree.

Layout convention for ``build_mod3``: the running sum is kept as a three-card
encoding at positions 0..2, and the next input's commitment sits at 3..4.
"""
from __future__ import annotations

from functools import partial
from typing import Sequence

from .deck import CLUB, HEART, CardSymbol, E3Kind, decode_e3, e3, encode_bit
from .engine import Output, Permute, ProtocolBuild, Reveal, Shuffle, TakeFromFree
from .errors import MalformedEncoding, UnsupportedArity
from .shuffles import Permutation, random_cut, random_k_section_cut, rotation

# (a0, a1, a2, b0, b1, b2) -> (a0, b2, a1, b1, a2, b0)
_INTERLEAVE = Permutation.from_arrangement([0, 5, 1, 4, 2, 3])
_SWAP = Permutation((1, 0))
_REVERSE3 = Permutation((2, 1, 0))
_SWAP_BLOCKS = Permutation((3, 4, 5, 0, 1, 2))


def _span(p: int, size: int) -> tuple[int, ...]:
    return tuple(range(p, p + size))


def add_commitments(p: int, on_club: tuple, on_heart: tuple) -> tuple:
    """Add the commitments at ``p..p+3`` in Z/3.

    Both continuations find the sum as a three-card encoding at ``p..p+2``:
    club-coded after a revealed club, heart-coded after a revealed heart. The
    revealed card goes to the free pile.
    """
    heart = (Permute(_span(p, 3), _REVERSE3, f"reverse@[{p},{p + 1},{p + 2}]"),) + tuple(on_heart)
    return (
        Shuffle(random_k_section_cut(2, 2, _span(p, 4))),
        Shuffle(random_cut(2, (p + 1, p + 2))),
        Reveal((p + 1,), {(CLUB,): tuple(on_club), (HEART,): heart}),
    )


def _expect_heart_coded(observed: tuple[CardSymbol, ...]) -> None:
    kind, _ = decode_e3(observed)
    if kind is not E3Kind.HEART_CODED:
        raise MalformedEncoding(f"expected a heart-coded triple, saw club-coded {observed}")


def add_integers(p: int, then: tuple) -> tuple:
    """Club-coded ``a`` at ``p..p+2`` plus heart-coded ``b`` at ``p+3..p+5``.

    Leaves club-coded ``(a + b) mod 3`` at ``p..p+2``; the opened heart-coded
    triple (two clubs, one heart) joins the free pile.
    """
    six = _span(p, 6)
    three = _span(p, 3)
    branches = {}
    for s in range(3):
        shift = Permute(three, rotation(3, -s % 3), f"shift+{s}@[{p},{p + 1},{p + 2}]")
        branches[e3(E3Kind.HEART_CODED, s).symbols] = (shift,) + tuple(then)
    return (
        Permute(six, _INTERLEAVE, f"interleave@[{p}..{p + 5}]"),
        Shuffle(random_k_section_cut(3, 2, six)),
        Permute(six, _INTERLEAVE.inverse(), f"deinterleave@[{p}..{p + 5}]"),
        Reveal(_span(p + 3, 3), branches, check=_expect_heart_coded),
    )


def e3_from_commitment(kind: E3Kind, free_symbol: CardSymbol, p: int) -> tuple:
    """Turn the commitment at ``p, p+1`` plus one free card into an encoding at ``p..p+2``.

    Heart-coded uses (second, first, free club); club-coded uses
    (first, second, free heart).
    """
    if kind is E3Kind.HEART_CODED and free_symbol is not CLUB:
        raise ValueError("a heart-coded encoding is completed with a free club")
    if kind is E3Kind.CLUB_CODED and free_symbol is not HEART:
        raise ValueError("a club-coded encoding is completed with a free heart")
    steps = ()
    if kind is E3Kind.HEART_CODED:
        steps = (Permute((p, p + 1), _SWAP, f"swap@[{p},{p + 1}]"),)
    return steps + (TakeFromFree(free_symbol, p + 2),)


def open_triple(p: int = 0) -> tuple:
    """Turn over ``p..p+2`` and output 1 iff it encodes 0 (either kind)."""
    branches = {}
    for kind in E3Kind:
        for v in range(3):
            branches[e3(kind, v).symbols] = (Output(int(v == 0)),)
    return (Reveal(_span(p, 3), branches),)


def _mod3_tail(i: int, n: int, finish: tuple) -> tuple:
    if i > n:
        return finish
    return e3_from_commitment(E3Kind.HEART_CODED, CLUB, 3) + add_integers(0, _mod3_tail(i + 1, n, finish))


def _reveal_position(k: int) -> tuple:
    return (Reveal((k,), {(CLUB,): (Output(1),), (HEART,): (Output(0),)}),)


def build_mod3(n: int, k: int = 0, *, finish: tuple | None = None) -> ProtocolBuild:
    """2n-card protocol outputting 1 iff the input weight is ``k`` mod 3."""
    if n < 3:
        raise UnsupportedArity(f"the mod-3 protocol needs n >= 3, got {n}")
    if k not in (0, 1, 2):
        raise ValueError(f"k must be 0, 1 or 2, got {k}")
    if finish is None:
        finish = _reveal_position(k)
    rest = _mod3_tail(4, n, finish)
    on_club = e3_from_commitment(E3Kind.HEART_CODED, CLUB, 3) + add_integers(0, rest)
    on_heart = (
        e3_from_commitment(E3Kind.CLUB_CODED, HEART, 3)
        + (Permute(_span(0, 6), _SWAP_BLOCKS, "swap-blocks@[0..5]"),)
        + add_integers(0, rest)
    )
    name = f"mod3:{n}:{k}"
    return ProtocolBuild(
        add_commitments(0, on_club, on_heart), n, name,
        f"{2 * n}-card protocol: 1 iff sum of {n} bits = {k} (mod 3)",
    )


def build_add_commitments(*, open_result: bool = True) -> ProtocolBuild:
    """Standalone two-input adder.

    With ``open_result`` the resulting triple is turned over (a demo that leaks
    the sum); otherwise the leftmost card is read privately, giving 1 iff a+b = 0.
    """
    if open_result:
        tail = open_triple(0)
        on_club = on_heart = tail
    else:
        on_club = (Reveal((0,), {(CLUB,): (Output(1),), (HEART,): (Output(0),)}),)
        on_heart = (Reveal((0,), {(HEART,): (Output(1),), (CLUB,): (Output(0),)}),)
    return ProtocolBuild(add_commitments(0, on_club, on_heart), 2, "add2commit",
                         "add two committed bits in Z/3")


def _e3_pair(inputs: Sequence[int]) -> tuple[CardSymbol, ...]:
    a, b = inputs
    return e3(E3Kind.CLUB_CODED, a).symbols + e3(E3Kind.HEART_CODED, b).symbols


def build_add_integers(*, open_result: bool = True) -> ProtocolBuild:
    """Standalone Z/3 adder dealt as club-coded ``a`` then heart-coded ``b``."""
    tail = open_triple(0) if open_result else _reveal_position(0)
    return ProtocolBuild(add_integers(0, tail), 2, "add2int", "add two Z/3 encodings",
                         encoder=_e3_pair, input_values=(0, 1, 2))


def _commitment_and_free(free_symbol: CardSymbol, inputs: Sequence[int]) -> tuple[CardSymbol, ...]:
    (x,) = inputs
    return encode_bit(x).cards + (free_symbol,)


def build_e3_from_commitment(kind: E3Kind, free_symbol: CardSymbol) -> ProtocolBuild:
    """One commitment plus a spare card that is opened first to make it free."""
    body = e3_from_commitment(kind, free_symbol, 0) + open_triple(0)
    root = (Reveal((2,), {(free_symbol,): body}),)
    return ProtocolBuild(root, 1, f"e3from:{kind.value}", "commitment to three-card encoding",
                         encoder=partial(_commitment_and_free, free_symbol))


def drop_shuffle(build: ProtocolBuild, ordinal: int) -> ProtocolBuild:
    """Copy of ``build`` with the ``ordinal``-th shuffle (0-based, per path) removed."""
    memo: dict[tuple[int, int], tuple] = {}

    def rewrite(steps: tuple, seen: int) -> tuple:
        key = (id(steps), seen)
        if key in memo:
            return memo[key]
        out = []
        for step in steps:
            if isinstance(step, Shuffle):
                seen += 1
                if seen - 1 == ordinal:
                    continue
            if isinstance(step, Reveal):
                branches = {obs: rewrite(tuple(b), seen) for obs, b in step.branches.items()}
                step = Reveal(step.positions, branches, step.keep, step.check)
            out.append(step)
        memo[key] = tuple(out)
        return memo[key]

    return ProtocolBuild(rewrite(build.root, 0), build.n, f"{build.name}-shuffle{ordinal}",
                         build.description, build.encoder, build.input_values, build.committed)


def get_build(name: str) -> ProtocolBuild:
    """Look up a builder by registry name: ``add2commit``, ``add2int`` or ``mod3:<n>:<k>``."""
    if name == "add2commit":
        return build_add_commitments()
    if name == "add2int":
        return build_add_integers()
    parts = name.split(":")
    if len(parts) == 3 and parts[0] == "mod3":
        return build_mod3(int(parts[1]), int(parts[2]))
    raise KeyError(f"unknown protocol {name!r}")


REGISTRY_NAMES = ("add2commit", "add2int", "mod3:<n>:<k>")
