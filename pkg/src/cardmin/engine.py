"""Branching-program representation of card protocols and their exact execution.

A protocol is a tuple of steps. Every step list ends in either an ``Output``
or a ``Reveal`` whose branch table maps the observed symbols to the next step
list, so a protocol is a finite tree. ``execute_all`` walks that tree once per
combination of shuffle outcomes and returns one ``ExecutionLeaf`` per path,
with its probability as an exact ``Fraction``.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence, Union

from .deck import Card, CardSymbol, Face, encode_bit, render_symbols, parse_symbols
from .errors import (
    ArityMismatch,
    BranchTableIncomplete,
    CardConservationViolated,
    FreeCardUnavailable,
    NonTermination,
    NonUniformShuffleCount,
    StructuralError,
)
from .shuffles import Permutation, ShuffleSpec


@dataclass(frozen=True)
class Permute:
    positions: tuple[int, ...]
    perm: Permutation
    label: str

    def __post_init__(self):
        _distinct(self.positions, "permute")
        if self.perm.size != len(self.positions):
            raise StructuralError(f"permute {self.label}: {self.perm.size} != {len(self.positions)} positions")

    def event(self) -> str:
        return f"PERM:{self.label}"


@dataclass(frozen=True)
class Shuffle:
    spec: ShuffleSpec

    def event(self) -> str:
        return self.spec.label


@dataclass(frozen=True, eq=False)
class Reveal:
    """Turn over ``positions`` and continue with ``branches[observed]``.

    Revealed cards move to the free pile unless ``keep`` is set. ``check``
    optionally validates an observation missing from the table, so a builder
    can raise a domain error instead of ``BranchTableIncomplete``.
    """

    positions: tuple[int, ...]
    branches: Mapping[tuple[CardSymbol, ...], tuple]
    keep: bool = False
    check: Callable[[tuple[CardSymbol, ...]], None] | None = None

    def __post_init__(self):
        _distinct(self.positions, "reveal")

    def event(self, observed: Sequence[CardSymbol]) -> str:
        pos = ",".join(map(str, self.positions))
        return f"REVEAL@[{pos}]={render_symbols(observed)}"


@dataclass(frozen=True)
class TakeFromFree:
    symbol: CardSymbol
    position: int

    def event(self) -> str:
        return f"TAKE:{self.symbol.char}@{self.position}"


@dataclass(frozen=True)
class Output:
    bit: int


Step = Union[Permute, Shuffle, Reveal, TakeFromFree, Output]


@dataclass(frozen=True, eq=False)
class ProtocolBuild:
    """A protocol tree plus how inputs are laid out as cards.

    By default each of the ``n`` input bits is dealt as a commitment. Fragments
    that start from other layouts supply ``encoder`` (inputs -> symbols) and
    the per-input value range ``input_values``.
    """

    root: tuple
    n: int
    name: str = ""
    description: str = ""
    encoder: Callable[[Sequence[int]], tuple[CardSymbol, ...]] | None = None
    input_values: tuple[int, ...] = (0, 1)
    committed: bool = False

    def deal_symbols(self, inputs: Sequence[int]) -> tuple[CardSymbol, ...]:
        if len(inputs) != self.n:
            raise ArityMismatch(f"protocol expects {self.n} inputs, got {len(inputs)}")
        if any(v not in self.input_values for v in inputs):
            raise ValueError(f"inputs must be drawn from {self.input_values}, got {list(inputs)}")
        if self.encoder is None:
            return tuple(sym for b in inputs for sym in encode_bit(b).cards)
        return tuple(self.encoder(inputs))

    @property
    def deck_size(self) -> int:
        return len(self.deal_symbols([self.input_values[0]] * self.n))


@dataclass(frozen=True)
class DeckState:
    sequence: tuple[Card, ...]
    free_pile: tuple[Card, ...]
    n_clubs: int
    n_hearts: int

    @classmethod
    def from_symbols(cls, symbols: Sequence[CardSymbol]) -> "DeckState":
        """Deal face-down cards, numbering uids in deal order."""
        cards = tuple(Card(sym, Face.DOWN, uid) for uid, sym in enumerate(symbols))
        clubs = sum(1 for s in symbols if s == CardSymbol.CLUB)
        return cls(cards, (), clubs, len(cards) - clubs)

    @classmethod
    def deal(cls, inputs: Sequence[int]) -> "DeckState":
        return cls.from_symbols([sym for b in inputs for sym in encode_bit(b).cards])

    def symbols(self) -> tuple[CardSymbol, ...]:
        return tuple(c.symbol for c in self.sequence)

    def render(self) -> str:
        seq = "".join(c.render() for c in self.sequence)
        free = render_symbols(sorted(c.symbol for c in self.free_pile))
        return f"{seq} | free:{free}"


@dataclass(frozen=True)
class ExecutionLeaf:
    trace: tuple[str, ...]
    probability: Fraction
    output: int
    outcomes: tuple[int, ...] = field(default=(), compare=True)

    def to_json(self) -> dict:
        p = self.probability
        return {"trace": list(self.trace), "prob": f"{p.numerator}/{p.denominator}", "output": self.output}

    @classmethod
    def from_json(cls, obj: Mapping) -> "ExecutionLeaf":
        return cls(tuple(obj["trace"]), Fraction(obj["prob"]), int(obj["output"]))


def depth_bound(n: int) -> int:
    return 10 + 6 * n


def _ensure_steps(steps) -> tuple:
    if not steps:
        raise StructuralError("empty step list: every path must end in OUTPUT")
    last = steps[-1]
    if not isinstance(last, (Output, Reveal)):
        raise StructuralError(f"step list ends with {type(last).__name__}, not OUTPUT or REVEAL")
    return steps


def _distinct(positions, what):
    if len(set(positions)) != len(positions):
        raise StructuralError(f"{what} positions {list(positions)} repeat")


def _check_positions(positions, length, what):
    # distinctness is enforced when steps are constructed
    if positions and (min(positions) < 0 or max(positions) >= length):
        raise StructuralError(f"{what} positions {list(positions)} invalid for a sequence of {length}")


@lru_cache(maxsize=None)
def _moves(positions: tuple[int, ...], perm: Permutation) -> tuple[tuple[int, int], ...]:
    """Absolute (source, destination) pairs for ``perm`` acting on ``positions``."""
    return tuple((positions[src], positions[dest]) for src, dest in enumerate(perm.mapping)
                 if src != dest)


def _permute(state: DeckState, positions, perm: Permutation) -> DeckState:
    _check_positions(positions, len(state.sequence), "permute")
    old = state.sequence
    seq = list(old)
    for src, dest in _moves(positions, perm):
        seq[dest] = old[src]
    return DeckState(tuple(seq), state.free_pile, state.n_clubs, state.n_hearts)


def _reveal(state: DeckState, step: Reveal) -> tuple[DeckState, tuple[CardSymbol, ...]]:
    _check_positions(step.positions, len(state.sequence), "reveal")
    observed = tuple(state.sequence[p].symbol for p in step.positions)
    if step.keep:
        seq = list(state.sequence)
        for p in step.positions:
            seq[p] = seq[p].turned(Face.UP)
        return DeckState(tuple(seq), state.free_pile, state.n_clubs, state.n_hearts), observed
    taken = set(step.positions)
    seq = tuple(c for i, c in enumerate(state.sequence) if i not in taken)
    free = state.free_pile + tuple(state.sequence[p].turned(Face.UP) for p in step.positions)
    return DeckState(seq, free, state.n_clubs, state.n_hearts), observed


def _take(state: DeckState, step: TakeFromFree) -> DeckState:
    candidates = [c for c in state.free_pile if c.symbol == step.symbol]
    if not candidates:
        raise FreeCardUnavailable(f"no free {step.symbol.name} in pile")
    if not 0 <= step.position <= len(state.sequence):
        raise StructuralError(f"take destination {step.position} outside sequence of {len(state.sequence)}")
    card = min(candidates, key=lambda c: c.uid)
    free = tuple(c for c in state.free_pile if c.uid != card.uid)
    seq = list(state.sequence)
    seq.insert(step.position, card.turned(Face.DOWN))
    return DeckState(tuple(seq), free, state.n_clubs, state.n_hearts)


def _conserved(state: DeckState, uid_mask: int) -> None:
    seen = 0
    hearts = 0
    count = 0
    for c in state.sequence + state.free_pile:
        seen |= 1 << c.uid
        hearts += c.symbol
        count += 1
    if seen != uid_mask or count != uid_mask.bit_count():
        raise CardConservationViolated("cards lost or duplicated")
    if hearts != state.n_hearts or count - hearts != state.n_clubs:
        raise CardConservationViolated(f"symbol multiset drifted to {count - hearts} clubs, {hearts} hearts")


Chooser = Callable[[ShuffleSpec], Sequence[int]]


def _walk(protocol: ProtocolBuild, inputs: Sequence[int], choose: Chooser,
          max_depth: int | None = None) -> list[ExecutionLeaf]:
    state = DeckState.from_symbols(protocol.deal_symbols(inputs))
    uid_mask = (1 << len(state.sequence)) - 1
    limit = depth_bound(protocol.n) if max_depth is None else max_depth
    leaves: list[ExecutionLeaf] = []

    def run(steps, start, state, trace, prob, outcomes, depth):
        _ensure_steps(steps)
        for i in range(start, len(steps)):
            step = steps[i]
            if depth >= limit:
                raise NonTermination(f"path exceeded {limit} steps")
            depth += 1
            if isinstance(step, Output):
                _conserved(state, uid_mask)
                leaves.append(ExecutionLeaf(trace, prob, step.bit, outcomes))
                return
            if isinstance(step, Shuffle):
                spec = step.spec
                trace = trace + (step.event(),)
                prob = prob * spec.outcome_probability
                for r in choose(spec):
                    nxt = _permute(state, spec.target, spec.perms[r])
                    run(steps, i + 1, nxt, trace, prob, outcomes + (r,), depth)
                return
            if isinstance(step, Reveal):
                state, observed = _reveal(state, step)
                _conserved(state, uid_mask)
                try:
                    branch = step.branches[observed]
                except KeyError:
                    if step.check is not None:
                        step.check(observed)
                    raise BranchTableIncomplete(
                        f"no branch for observation {render_symbols(observed)} at {list(step.positions)}"
                    ) from None
                run(branch, 0, state, trace + (step.event(observed),), prob, outcomes, depth)
                return
            if isinstance(step, Permute):
                # a validated bijection cannot lose or duplicate a card
                state = _permute(state, step.positions, step.perm)
            elif isinstance(step, TakeFromFree):
                state = _take(state, step)
                _conserved(state, uid_mask)
            else:
                raise StructuralError(f"unknown step {step!r}")
            trace = trace + (step.event(),)

    run(protocol.root, 0, state, (), Fraction(1), (), 0)
    return leaves


def _all_outcomes(spec: ShuffleSpec) -> range:
    return range(len(spec.perms))


def execute_all(protocol: ProtocolBuild, inputs: Sequence[int], *,
                max_depth: int | None = None) -> list[ExecutionLeaf]:
    """Every execution path of ``protocol`` on ``inputs``, in canonical order.

    Leaves are ordered lexicographically by their shuffle-outcome indices.
    """
    leaves = _walk(protocol, inputs, _all_outcomes, max_depth)
    leaves.sort(key=lambda leaf: leaf.outcomes)
    return leaves


def sample_run(protocol: ProtocolBuild, inputs: Sequence[int], seed: int, *,
               max_depth: int | None = None) -> ExecutionLeaf:
    rng = random.Random(seed)

    def choose(spec: ShuffleSpec):
        return (rng.randrange(len(spec.perms)),)

    (leaf,) = _walk(protocol, inputs, choose, max_depth)
    return leaf


def _paths(steps) -> Iterator[tuple]:
    """Yield each root-to-terminal sequence of steps (branching at reveals)."""
    steps = _ensure_steps(steps)
    for step in steps[:-1]:
        if isinstance(step, (Output, Reveal)):
            raise StructuralError(f"{type(step).__name__} must be the last step of its list")
    last = steps[-1]
    if isinstance(last, Output):
        yield tuple(steps)
        return
    for branch in last.branches.values():
        for tail in _paths(branch):
            yield tuple(steps) + tail


def count_shuffles(protocol: ProtocolBuild | tuple) -> int:
    root = protocol.root if isinstance(protocol, ProtocolBuild) else protocol
    counts = {sum(isinstance(s, Shuffle) for s in path) for path in _paths(root)}
    if len(counts) != 1:
        raise NonUniformShuffleCount(f"paths use differing shuffle counts {sorted(counts)}")
    return counts.pop()


@dataclass(frozen=True)
class StructureSummary:
    paths: int
    max_depth: int
    takes: int


def check_structure(protocol: ProtocolBuild) -> StructureSummary:
    """Static walk of every branch, reachable or not.

    The free pile's symbols along a path are fully determined by the branch
    keys taken, so take feasibility, position bounds and the depth guard can
    all be checked without running any input.
    """
    n = protocol.n
    limit = depth_bound(n)
    stats = {"paths": 0, "depth": 0, "takes": 0}

    def walk(steps, length, free: Counter, depth):
        steps = _ensure_steps(steps)
        for step in steps:
            depth += 1
            if depth > limit:
                raise NonTermination(f"path exceeded {limit} steps")
            if isinstance(step, Output):
                stats["paths"] += 1
                stats["depth"] = max(stats["depth"], depth)
                return
            if isinstance(step, Permute):
                _check_positions(step.positions, length, "permute")
                if step.perm.size != len(step.positions):
                    raise StructuralError(f"permute {step.label} size mismatch")
            elif isinstance(step, Shuffle):
                _check_positions(step.spec.target, length, "shuffle")
            elif isinstance(step, TakeFromFree):
                if free[step.symbol] <= 0:
                    raise FreeCardUnavailable(f"no free {step.symbol.name} available for {step.event()}")
                if not 0 <= step.position <= length:
                    raise StructuralError(f"take destination {step.position} out of range")
                free = free.copy()
                free[step.symbol] -= 1
                length += 1
                stats["takes"] += 1
            elif isinstance(step, Reveal):
                _check_positions(step.positions, length, "reveal")
                for key, branch in step.branches.items():
                    if len(key) != len(step.positions):
                        raise StructuralError(f"branch key {render_symbols(key)} has wrong width")
                    if step.keep:
                        walk(branch, length, free, depth)
                    else:
                        walk(branch, length - len(key), free + Counter(key), depth)
                return
        raise StructuralError("step list fell off the end without OUTPUT")

    walk(protocol.root, protocol.deck_size, Counter(), 0)
    return StructureSummary(stats["paths"], stats["depth"], stats["takes"])


def replay(protocol: ProtocolBuild, trace: Sequence[str]) -> int:
    """Follow ``trace`` through the tree using public events only; return the output.

    Raises ``StructuralError`` if the trace does not describe a path of ``protocol``.
    """
    steps = protocol.root
    events = iter(trace)
    while True:
        for step in steps:
            if isinstance(step, Output):
                if next(events, None) is not None:
                    raise StructuralError("trace continues past OUTPUT")
                return step.bit
            event = next(events, None)
            if event is None:
                raise StructuralError("trace ended before OUTPUT")
            if isinstance(step, Reveal):
                prefix = step.event(())
                if not event.startswith(prefix):
                    raise StructuralError(f"expected {prefix}..., trace has {event}")
                observed = parse_symbols(event[len(prefix):])
                if observed not in step.branches:
                    raise StructuralError(f"observation {event} not in branch table")
                steps = step.branches[observed]
                break
            if event != step.event():
                raise StructuralError(f"expected {step.event()}, trace has {event}")
