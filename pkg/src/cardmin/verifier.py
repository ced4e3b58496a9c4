"""Exhaustive correctness, privacy and card-budget checks for protocol builds.

Privacy here means output-conditioned transcript indistinguishability: any two
inputs with the same function value must induce exactly the same distribution
over public traces. All comparisons use exact rationals.
"""
from __future__ import annotations

import itertools
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Mapping, Sequence

from .engine import ExecutionLeaf, ProtocolBuild, check_structure, count_shuffles, execute_all
from .errors import ArityMismatch, StructuralError
from .symfun import SymmetricFunction

Inputs = tuple[int, ...]
Runs = dict[Inputs, list[ExecutionLeaf]]
TraceDistribution = dict[tuple[str, ...], Fraction]


def _fraction(p: Fraction) -> str:
    return f"{p.numerator}/{p.denominator}"


def _bits(x: Inputs) -> str:
    return "".join(map(str, x))


def default_workers() -> int:
    cap = os.environ.get("CARDMIN_THREADS")
    cpus = os.cpu_count() or 1
    if cap:
        return max(1, min(int(cap), cpus))
    return cpus


def _execute(args):
    protocol, x = args
    return execute_all(protocol, x)


def all_inputs(protocol: ProtocolBuild) -> list[Inputs]:
    return list(itertools.product(protocol.input_values, repeat=protocol.n))


def run_all(protocol: ProtocolBuild, workers: int | None = None) -> Runs:
    """Execute ``protocol`` on every input; results keyed by input in canonical order."""
    inputs = all_inputs(protocol)
    workers = default_workers() if workers is None else workers
    if workers > 1 and len(inputs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_execute, [(protocol, x) for x in inputs], chunksize=4))
    else:
        results = [execute_all(protocol, x) for x in inputs]
    return dict(zip(inputs, results))


def trace_distribution(leaves: Sequence[ExecutionLeaf]) -> TraceDistribution:
    dist: TraceDistribution = defaultdict(Fraction)
    for leaf in leaves:
        dist[leaf.trace] += leaf.probability
    return dict(dist)


@dataclass(frozen=True)
class CorrectnessResult:
    passed: bool
    failures: tuple[tuple[Inputs, ExecutionLeaf], ...] = ()

    @property
    def failing_inputs(self) -> list[Inputs]:
        return sorted({x for x, _ in self.failures})

    def to_json(self) -> dict | str:
        if self.passed:
            return "pass"
        return {"failures": [{"input": _bits(x), "leaf": leaf.to_json()} for x, leaf in self.failures]}


@dataclass(frozen=True)
class PrivacyWitness:
    x: Inputs
    x_prime: Inputs
    trace: tuple[str, ...]
    p: Fraction
    p_prime: Fraction

    def to_json(self) -> dict:
        return {"x": _bits(self.x), "x_prime": _bits(self.x_prime), "trace": list(self.trace),
                "p": _fraction(self.p), "p_prime": _fraction(self.p_prime)}


@dataclass(frozen=True)
class PrivacyResult:
    passed: bool
    witness: PrivacyWitness | None = None

    def to_json(self) -> dict | str:
        return "pass" if self.passed else {"witness": self.witness.to_json()}


@dataclass(frozen=True)
class DeckBudgetResult:
    passed: bool
    cards: int
    clubs: int
    hearts: int
    takes_satisfiable: bool
    detail: str = ""


def _check_arity(protocol: ProtocolBuild, f: SymmetricFunction) -> None:
    if protocol.n != f.n:
        raise ArityMismatch(f"protocol has {protocol.n} inputs but the function has {f.n}")


def check_correctness(protocol: ProtocolBuild, f: SymmetricFunction, runs: Runs | None = None) -> CorrectnessResult:
    _check_arity(protocol, f)
    runs = run_all(protocol) if runs is None else runs
    failures = []
    for x, leaves in runs.items():
        want = f(x)
        failures.extend((x, leaf) for leaf in leaves if leaf.output != want)
    return CorrectnessResult(not failures, tuple(failures))


def _first_difference(a: TraceDistribution, b: TraceDistribution):
    for trace in sorted(set(a) | set(b)):
        pa, pb = a.get(trace, Fraction(0)), b.get(trace, Fraction(0))
        if pa != pb:
            return trace, pa, pb
    return None


def check_privacy(protocol: ProtocolBuild, f: SymmetricFunction, runs: Runs | None = None) -> PrivacyResult:
    _check_arity(protocol, f)
    runs = run_all(protocol) if runs is None else runs
    reference: dict[int, tuple[Inputs, TraceDistribution]] = {}
    for x, leaves in runs.items():
        dist = trace_distribution(leaves)
        value = f(x)
        if value not in reference:
            reference[value] = (x, dist)
            continue
        x0, dist0 = reference[value]
        diff = _first_difference(dist0, dist)
        if diff is not None:
            trace, p0, p1 = diff
            return PrivacyResult(False, PrivacyWitness(x0, x, trace, p0, p1))
    return PrivacyResult(True)


def check_deck_budget(protocol: ProtocolBuild, n: int | None = None) -> DeckBudgetResult:
    """Exactly 2n cards, n of each symbol, and every free-card take satisfiable on every branch."""
    n = protocol.n if n is None else n
    compositions = set()
    for x in all_inputs(protocol):
        symbols = protocol.deal_symbols(x)
        clubs = sum(1 for s in symbols if s == 0)
        compositions.add((len(symbols), clubs, len(symbols) - clubs))
    cards, clubs, hearts = max(compositions)
    detail = ""
    try:
        check_structure(protocol)
        takes_ok = True
    except StructuralError as exc:
        takes_ok = False
        detail = str(exc)
    if len(compositions) > 1:
        detail = detail or f"deck composition varies with input: {sorted(compositions)}"
    passed = len(compositions) == 1 and cards == 2 * n and clubs == hearts == n and takes_ok
    return DeckBudgetResult(passed, cards, clubs, hearts, takes_ok, detail)


@dataclass(frozen=True)
class VerificationReport:
    protocol_name: str
    n: int
    function: str
    correctness: CorrectnessResult
    privacy: PrivacyResult
    shuffle_count: int
    deck: DeckBudgetResult
    committed_format: bool
    probability_conserved: bool = True
    runtime_stats: Mapping[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (self.correctness.passed and self.privacy.passed and self.deck.passed
                and self.probability_conserved)

    def to_json(self) -> dict:
        return {
            "protocol_name": self.protocol_name,
            "n": self.n,
            "function": self.function,
            "correctness": self.correctness.to_json(),
            "privacy": self.privacy.to_json(),
            "shuffle_count": self.shuffle_count,
            "deck": asdict(self.deck),
            "committed_format": self.committed_format,
            "probability_conserved": self.probability_conserved,
            "runtime_stats": dict(self.runtime_stats),
            "passed": self.passed,
        }


def full_report(protocol: ProtocolBuild, f: SymmetricFunction, workers: int | None = None) -> VerificationReport:
    _check_arity(protocol, f)
    deck = check_deck_budget(protocol)
    shuffles = count_shuffles(protocol)
    runs = run_all(protocol, workers)
    correctness = check_correctness(protocol, f, runs)
    privacy = check_privacy(protocol, f, runs)
    conserved = all(sum(leaf.probability for leaf in leaves) == 1 for leaves in runs.values())
    traces = set()
    for leaves in runs.values():
        traces.update(leaf.trace for leaf in leaves)
    stats = {
        "inputs": len(runs),
        "leaves": sum(len(v) for v in runs.values()),
        "distinct_traces": len(traces),
    }
    return VerificationReport(protocol.name, protocol.n, f"S^{f.n}_{f}", correctness, privacy,
                              shuffles, deck, protocol.committed, conserved, stats)


@lru_cache(maxsize=None)
def verify_mod3(n: int, k: int) -> VerificationReport:
    """Cached full report for ``build_mod3(n, k)`` against its remainder-k function."""
    from .protocols import build_mod3
    from .symfun import mod3_function

    return full_report(build_mod3(n, k), mod3_function(n, k))
