"""Symmetric Boolean functions and their NPN-equivalence classes.

A function is stored as a bitmask over ``{0..n}``: bit ``x`` is set when an
input of Hamming weight ``x`` is accepted. Negating every input maps weight
``x`` to ``n - x`` (``reflect``), negating the output complements the set
(``complement``). Those two involutions generate a group of order four, and
a class is an orbit of that group, represented by its numerically smallest mask.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ArityMismatch


@dataclass(frozen=True, order=True)
class SymmetricFunction:
    n: int
    mask: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if self.mask < 0 or self.mask >> (self.n + 1):
            raise ValueError(f"mask {self.mask:#b} is not a subset of {{0..{self.n}}}")

    @classmethod
    def from_set(cls, n: int, xs: Iterable[int]) -> "SymmetricFunction":
        mask = 0
        for x in xs:
            if not 0 <= x <= n:
                raise ValueError(f"{x} is outside {{0..{n}}}")
            mask |= 1 << x
        return cls(n, mask)

    @classmethod
    def parse(cls, n: int, text: str) -> "SymmetricFunction":
        body = text.strip().strip("{}").strip()
        return cls.from_set(n, [int(t) for t in body.split(",")] if body else [])

    @property
    def accepted(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.n + 1) if self.mask >> x & 1)

    def __call__(self, x: Sequence[int]) -> int:
        return evaluate(self, x)

    def __str__(self) -> str:
        return format_set(self.accepted)


def format_set(xs: Iterable[int]) -> str:
    return "{" + ",".join(map(str, xs)) + "}"


def evaluate(f: SymmetricFunction, x: Sequence[int]) -> int:
    if len(x) != f.n:
        raise ArityMismatch(f"S^{f.n} evaluated on {len(x)} inputs")
    return f.mask >> sum(x) & 1


def _full(n: int) -> int:
    return (1 << (n + 1)) - 1


def complement(f: SymmetricFunction) -> SymmetricFunction:
    return SymmetricFunction(f.n, _full(f.n) ^ f.mask)


def reflect(f: SymmetricFunction) -> SymmetricFunction:
    mask = 0
    for x in f.accepted:
        mask |= 1 << (f.n - x)
    return SymmetricFunction(f.n, mask)


def orbit(f: SymmetricFunction) -> tuple[SymmetricFunction, ...]:
    r = reflect(f)
    return tuple(sorted({f, complement(f), r, complement(r)}))


def canonical(f: SymmetricFunction) -> int:
    return orbit(f)[0].mask


@dataclass(frozen=True)
class NpnClass:
    n: int
    canonical: int
    members: tuple[int, ...]

    @classmethod
    def of(cls, f: SymmetricFunction) -> "NpnClass":
        members = tuple(g.mask for g in orbit(f))
        return cls(f.n, members[0], members)

    @property
    def representative(self) -> SymmetricFunction:
        return SymmetricFunction(self.n, self.canonical)

    def functions(self) -> tuple[SymmetricFunction, ...]:
        return tuple(SymmetricFunction(self.n, m) for m in self.members)

    def __contains__(self, f: SymmetricFunction) -> bool:
        return f.n == self.n and f.mask in self.members

    def to_json(self) -> dict:
        rep = self.representative
        return {
            "n": self.n,
            "canonical": str(rep),
            "members": [str(g) for g in self.functions()],
            "doubly_symmetric": is_doubly_symmetric(rep),
            "mod3_k": is_mod3_class(rep),
        }


def enumerate_classes(n: int) -> list[NpnClass]:
    if n < 1:
        raise ValueError("n must be at least 1")
    seen: set[int] = set()
    classes = []
    for mask in range(1 << (n + 1)):
        if mask in seen:
            continue
        cls = NpnClass.of(SymmetricFunction(n, mask))
        seen.update(cls.members)
        classes.append(cls)
    return classes


def is_doubly_symmetric(f: SymmetricFunction) -> bool:
    return reflect(f) == f


def mod3_function(n: int, k: int) -> SymmetricFunction:
    """Accepts exactly the weights congruent to ``k`` modulo 3."""
    return SymmetricFunction.from_set(n, (x for x in range(n + 1) if x % 3 == k))


def is_mod3_class(f: SymmetricFunction) -> int | None:
    """Smallest ``k`` whose remainder-``k`` function shares ``f``'s class, if any."""
    members = {g.mask for g in orbit(f)}
    for k in range(3):
        if mod3_function(f.n, k).mask in members:
            return k
    return None


def xor_function(n: int) -> SymmetricFunction:
    return SymmetricFunction.from_set(n, range(1, n + 1, 2))


def and_function(n: int) -> SymmetricFunction:
    return SymmetricFunction.from_set(n, [n])


def equality_function(n: int) -> SymmetricFunction:
    return SymmetricFunction.from_set(n, [0, n])


def majority_function(n: int) -> SymmetricFunction:
    return SymmetricFunction.from_set(n, (x for x in range(n + 1) if 2 * x > n))
