"""Random cuts and random k-section cuts as uniform sets of permutations."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, TypeVar

from .errors import InvalidSize, SizeMismatch

T = TypeVar("T")


@dataclass(frozen=True)
class Permutation:
    """``mapping[j]`` is the destination index of the item at source index ``j``."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.mapping) != list(range(len(self.mapping))):
            raise ValueError(f"{self.mapping} is not a permutation")

    @property
    def size(self) -> int:
        return len(self.mapping)

    @classmethod
    def identity(cls, size: int) -> "Permutation":
        return cls(tuple(range(size)))

    @classmethod
    def from_arrangement(cls, order: Sequence[int]) -> "Permutation":
        """Build the permutation whose output lists source items in ``order``.

        ``from_arrangement([2, 0, 1])`` applied to ``(a, b, c)`` gives ``(c, a, b)``.
        """
        mapping = [0] * len(order)
        for dest, src in enumerate(order):
            mapping[src] = dest
        return cls(tuple(mapping))

    def then(self, other: "Permutation") -> "Permutation":
        """Apply ``self`` first, then ``other``."""
        if other.size != self.size:
            raise SizeMismatch(f"cannot compose sizes {self.size} and {other.size}")
        return Permutation(tuple(other.mapping[d] for d in self.mapping))

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for src, dest in enumerate(self.mapping):
            inv[dest] = src
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == d for i, d in enumerate(self.mapping))


def apply(perm: Permutation, seq: Sequence[T]) -> list[T]:
    if len(seq) != perm.size:
        raise SizeMismatch(f"permutation of size {perm.size} applied to {len(seq)} items")
    out: list = [None] * perm.size
    for src, dest in enumerate(perm.mapping):
        out[dest] = seq[src]
    return out


def block_shift(k: int, block: int, r: int) -> Permutation:
    """Cyclic shift of ``k`` blocks bringing block ``r`` to the front."""
    mapping = []
    for j in range(k * block):
        b, off = divmod(j, block)
        mapping.append(((b - r) % k) * block + off)
    return Permutation(tuple(mapping))


def rotation(m: int, r: int) -> Permutation:
    return block_shift(m, 1, r)


@dataclass(frozen=True)
class ShuffleSpec:
    target: tuple[int, ...]
    perms: tuple[Permutation, ...]
    label: str

    def __post_init__(self):
        if not self.perms:
            raise InvalidSize("a shuffle needs at least one permutation")
        if len(set(self.target)) != len(self.target):
            raise ValueError(f"shuffle target positions repeat: {self.target}")
        for p in self.perms:
            if p.size != len(self.target):
                raise SizeMismatch(f"permutation size {p.size} != target size {len(self.target)}")

    @property
    def outcome_probability(self) -> Fraction:
        return Fraction(1, len(self.perms))

    def outcomes(self) -> list[tuple[Fraction, Permutation]]:
        p = self.outcome_probability
        return [(p, perm) for perm in self.perms]


def _positions(size: int, target: Sequence[int] | None) -> tuple[int, ...]:
    if target is None:
        return tuple(range(size))
    target = tuple(target)
    if len(target) != size:
        raise SizeMismatch(f"shuffle acts on {size} cards but {len(target)} positions given")
    return target


def _fmt(target: tuple[int, ...]) -> str:
    return "[" + ",".join(map(str, target)) + "]"


def random_cut(m: int, target: Sequence[int] | None = None) -> ShuffleSpec:
    if m < 1:
        raise InvalidSize("random cut needs at least one card")
    target = _positions(m, target)
    perms = tuple(rotation(m, r) for r in range(m))
    return ShuffleSpec(target, perms, f"RC({m})@{_fmt(target)}")


def random_k_section_cut(k: int, block: int, target: Sequence[int] | None = None) -> ShuffleSpec:
    if k < 1 or block < 1:
        raise InvalidSize(f"random k-section cut needs k, block >= 1 (got {k}, {block})")
    target = _positions(k * block, target)
    perms = tuple(block_shift(k, block, r) for r in range(k))
    return ShuffleSpec(target, perms, f"RSC({k},{block})@{_fmt(target)}")
