"""Degree vectors in N^k with the componentwise partial order."""

from __future__ import annotations

import itertools
from dataclasses import dataclass


@dataclass(frozen=True)
class Degree:
    """A vector of per-color edge counts.

    The order is componentwise, so it is only partial: neither d <= e nor
    e <= d may hold.  Subtraction is defined exactly when the subtrahend is
    dominated.
    """

    coords: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.coords, tuple):
            object.__setattr__(self, "coords", tuple(self.coords))
        if len(self.coords) == 0:
            raise ValueError("rank must be at least 1")
        if any((not isinstance(c, int)) or c < 0 for c in self.coords):
            raise ValueError(f"coordinates must be non-negative integers: {self.coords!r}")

    @staticmethod
    def zero(rank: int) -> "Degree":
        return Degree((0,) * rank)

    @staticmethod
    def unit(rank: int, color: int) -> "Degree":
        """The basis vector for a 1-based color index."""
        if not 1 <= color <= rank:
            raise ValueError(f"color {color} out of range 1..{rank}")
        return Degree(tuple(1 if i == color - 1 else 0 for i in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def count(self, color: int) -> int:
        """Coordinate for a 1-based color index."""
        return self.coords[color - 1]

    def total(self) -> int:
        return sum(self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def _check_rank(self, other: "Degree"):
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch: {self} vs {other}")

    def __add__(self, other: "Degree") -> "Degree":
        self._check_rank(other)
        return Degree(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Degree") -> "Degree":
        self._check_rank(other)
        if not other <= self:
            raise ValueError(f"{other} is not dominated by {self}")
        return Degree(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __le__(self, other: "Degree") -> bool:
        self._check_rank(other)
        return all(a <= b for a, b in zip(self.coords, other.coords))

    def __ge__(self, other: "Degree") -> bool:
        return other <= self

    def join(self, other: "Degree") -> "Degree":
        self._check_rank(other)
        return Degree(tuple(max(a, b) for a, b in zip(self.coords, other.coords)))

    def meet(self, other: "Degree") -> "Degree":
        self._check_rank(other)
        return Degree(tuple(min(a, b) for a, b in zip(self.coords, other.coords)))

    def scale(self, factor: int) -> "Degree":
        if factor < 0:
            raise ValueError("factor must be non-negative")
        return Degree(tuple(factor * c for c in self.coords))

    def clamped_sub(self, other: "Degree") -> "Degree":
        """Componentwise max(self - other, 0)."""
        self._check_rank(other)
        return Degree(tuple(max(a - b, 0) for a, b in zip(self.coords, other.coords)))

    def __iter__(self):
        return iter(self.coords)

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def degree_range(bound: Degree) -> list[Degree]:
    """All degrees dominated by `bound`, sorted by total then coordinates."""
    axes = [range(c + 1) for c in bound.coords]
    grid = [Degree(t) for t in itertools.product(*axes)]
    grid.sort(key=lambda d: (d.total(), d.coords))
    return grid


def parse_degree(text: str, rank: int | None = None) -> Degree:
    """Parse a comma-separated coordinate list such as "2,2"."""
    parts = [p.strip() for p in text.split(",") if p.strip() != ""]
    if not parts:
        raise ValueError("empty degree")
    coords = tuple(int(p) for p in parts)
    d = Degree(coords)
    if rank is not None and d.rank != rank:
        raise ValueError(f"expected {rank} coordinates, got {d.rank}")
    return d
