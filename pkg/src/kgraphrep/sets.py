"""Finite Boolean expressions over cylinder sets and tracked atom singletons.

Membership is decided pointwise per infinite path; no sigma-algebra machinery
beyond these finite combinations is implemented.
"""

from __future__ import annotations

from dataclasses import dataclass

from .degrees import Degree
from .kgraph import Morphism
from .paths import InfinitePath, paths_equal, prefix_path, shift


class SetExpr:
    def contains(self, path: InfinitePath) -> bool:
        raise NotImplementedError

    def complement(self) -> "SetExpr":
        return Complement(self)


@dataclass(frozen=True)
class FullSpace(SetExpr):
    def contains(self, path):
        return True

    def __str__(self):
        return "X"


@dataclass(frozen=True)
class Cylinder(SetExpr):
    """All paths whose initial segment of degree d(shape) equals shape."""

    shape: Morphism

    def contains(self, path):
        if path.range != self.shape.range:
            return False
        return path.segment(self.shape.degree) == self.shape

    def __str__(self):
        return f"Z({self.shape})"


@dataclass(frozen=True)
class AtomSingleton(SetExpr):
    atom: InfinitePath

    def contains(self, path):
        return paths_equal(path, self.atom).possibly_equal

    def __str__(self):
        return f"{{{self.atom}}}"


@dataclass(frozen=True)
class Complement(SetExpr):
    inner: SetExpr

    def contains(self, path):
        return not self.inner.contains(path)

    def __str__(self):
        return f"~{self.inner}"


@dataclass(frozen=True)
class Union(SetExpr):
    parts: tuple[SetExpr, ...]

    def contains(self, path):
        return any(p.contains(path) for p in self.parts)

    def __str__(self):
        return "(" + " u ".join(str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class Intersection(SetExpr):
    parts: tuple[SetExpr, ...]

    def contains(self, path):
        return all(p.contains(path) for p in self.parts)

    def __str__(self):
        return "(" + " n ".join(str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class PrefixImage(SetExpr):
    """sigma_lam(S): paths lam.w with w in S."""

    word: Morphism
    inner: SetExpr

    def contains(self, path):
        if path.range != self.word.range:
            return False
        if path.segment(self.word.degree) != self.word:
            return False
        return self.inner.contains(shift(path, self.word.degree))

    def __str__(self):
        return f"sigma_[{self.word}]({self.inner})"


@dataclass(frozen=True)
class PrefixPreimage(SetExpr):
    """sigma_lam^{-1}(S): paths w with lam.w in S."""

    word: Morphism
    inner: SetExpr

    def contains(self, path):
        if path.range != self.word.source:
            return False
        return self.inner.contains(prefix_path(self.word, path))

    def __str__(self):
        return f"sigma_[{self.word}]^-1({self.inner})"


@dataclass(frozen=True)
class ShiftPreimage(SetExpr):
    """(sigma^n)^{-1}(S): paths whose degree-n shift lies in S."""

    amount: Degree
    inner: SetExpr

    def contains(self, path):
        return self.inner.contains(shift(path, self.amount))

    def __str__(self):
        return f"shift^{self.amount}^-1({self.inner})"


EMPTY = Complement(FullSpace())


def union(*parts: SetExpr) -> SetExpr:
    return Union(tuple(parts))


def intersection(*parts: SetExpr) -> SetExpr:
    return Intersection(tuple(parts))
