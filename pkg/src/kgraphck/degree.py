"""Degree vectors: elements of N^k under the coordinatewise partial order."""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator

from .errors import DegreeOutOfRange


class Degree:
    """An element of N^k.

    Supports coordinatewise ``+``, ``-``, ``|`` (join/max), ``&`` (meet/min)
    and the product partial order via ``<=``.  Instances are immutable and
    hashable.  Note that ``<=`` is a *partial* order; never feed Degrees to
    ``sorted`` without an explicit key.
    """

    __slots__ = ("coords",)

    def __init__(self, *coords):
        if len(coords) == 1 and not isinstance(coords[0], int):
            coords = tuple(coords[0])
        if not coords:
            raise ValueError("degree needs rank >= 1")
        for c in coords:
            if not isinstance(c, int) or c < 0:
                raise ValueError(f"degree coordinates must be naturals, got {coords!r}")
        object.__setattr__(self, "coords", tuple(coords))

    def __setattr__(self, name, value):
        raise AttributeError("Degree is immutable")

    @classmethod
    def zero(cls, k: int) -> "Degree":
        return cls(*([0] * k))

    @classmethod
    def unit(cls, k: int, color: int) -> "Degree":
        """Standard basis vector for 1-based ``color``."""
        if not 1 <= color <= k:
            raise ValueError(f"color {color} outside 1..{k}")
        return cls(*[1 if i == color - 1 else 0 for i in range(k)])

    # -- container protocol --

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[int]:
        return iter(self.coords)

    def __getitem__(self, i: int) -> int:
        return self.coords[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Degree) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return f"Degree{self.coords}"

    # -- semigroup / lattice operations --

    def _check_rank(self, other: "Degree") -> None:
        if len(self.coords) != len(other.coords):
            raise ValueError("rank mismatch")

    def __add__(self, other: "Degree") -> "Degree":
        self._check_rank(other)
        return Degree(*(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Degree") -> "Degree":
        self._check_rank(other)
        if not other <= self:
            raise DegreeOutOfRange(f"{other} is not <= {self}")
        return Degree(*(a - b for a, b in zip(self.coords, other.coords)))

    def __or__(self, other: "Degree") -> "Degree":
        self._check_rank(other)
        return Degree(*(max(a, b) for a, b in zip(self.coords, other.coords)))

    def __and__(self, other: "Degree") -> "Degree":
        self._check_rank(other)
        return Degree(*(min(a, b) for a, b in zip(self.coords, other.coords)))

    # -- product partial order --

    def __le__(self, other: "Degree") -> bool:
        self._check_rank(other)
        return all(a <= b for a, b in zip(self.coords, other.coords))

    def __ge__(self, other: "Degree") -> bool:
        return other.__le__(self)

    def __lt__(self, other: "Degree") -> bool:
        return self <= other and self != other

    def __gt__(self, other: "Degree") -> bool:
        return other.__lt__(self)

    @property
    def total(self) -> int:
        return sum(self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def below(self) -> Iterator["Degree"]:
        """All m <= self, in ascending lexicographic coordinate order."""
        for combo in itertools.product(*(range(c + 1) for c in self.coords)):
            yield Degree(*combo)


def join_all(degrees: Iterable[Degree], k: int) -> Degree:
    """Coordinatewise maximum of ``degrees``; zero of rank ``k`` if empty."""
    out = Degree.zero(k)
    for d in degrees:
        out = out | d
    return out
