"""Formal *-algebra elements in the spanning picture.

A formal element is a finite linear combination of symbols (lam, mu) with
s(lam) = s(mu), standing for t_lam t_mu^* in any generating family.
Multiplication expands through the minimal-common-extension relation, so
evaluation against any family satisfying the defining relations is a
*-homomorphism.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import RangeMismatch
from .kgraph import Path, compose
from .alignment import lambda_min


class FormalElement:
    """Finite map (lam, mu) -> coefficient with s(lam) = s(mu)."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean = {}
        for (lam, mu), coeff in (terms or {}).items():
            if lam.source != mu.source:
                raise RangeMismatch(
                    f"term ({lam.token()}, {mu.token()}) has mismatched sources"
                )
            if coeff != 0:
                clean[(lam, mu)] = coeff
        self.terms = clean

    @classmethod
    def generator(cls, lam: Path, mu: Path, coeff=Fraction(1)) -> "FormalElement":
        return cls({(lam, mu): coeff})

    @classmethod
    def zero(cls) -> "FormalElement":
        return cls()

    def __add__(self, other: "FormalElement") -> "FormalElement":
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return FormalElement(terms)

    def __sub__(self, other: "FormalElement") -> "FormalElement":
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) - v
        return FormalElement(terms)

    def scale(self, scalar) -> "FormalElement":
        return FormalElement({k: scalar * v for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalElement) and self.terms == other.terms

    def __hash__(self):
        raise TypeError("unhashable")

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        parts = [
            f"{coeff}*({lam.token()},{mu.token()})"
            for (lam, mu), coeff in self.terms.items()
        ]
        return "FormalElement(" + " + ".join(parts or ["0"]) + ")"


def formal_star(a: FormalElement) -> FormalElement:
    """The adjoint: swap each pair and conjugate its coefficient."""
    return FormalElement(
        {(mu, lam): coeff.conjugate() for (lam, mu), coeff in a.terms.items()}
    )


def formal_mul(a: FormalElement, b: FormalElement) -> FormalElement:
    """Product via the extension relation.

    (lam1, mu1) . (lam2, mu2) expands over the minimal pairs (alpha, beta)
    aligning mu1 with lam2, contributing (lam1.alpha, mu2.beta).
    """
    terms: dict = {}
    for (lam1, mu1), c1 in a.terms.items():
        for (lam2, mu2), c2 in b.terms.items():
            for pair in lambda_min(mu1, lam2):
                key = (compose(lam1, pair.alpha), compose(mu2, pair.beta))
                terms[key] = terms.get(key, 0) + c1 * c2
    return FormalElement(terms)


def gauge_expectation(a: FormalElement) -> FormalElement:
    """Keep exactly the equal-degree terms; the degree-grading expectation."""
    return FormalElement(
        {
            (lam, mu): coeff
            for (lam, mu), coeff in a.terms.items()
            if lam.degree == mu.degree
        }
    )
