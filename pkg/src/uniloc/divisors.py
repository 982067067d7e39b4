"""Formal divisors on labelled primes and finitely presented class groups.

A Divisor is a finite integer combination of prime labels.  A
DivisorClassModel lists the primes relevant to a query together with
the divisors of chosen elements; the class group shadow it presents is
the free group on the primes modulo those principal relations.  Orders
and quotients are delegated to the Smith normal form machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

from .abgroup import (AbelianGroupPresentation, GroupStructure, IntMatrix,
                      cokernel_structure, element_order)
from .errors import InputError


@dataclass(frozen=True)
class Divisor:
    # sorted (label, coefficient) pairs, zero coefficients dropped
    coefficients: tuple

    def __post_init__(self):
        labels = [lab for lab, _ in self.coefficients]
        if labels != sorted(labels) or len(set(labels)) != len(labels):
            raise InputError("divisor support must be sorted and duplicate-free")
        if any(c == 0 for _, c in self.coefficients):
            raise InputError("zero coefficients must not be stored")

    @classmethod
    def of(cls, mapping) -> "Divisor":
        items = tuple(sorted((str(k), int(v)) for k, v in dict(mapping).items() if int(v) != 0))
        return cls(items)

    @classmethod
    def zero(cls) -> "Divisor":
        return cls(())

    def coefficient(self, label: str) -> int:
        for lab, c in self.coefficients:
            if lab == label:
                return c
        return 0

    @property
    def support(self) -> tuple:
        return tuple(lab for lab, _ in self.coefficients)

    def to_json(self):
        return {lab: c for lab, c in self.coefficients}

    def __repr__(self):
        if not self.coefficients:
            return "0"
        parts = []
        for lab, c in self.coefficients:
            sign = "-" if c < 0 else ("+" if parts else "")
            mag = abs(c)
            parts.append("%s%s%s" % (sign, "" if mag == 1 else "%d*" % mag, lab))
        return " ".join(parts)


def add(a: Divisor, b: Divisor) -> Divisor:
    total = dict(a.coefficients)
    for lab, c in b.coefficients:
        total[lab] = total.get(lab, 0) + c
    return Divisor.of(total)


def negate(a: Divisor) -> Divisor:
    return Divisor.of({lab: -c for lab, c in a.coefficients})


def scale(n: int, a: Divisor) -> Divisor:
    return Divisor.of({lab: n * c for lab, c in a.coefficients})


def is_effective(a: Divisor) -> bool:
    return all(c >= 0 for _, c in a.coefficients)


@dataclass(frozen=True)
class DivisorClassModel:
    primes: tuple
    principal_relations: tuple

    def __post_init__(self):
        if len(set(self.primes)) != len(self.primes):
            raise InputError("prime labels must be unique")
        known = set(self.primes)
        for rel in self.principal_relations:
            if not set(rel.support) <= known:
                raise InputError("relation supported outside the listed primes")

    @classmethod
    def on(cls, primes, relations=()) -> "DivisorClassModel":
        return cls(tuple(str(p) for p in primes), tuple(relations))

    def _vector(self, d: Divisor):
        if not set(d.support) <= set(self.primes):
            unknown = sorted(set(d.support) - set(self.primes))
            raise InputError("unknown prime label(s): %s" % ", ".join(unknown))
        return [d.coefficient(p) for p in self.primes]

    def presentation(self) -> AbelianGroupPresentation:
        rows = [self._vector(rel) for rel in self.principal_relations]
        mat = IntMatrix.from_rows(rows) if rows else IntMatrix(0, len(self.primes), ())
        return AbelianGroupPresentation(len(self.primes), mat)

    def structure(self) -> GroupStructure:
        return cokernel_structure(self.presentation().relations)


def class_order(model: DivisorClassModel, d: Divisor):
    """Order of [d] in the presented quotient group (int or INFINITE)."""
    return element_order(model.presentation(), model._vector(d))


def quotient_by_divisor(clX: DivisorClassModel, t: Divisor) -> DivisorClassModel:
    """Present the quotient of the modelled group by the class of t.

    Adjoining t to the principal relations kills exactly the cyclic
    subgroup generated by [t]; t = 0 returns the presentation unchanged.
    """
    clX._vector(t)  # validates support
    if not t.coefficients:
        return clX
    return DivisorClassModel(clX.primes, clX.principal_relations + (t,))
