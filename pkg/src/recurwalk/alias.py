"""Walker/Vose alias table built with exact integer arithmetic.

A draw uses one 64-bit word: the high 32 bits pick a column by
multiply-shift, the low 32 bits decide between the column's own atom and its
alias. Column thresholds are exact rationals over D before being rounded to
32-bit fixed point, so the per-atom bias is at most a few parts in 2**32.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List

import numpy as np

from .lattice import LatticePoint, StepLaw


class AliasTable:
    def __init__(self, law: StepLaw):
        self.law = law
        self.points: List[LatticePoint] = list(law.support)
        k = len(self.points)
        D = law.denominator
        # Column i keeps atom i with probability accept[i] / D.
        scaled = [w * k for _, w in law.atoms]
        accept = [D] * k
        alias = list(range(k))
        small = [i for i, q in enumerate(scaled) if q < D]
        large = [i for i, q in enumerate(scaled) if q >= D]
        while small and large:
            s, g = small.pop(), large.pop()
            accept[s] = scaled[s]
            alias[s] = g
            scaled[g] += scaled[s] - D
            (small if scaled[g] < D else large).append(g)
        self.accept = accept
        self.alias = alias
        self.thresholds = [(a << 32) // D for a in accept]
        self._xs = np.array([p.x for p in self.points], dtype=np.int64)
        self._ys = np.array([p.y for p in self.points], dtype=np.int64)
        self._alias = np.array(alias, dtype=np.int64)
        self._thresholds = np.array(self.thresholds, dtype=np.uint64)

    def __len__(self) -> int:
        return len(self.points)

    def atom_probabilities(self) -> List[Fraction]:
        """Exact probability the table assigns to each atom, before rounding."""
        k, D = len(self), self.law.denominator
        mass = [Fraction(0)] * k
        for i in range(k):
            mass[i] += Fraction(self.accept[i], k * D)
            mass[self.alias[i]] += Fraction(D - self.accept[i], k * D)
        return mass

    def index(self, u: int) -> int:
        col = ((u >> 32) * len(self)) >> 32
        return col if (u & 0xFFFFFFFF) < self.thresholds[col] else self.alias[col]

    def draw(self, u: int) -> LatticePoint:
        return self.points[self.index(u)]

    def indices(self, u: np.ndarray) -> np.ndarray:
        col = (((u >> np.uint64(32)) * np.uint64(len(self))) >> np.uint64(32)).astype(np.int64)
        keep = (u & np.uint64(0xFFFFFFFF)) < self._thresholds[col]
        return np.where(keep, col, self._alias[col])

    def displacements(self, u: np.ndarray):
        idx = self.indices(u)
        return self._xs[idx], self._ys[idx]
