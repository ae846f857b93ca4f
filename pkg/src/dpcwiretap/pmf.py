"""Exact finite joint distributions and their entropies (in bits)."""

from __future__ import annotations

from typing import Sequence

import numpy as np

MASS_TOL = 1e-12


def entropy_bits(p) -> float:
    """Shannon entropy of a probability vector, ignoring zero cells."""
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum()) + 0.0


class JointPmf:
    """Probability table over a tuple of discrete variables.

    Axis ``i`` of ``table`` indexes the values of variable ``i``.
    """

    def __init__(self, table, tol: float = MASS_TOL):
        t = np.array(table, dtype=float)
        if t.ndim == 0:
            raise ValueError("a JointPmf needs at least one variable")
        if (t < 0).any():
            raise ValueError("probabilities must be nonnegative")
        total = t.sum()
        if abs(total - 1.0) > tol:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        t.setflags(write=False)
        self.table = t

    @classmethod
    def uniform(cls, shape: Sequence[int]) -> "JointPmf":
        size = int(np.prod(shape))
        return cls(np.full(tuple(shape), 1.0 / size))

    @classmethod
    def point_mass(cls, shape: Sequence[int], index: Sequence[int]) -> "JointPmf":
        t = np.zeros(tuple(shape))
        t[tuple(index)] = 1.0
        return cls(t)

    @classmethod
    def product(cls, marginals: Sequence[Sequence[float]]) -> "JointPmf":
        """Independent variables with the given marginals."""
        t = np.ones(())
        for m in marginals:
            t = np.multiply.outer(t, np.asarray(m, dtype=float))
        return cls(t)

    @classmethod
    def bernoulli_product(cls, probs_of_one: Sequence[float]) -> "JointPmf":
        return cls.product([(1.0 - p, p) for p in probs_of_one])

    @property
    def arity(self) -> int:
        return self.table.ndim

    @property
    def shape(self) -> tuple[int, ...]:
        return self.table.shape

    def marginal(self, axes: Sequence[int]) -> "JointPmf":
        axes = tuple(axes)
        if not axes:
            raise ValueError("marginal needs at least one variable")
        drop = tuple(i for i in range(self.arity) if i not in axes)
        m = self.table.sum(axis=drop)
        # sum() keeps the remaining axes in increasing order
        order = [sorted(axes).index(a) for a in axes]
        return JointPmf(np.transpose(m, order), tol=1e-9)

    def entropy(self, axes: Sequence[int] | None = None) -> float:
        if axes is None:
            return entropy_bits(self.table)
        return entropy_bits(self.marginal(axes).table)

    def conditional_entropy(self, target: Sequence[int], given: Sequence[int]) -> float:
        given = tuple(given)
        joint = tuple(target) + tuple(a for a in given if a not in target)
        h = self.entropy(joint)
        return h - self.entropy(given) if given else h

    def mutual_information(self, a: Sequence[int], b: Sequence[int]) -> float:
        return self.entropy(a) + self.entropy(b) - self.entropy(tuple(a) + tuple(b))

    def flat_bits(self) -> np.ndarray:
        """Flatten a table over binary variables so index bit ``i`` is variable ``i``."""
        if any(s != 2 for s in self.shape):
            raise ValueError("flat_bits needs every variable to be binary")
        return np.transpose(self.table, tuple(reversed(range(self.arity)))).ravel()
