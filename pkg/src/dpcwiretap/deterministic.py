"""Secrecy and secret-key capacities of the linear deterministic wiretap channel.

The channel is

    Y1 = D^(q-n1) X + D^(q-m1) S,    Y2 = D^(q-n2) X + D^(q-m2) S    (over GF(2))

with ``q = max(n1, m1, n2, m2)`` and the state ``S`` uniform on ``{0,1}^q``.
Stacking ``Z = [X; S]`` gives ``Y1 = A Z`` and ``Y2 = B Z``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .errors import ShapeError
from .gf2 import Gf2Matrix
from .limits import check_budget
from .pmf import JointPmf, entropy_bits


@dataclass(frozen=True)
class DetWiretapParams:
    n1: int
    m1: int
    n2: int
    m2: int

    def __post_init__(self):
        for name in ("n1", "m1", "n2", "m2"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise TypeError(f"{name} must be an integer, got {v!r}")
            if v < 0:
                raise ValueError(f"{name} must be nonnegative, got {v}")

    @property
    def q(self) -> int:
        return max(self.n1, self.m1, self.n2, self.m2)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return self.n1, self.m1, self.n2, self.m2


def channel_matrices(p: DetWiretapParams) -> tuple[Gf2Matrix, Gf2Matrix]:
    """Return ``(A, B)`` mapping ``[X; S]`` to ``Y1`` and ``Y2``."""
    q = p.q
    a = gf2.hstack(gf2.downshift_power(q, q - p.n1), gf2.downshift_power(q, q - p.m1))
    b = gf2.hstack(gf2.downshift_power(q, q - p.n2), gf2.downshift_power(q, q - p.m2))
    return a, b


def det_dpc_capacity(n: int, m: int) -> int:
    """Capacity of the deterministic dirty-paper channel without eavesdropper.

    Equals ``H(D^(q-n) X) = rank(D^(q-n)) = n`` for uniform ``X``.
    """
    if n < 0 or m < 0:
        raise ValueError("channel gains must be nonnegative")
    q = max(n, m)
    return gf2.rank(gf2.downshift_power(q, q - n))


def det_secrecy_capacity_cases(p: DetWiretapParams) -> int:
    n1, m1, n2, m2 = p.as_tuple()
    if n1 - m1 == n2 - m2:
        return max(n1 - n2, 0)
    if n1 <= m1 or n2 <= m2:
        return n1
    return max(m1, n1 - n2 + m2)


def max_cond_entropy_formula(a: Gf2Matrix, b: Gf2Matrix) -> int:
    """``max_Z H(AZ | BZ) = rank([A; B]) - rank(B)``, attained at uniform ``Z``."""
    return gf2.rank(gf2.vstack(a, b)) - gf2.rank(b)


def det_secrecy_capacity_rank(p: DetWiretapParams) -> int:
    a, b = channel_matrices(p)
    return min(p.n1, max_cond_entropy_formula(a, b))


def det_secret_key_capacity(p: DetWiretapParams) -> int:
    """Secret-key capacity ``max H(Y1|Y2)``; unlike ``Cs`` there is no cap at ``n1``."""
    a, b = channel_matrices(p)
    return max_cond_entropy_formula(a, b)


CASE_LABELS = {
    1: "mixed",
    2: "both-below",
    3: "both-above",
    4: "equal-differences",
    5: "equal-differences-below",
}


def row_count_case(p: DetWiretapParams) -> tuple[int, str, int]:
    """Classify ``p`` into the five row-counting cases.

    Returns ``(case number, label, d_AB)`` where ``d_AB`` is the number of
    nonzero rows of ``[A; B]`` that are redundant between the two blocks.
    """
    n1, m1, n2, m2 = p.as_tuple()
    if n1 - m1 == n2 - m2:
        if n1 >= m1:
            case, d = 4, min(n1, n2)
        else:
            case, d = 5, min(m1, m2)
    elif (n1 <= m1 and n2 > m2) or (n2 <= m2 and n1 > m1):
        case, d = 1, 0
    elif n1 <= m1:
        case, d = 2, min(m1 - n1, m2 - n2)
    else:
        case, d = 3, min(n1 - m1, n2 - m2)
    return case, CASE_LABELS[case], d


def stacked_rank_by_counting(p: DetWiretapParams) -> int:
    """``rank([A; B])`` from nonzero-row counting instead of elimination."""
    _, _, d = row_count_case(p)
    return max(p.n1, p.m1) + max(p.n2, p.m2) - d


def _images_by_columns(m: Gf2Matrix) -> np.ndarray:
    """Packed ``m @ z`` for every ``z`` in ``{0,1}^ncols``; index bit ``c`` is ``z_c``."""
    cols = m.T.rows
    img = np.zeros(1, dtype=np.uint64)
    for c in cols:
        img = np.concatenate([img, img ^ np.uint64(c)])
    return img


def _grouped_entropy(keys: np.ndarray, probs: np.ndarray) -> float:
    _, inv = np.unique(keys, return_inverse=True)
    return entropy_bits(np.bincount(inv.ravel(), weights=probs))


def exhaustive_cond_entropy(a: Gf2Matrix, b: Gf2Matrix, dist: JointPmf | None = None,
                            budget: int | None = None) -> float:
    """Exact ``H(AZ | BZ)`` by enumerating every ``z``.

    ``dist`` is a pmf over the ``ncols`` bits of ``Z`` (axis ``i`` is bit
    ``i``); ``None`` means uniform.
    """
    if a.ncols != b.ncols:
        raise ShapeError(f"A has {a.ncols} columns but B has {b.ncols}")
    k = a.ncols
    check_budget(1 << k, f"enumerating {k}-bit Z", budget)
    if a.nrows + b.nrows > 63:
        raise ValueError("stacked output must fit in 63 bits")
    if dist is None:
        probs = np.full(1 << k, 1.0 / (1 << k))
    else:
        if dist.arity != k:
            raise ValueError(f"dist has {dist.arity} variables, Z has {k} bits")
        probs = dist.flat_bits()
    ay = _images_by_columns(a)
    by = _images_by_columns(b)
    joint = (ay << np.uint64(b.nrows)) | by
    h = _grouped_entropy(joint, probs) - _grouped_entropy(by, probs)
    return max(h, 0.0)


def entropy_oracle(p: DetWiretapParams, budget: int | None = None) -> tuple[float, float]:
    """``(H(Y1|S), H(Y1|Y2))`` at uniform ``X`` independent of ``S``, by enumeration."""
    q = p.q
    a, b = channel_matrices(p)
    state = gf2.hstack(gf2.zeros(q, q), gf2.identity(q))
    return (exhaustive_cond_entropy(a, state, budget=budget),
            exhaustive_cond_entropy(a, b, budget=budget))


def linear_channel_tensor(p: DetWiretapParams) -> tuple[np.ndarray, np.ndarray]:
    """Transition tensor ``W[x, s, y1, y2]`` and uniform state pmf for the linear model.

    Symbols are packed ints over ``q`` bits, so every alphabet has ``2**q`` letters.
    """
    q = p.q
    size = 1 << q
    dx = [gf2.downshift_power(q, q - g) for g in (p.n1, p.m1, p.n2, p.m2)]
    w = np.zeros((size, size, size, size))
    for x in range(size):
        for s in range(size):
            y1 = dx[0].apply_int(x) ^ dx[1].apply_int(s)
            y2 = dx[2].apply_int(x) ^ dx[3].apply_int(s)
            w[x, s, y1, y2] = 1.0
    return w, np.full(size, 1.0 / size)
