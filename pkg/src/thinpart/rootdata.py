"""Root-system bookkeeping and the exact constants derived from it.

The combinatorics (positive roots, heights, highest-root coefficients) feed
two exact quantities: a lower bound for the decay exponent delta and an upper
bound for vanishing orders of adjoint matrix coefficients.  Both are kept in
integer / Fraction arithmetic; floats never enter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "RootSystem",
    "GroupConstants",
    "DeltaBound",
    "build_root_system",
    "group_constants",
    "delta_lower_bound",
    "order_bound_real",
]

_FAMILIES = ("A", "B", "C", "D")


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    simple_roots: tuple  # coordinate vectors, tuple of tuples of ints
    positive_roots: tuple  # coefficient vectors over the simple roots

    @property
    def heights(self) -> tuple:
        return tuple(sum(c) for c in self.positive_roots)

    @property
    def ht_sum(self) -> int:
        """Largest height: max over positive roots of the coefficient sum."""
        return max(self.heights)

    @property
    def coeff_max(self) -> int:
        """Largest single coefficient in the highest root."""
        highest = max(self.positive_roots, key=sum)
        return max(highest)


def _positive_root_coordinates(family: str, rank: int) -> list:
    e = lambda i: tuple(1 if j == i else 0 for j in range(rank + 1))

    def vec(dim, entries):  # entries: {index: value}
        return tuple(entries.get(j, 0) for j in range(dim))

    roots = []
    if family == "A":
        for i in range(rank + 1):
            for j in range(i + 1, rank + 1):
                roots.append(vec(rank + 1, {i: 1, j: -1}))
    elif family in ("B", "C", "D"):
        for i in range(rank):
            for j in range(i + 1, rank):
                roots.append(vec(rank, {i: 1, j: -1}))
                roots.append(vec(rank, {i: 1, j: 1}))
        if family == "B":
            for i in range(rank):
                roots.append(vec(rank, {i: 1}))
        elif family == "C":
            for i in range(rank):
                roots.append(vec(rank, {i: 2}))
    return roots


def _simple_root_coordinates(family: str, rank: int) -> list:
    def vec(dim, entries):
        return tuple(entries.get(j, 0) for j in range(dim))

    if family == "A":
        return [vec(rank + 1, {i: 1, i + 1: -1}) for i in range(rank)]
    simples = [vec(rank, {i: 1, i + 1: -1}) for i in range(rank - 1)]
    if family == "B":
        simples.append(vec(rank, {rank - 1: 1}))
    elif family == "C":
        simples.append(vec(rank, {rank - 1: 2}))
    elif family == "D":
        simples.append(vec(rank, {rank - 2: 1, rank - 1: 1}))
    return simples


def build_root_system(family: str, rank: int) -> RootSystem:
    """Positive roots of A_r, B_r, C_r, D_r as simple-root coefficient vectors."""
    if family not in _FAMILIES:
        raise ValueError(f"family must be one of {_FAMILIES}, got {family!r}")
    min_rank = 2 if family == "D" else 1
    if rank < min_rank:
        raise ValueError(f"rank {rank} too small for family {family}")
    simples = _simple_root_coordinates(family, rank)
    positives = _positive_root_coordinates(family, rank)
    s = np.array(simples, dtype=float).T
    coeff_vectors = []
    for root in positives:
        c, *_ = np.linalg.lstsq(s, np.array(root, dtype=float), rcond=None)
        c_int = np.rint(c).astype(int)
        if np.abs(s @ c_int - np.array(root, dtype=float)).max() > 1e-9:
            raise AssertionError(f"root {root} is not an integer combination")
        coeff_vectors.append(tuple(int(v) for v in c_int))
    return RootSystem(family, rank, tuple(simples), tuple(coeff_vectors))


@dataclass(frozen=True)
class GroupConstants:
    """Integer invariants of SL(n, R) entering the explicit bounds.

    dim_g    real dimension n^2 - 1
    dim_u    dimension of a maximal unipotent subgroup, n(n-1)/2
    rank_k   rank of the maximal compact SO(n), floor(n/2)
    ht_sum   largest root height under the coefficient-sum convention, n - 1
    coeff_max largest single coefficient in the highest root (1 for type A)
    """

    dim_g: int
    dim_u: int
    rank_k: int
    ht_sum: int
    coeff_max: int


def group_constants(n: int) -> GroupConstants:
    if n < 2:
        raise ValueError(f"SL(n) constants need n >= 2, got {n}")
    system = build_root_system("A", n - 1)
    return GroupConstants(
        dim_g=n * n - 1,
        dim_u=n * (n - 1) // 2,
        rank_k=n // 2,
        ht_sum=system.ht_sum,
        coeff_max=system.coeff_max,
    )


def order_bound_real(gc: GroupConstants) -> int:
    """Vanishing-order bound (6 * ht * dim_u + 1)^rank_k, exact integer."""
    return (6 * gc.ht_sum * gc.dim_u + 1) ** gc.rank_k


@dataclass(frozen=True)
class DeltaBound:
    """Exact decay exponent bound with the intermediate inverse-bound chain.

    delta            final bound (3 * ht * dim_g)^-(rank_k + 1)
    inverse_order    2 * ht * dim_k * order_bound, the sharper inverse bound
    inverse_final    (3 * ht * dim_g)^(rank_k + 1) = 1 / delta
    """

    delta: Fraction
    inverse_order: int
    inverse_final: int


def delta_lower_bound(gc: GroupConstants) -> DeltaBound:
    """Exact rational lower bound for the decay exponent of SL(n, R).

    dim K equals dim_u for these split groups (Iwasawa: dim G = dim K +
    rank + dim U), which the chain uses.
    """
    dim_k = gc.dim_u
    inverse_order = 2 * gc.ht_sum * dim_k * order_bound_real(gc)
    inverse_final = (3 * gc.ht_sum * gc.dim_g) ** (gc.rank_k + 1)
    if inverse_order > inverse_final:
        raise AssertionError("inverse-bound chain is out of order")
    return DeltaBound(
        delta=Fraction(1, inverse_final),
        inverse_order=inverse_order,
        inverse_final=inverse_final,
    )
