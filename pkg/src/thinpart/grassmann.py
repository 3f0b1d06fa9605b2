"""Lower bounds for projections restricted to a moving subspace.

For an orthogonal split R^n = U + U' with projection P onto U, the wedge
functional q(W) bounds from below how much P can shrink unit vectors of a
subspace W.  Everything is phrased through singular values of P restricted
to W, plus a sampled refinement over random unit tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import Subspace, op_norm

__all__ = [
    "SplitSpace",
    "split_from_basis",
    "q_of_subspace",
    "check_projection_bound",
    "check_bijection_contraction",
]


@dataclass(frozen=True)
class SplitSpace:
    """Complementary projections P + P' = I onto U and U'."""

    ambient_dim: int
    proj_u: np.ndarray = field(repr=False)
    proj_uprime: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.asarray(self.proj_u, dtype=float)
        q = np.asarray(self.proj_uprime, dtype=float)
        n = self.ambient_dim
        if p.shape != (n, n) or q.shape != (n, n):
            raise ValueError("projections must be n x n")
        if np.abs(p + q - np.eye(n)).max() > 1e-12:
            raise ValueError("projections do not sum to the identity")
        for name, m in (("proj_u", p), ("proj_uprime", q)):
            if np.abs(m @ m - m).max() > 1e-12:
                raise ValueError(f"{name} is not idempotent")
        object.__setattr__(self, "proj_u", p)
        object.__setattr__(self, "proj_uprime", q)

    @property
    def dim_u(self) -> int:
        return int(round(float(np.trace(self.proj_u))))


def split_from_basis(u_basis: np.ndarray) -> SplitSpace:
    """Orthogonal split onto span(columns) and its complement."""
    b = np.asarray(u_basis, dtype=float)
    q, _ = np.linalg.qr(b)
    p = q @ q.T
    return SplitSpace(b.shape[0], p, np.eye(b.shape[0]) - p)


def _unit_tuple_wedge_norms(
    a: np.ndarray, l: int, n_tuples: int, rng: np.random.Generator
) -> np.ndarray:
    """Wedge norms ||P w_1 ^ ... ^ P w_l|| for random unit tuples w_i in W.

    With w_i = B c_i the wedge norm factors as |det C| times the norm on the
    orthonormal basis, so these samples can never exceed that base value;
    they are kept as an independent probe of the same supremum.
    """
    base = float(np.prod(np.linalg.svd(a, compute_uv=False)))
    coeffs = rng.standard_normal((n_tuples, l, l))
    coeffs /= np.linalg.norm(coeffs, axis=1, keepdims=True)
    return np.abs(np.linalg.det(coeffs)) * base


def q_of_subspace(
    ss: SplitSpace,
    w: Subspace,
    rng: np.random.Generator | None = None,
    n_tuple_samples: int = 1000,
) -> float:
    """sup over unit tuples (w_1 .. w_l) in W of ||P w_1 ^ ... ^ P w_l||.

    The supremum over an orthonormal basis equals the product of singular
    values of P restricted to W; random unit tuples refine (and in practice
    confirm) that value.  Always <= 1 for an orthogonal projection.
    """
    if w.dim > ss.dim_u:
        raise ValueError(f"tuple length {w.dim} exceeds dim U = {ss.dim_u}")
    if w.ambient_dim != ss.ambient_dim:
        raise ValueError("split and subspace dimensions disagree")
    if rng is None:
        rng = np.random.default_rng(0)
    a = ss.proj_u @ w.basis
    base = float(np.prod(np.linalg.svd(a, compute_uv=False)))
    sampled = _unit_tuple_wedge_norms(a, w.dim, n_tuple_samples, rng)
    return max(base, float(sampled.max()))


def check_projection_bound(
    ss: SplitSpace,
    w: Subspace,
    rng: np.random.Generator | None = None,
    n_tuple_samples: int = 1000,
) -> tuple:
    """Verify inf ||P w|| / ||w|| >= q(W); returns (holds, slack).

    Valid for orthogonal splits, so P is required to be symmetric.
    """
    if np.abs(ss.proj_u - ss.proj_u.T).max() > 1e-10:
        raise ValueError("projection bound requires an orthogonal split")
    q_hat = q_of_subspace(ss, w, rng, n_tuple_samples)
    sigma_min = float(np.linalg.svd(ss.proj_u @ w.basis, compute_uv=False)[-1])
    slack = sigma_min - q_hat
    return slack >= -1e-10, slack


def check_bijection_contraction(
    l_map: np.ndarray,
    ss: SplitSpace,
    w: Subspace,
    samples: int,
    rng: np.random.Generator | None = None,
) -> tuple:
    """Check inf_W ||Lw||/||w|| >= (inf_U ||Lu||/||u||) * (inf_W ||Pw||/||w||).

    L must preserve U and U', i.e. commute with P; random unit vectors of W
    probe the left side along with its exact singular-value evaluation.
    Returns (holds, slack) with slack the worst margin observed.
    """
    l_map = np.asarray(l_map, dtype=float)
    p = ss.proj_u
    if np.abs(p - p.T).max() > 1e-10:
        raise ValueError("contraction bound requires an orthogonal split")
    commute_defect = float(np.abs(p @ l_map - l_map @ p).max())
    if commute_defect > 1e-10:
        raise ValueError(f"L does not preserve the split, defect {commute_defect:.3e}")
    if rng is None:
        rng = np.random.default_rng(0)
    u_basis = np.linalg.svd(p)[0][:, : ss.dim_u]  # orthonormal basis of range(P)
    inf_on_u = float(np.linalg.svd(l_map @ u_basis, compute_uv=False)[-1])
    inf_p = float(np.linalg.svd(p @ w.basis, compute_uv=False)[-1])
    rhs = inf_on_u * inf_p
    lhs = float(np.linalg.svd(l_map @ w.basis, compute_uv=False)[-1])
    slack = lhs - rhs
    if samples > 0:
        coeffs = rng.standard_normal((samples, w.dim))
        coeffs /= np.linalg.norm(coeffs, axis=1, keepdims=True)
        vecs = coeffs @ w.basis.T
        ratios = np.linalg.norm(vecs @ l_map.T, axis=1)
        slack = min(slack, float(ratios.min()) - rhs)
    return slack >= -1e-10, slack
