"""Connections on the total space written in fibered form.

A connection is A_t(x) + sum_i sigma_i(x, t) dt^i: a t-parametrized family
of base potentials plus three Lie-algebra scalars.  Its curvature splits
into a base block, three mixed 1-form blocks and a fiber-fiber block; the
instanton condition forces the last two to vanish and the base block to be
self-dual slice-wise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..exterior import ConstForm
from ..fibration import EPSILON3, OMEGA_BASE
from .fourier import FourierField, curvature


def _t_indices(t_dims):
    return list(itertools.product(*[range(n) for n in t_dims]))


@dataclass
class FiberedConnection:
    """t-grid of base 1-form potentials plus three scalar fields sigma_i.

    ``base`` maps a t-index tuple to a FourierField(dim 4, degree 1);
    ``sigma`` is a list of three maps with FourierField(dim 4, degree 0)
    values.  Grids are periodic in t.
    """

    t_dims: tuple
    base: dict
    sigma: tuple

    def __post_init__(self):
        object.__setattr__(self, "t_dims", tuple(int(n) for n in self.t_dims))
        if len(self.t_dims) != 3:
            raise ValueError("three fiber directions required")
        if any(n < 2 for n in self.t_dims):
            raise ValueError("need at least 2 grid points per fiber direction")
        want = set(_t_indices(self.t_dims))
        if set(self.base.keys()) != want:
            raise ValueError("base grid shape mismatch")
        if len(self.sigma) != 3 or any(set(s.keys()) != want for s in self.sigma):
            raise ValueError("sigma grid shape mismatch")

    @staticmethod
    def pullback(A: FourierField, t_dims) -> "FiberedConnection":
        """The t-independent family with sigma = 0 (a pulled-back connection)."""
        idxs = _t_indices(tuple(t_dims))
        base = {t: A for t in idxs}
        r, M = A.group_rank, A.cutoff
        zero = FourierField.zero(4, 0, r, M)
        return FiberedConnection(tuple(t_dims), base,
                                 tuple({t: zero for t in idxs} for _ in range(3)))

    def t_shift(self, t, i: int, step: int):
        lst = list(t)
        lst[i] = (lst[i] + step) % self.t_dims[i]
        return tuple(lst)


def _t_derivative(grid: dict, conn: FiberedConnection, t, i: int) -> FourierField:
    # centered difference on the periodic grid, h = 1/T_i
    h = 1.0 / conn.t_dims[i]
    up = grid[conn.t_shift(t, i, 1)]
    dn = grid[conn.t_shift(t, i, -1)]
    return (up - dn).scale(1.0 / (2.0 * h))


def _commutator_field(a: FourierField, b: FourierField) -> FourierField:
    out = a.wedge(b)  # degree sum 0 for scalars: plain pointwise product
    if a.degree == 0 and b.degree == 0:
        ba = b.wedge(a)
        return out - ba
    raise ValueError("commutator is for scalar fields")


def covariant_d_scalar(A: FourierField, chi: FourierField) -> FourierField:
    """d_A chi = d chi + [A, chi] for a Lie-algebra scalar chi."""
    out = chi.d()
    if A.group_rank > 1:
        out = out + A.wedge(chi) - chi.wedge(A)
    return out


def fibered_curvature(conn: FiberedConnection) -> dict:
    """The three curvature blocks of A_t + sum sigma_i dt^i.

    Returns base curvatures per t-slice, the mixed blocks
    d_{A_t} sigma_i - dA_t/dt^i, and the fiber-fiber block
    F_sigma = sum_{i<j} (dsigma_i/dt^j - dsigma_j/dt^i
    + 1/2 [sigma_i, sigma_j]) dt^i dt^j.  t-derivatives use centered
    differences, so the first two blocks carry O(h^2) grid error.
    """
    idxs = _t_indices(conn.t_dims)
    f_base = {t: curvature(conn.base[t]) for t in idxs}
    mixed = []
    for i in range(3):
        block = {}
        for t in idxs:
            dA = _t_derivative(conn.base, conn, t, i)
            block[t] = covariant_d_scalar(conn.base[t], conn.sigma[i][t]) - dA
        mixed.append(block)
    f_sigma = {}
    for t in idxs:
        comps = {}
        for i in range(3):
            for j in range(i + 1, 3):
                ds_i = _t_derivative(conn.sigma[i], conn, t, j)
                ds_j = _t_derivative(conn.sigma[j], conn, t, i)
                term = ds_i - ds_j
                comm = _commutator_field(conn.sigma[i][t], conn.sigma[j][t])
                comps[(i, j)] = term + comm.scale(0.5)
        f_sigma[t] = comps
    return {"F_base": f_base, "mixed": tuple(mixed), "F_sigma": f_sigma}


def block_norms(blocks: dict) -> dict:
    """Grid-averaged L^2 norms of the three curvature blocks."""
    idxs = list(blocks["F_base"].keys())
    n = len(idxs)
    base = np.sqrt(sum(blocks["F_base"][t].full_field().norm_sq() for t in idxs) / n)
    mixed = np.sqrt(sum(blocks["mixed"][i][t].norm_sq()
                        for i in range(3) for t in idxs) / n)
    fsig = np.sqrt(sum(c.norm_sq() for t in idxs
                       for c in blocks["F_sigma"][t].values()) / n)
    return {"base": float(base), "mixed": float(mixed), "f_sigma": float(fsig)}


def q_map(block) -> ConstForm:
    """Linear map sending dt^i ^ dt^j to eps^{ijk} omega_k on the base.

    ``block`` is a 3x3 antisymmetric matrix of scalars; the image is the
    corresponding self-dual base 2-form.
    """
    rows = [list(r) for r in block]
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise ValueError("expected a 3x3 block")
    for i in range(3):
        for j in range(3):
            if rows[i][j] != -rows[j][i]:
                raise ValueError("block must be antisymmetric")
    out = ConstForm.zero(4, 2)
    for i in range(3):
        for j in range(i + 1, 3):
            k = EPSILON3[(i + 1, j + 1)]
            sgn = 1 if k > 0 else -1
            omega = OMEGA_BASE[abs(k) - 1]
            if rows[i][j] != 0:
                out = out + omega.scale(sgn * rows[i][j])
    return out
