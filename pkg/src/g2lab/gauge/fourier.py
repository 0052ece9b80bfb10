"""Fourier-represented gauge fields on the unit n-torus.

A field of degree k with group rank r is a finite sum

    a(x) = sum_m  sum_{|J|=k}  c_{m,J} e^{2 pi i m.x} e^J

with c_{m,J} an r x r complex matrix (anti-Hermitian values once the
reality condition c_{-m,J} = -c_{m,J}^dagger holds).  All integrals reduce
to reading off the zero mode, so quadrature is exact for polynomial
expressions in the modes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..exterior import ConstForm, lex_basis, merge_indices
from ..fibration import OMEGA_BASE, OMEGA_BAR_BASE, TorusFibration

Freq = tuple
Idx = tuple

TWO_PI_I = 2.0j * np.pi


def _mat(x, r: int) -> np.ndarray:
    m = np.asarray(x, dtype=complex)
    if m.shape == ():
        m = m.reshape(1, 1)
    if m.shape != (r, r):
        raise ValueError(f"coefficient shape {m.shape} != ({r}, {r})")
    return m


@dataclass
class FourierField:
    dim: int
    degree: int
    group_rank: int
    cutoff: int
    modes: dict = field(default_factory=dict)  # freq -> {idx -> (r, r) complex}

    @staticmethod
    def zero(dim: int, degree: int, group_rank: int = 1, cutoff: int = 8) -> "FourierField":
        return FourierField(dim, degree, group_rank, cutoff, {})

    def copy(self) -> "FourierField":
        return FourierField(self.dim, self.degree, self.group_rank, self.cutoff,
                            {m: {i: c.copy() for i, c in d.items()}
                             for m, d in self.modes.items()})

    def set_coeff(self, freq: Freq, idx: Idx, value) -> None:
        freq = tuple(int(f) for f in freq)
        if len(freq) != self.dim or len(idx) != self.degree:
            raise ValueError("freq/idx shape mismatch")
        self.modes.setdefault(freq, {})[tuple(idx)] = _mat(value, self.group_rank)

    def add_coeff(self, freq: Freq, idx: Idx, value) -> None:
        freq = tuple(int(f) for f in freq)
        d = self.modes.setdefault(freq, {})
        d[tuple(idx)] = d.get(tuple(idx), 0) + _mat(value, self.group_rank)

    def prune(self, tol: float = 0.0) -> "FourierField":
        out = {}
        for m, d in self.modes.items():
            kept = {i: c for i, c in d.items() if np.abs(c).max() > tol}
            if kept:
                out[m] = kept
        self.modes = out
        return self

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(np.abs(c).max() <= tol for d in self.modes.values() for c in d.values())

    def __add__(self, other: "FourierField") -> "FourierField":
        self._check_compat(other)
        out = self.copy()
        out.cutoff = max(self.cutoff, other.cutoff)
        for m, d in other.modes.items():
            for i, c in d.items():
                out.add_coeff(m, i, c)
        return out.prune()

    def __sub__(self, other: "FourierField") -> "FourierField":
        return self + other.scale(-1.0)

    def scale(self, s) -> "FourierField":
        out = self.copy()
        for d in out.modes.values():
            for i in d:
                d[i] = d[i] * s
        return out

    def _check_compat(self, other: "FourierField") -> None:
        if (self.dim, self.degree, self.group_rank) != \
                (other.dim, other.degree, other.group_rank):
            raise ValueError("field shape mismatch")

    # -- reality -----------------------------------------------------------

    def reality_defect(self) -> float:
        """max |c_{-m} + c_m^dagger|; zero for a real Lie-algebra field."""
        worst = 0.0
        for m, d in self.modes.items():
            neg = tuple(-x for x in m)
            dn = self.modes.get(neg, {})
            for i, c in d.items():
                other = dn.get(i, np.zeros_like(c))
                worst = max(worst, float(np.abs(other + c.conj().T).max()))
        return worst

    def symmetrized(self) -> "FourierField":
        """Project onto the real Lie-algebra subspace, c_{-m} = -c_m^dagger."""
        out = FourierField.zero(self.dim, self.degree, self.group_rank, self.cutoff)
        keys = set(self.modes)
        keys.update(tuple(-x for x in m) for m in self.modes)
        zero = np.zeros((self.group_rank, self.group_rank), dtype=complex)
        for m in keys:
            neg = tuple(-x for x in m)
            idxs = set(self.modes.get(m, {})) | set(self.modes.get(neg, {}))
            for i in idxs:
                c = self.modes.get(m, {}).get(i, zero)
                other = self.modes.get(neg, {}).get(i, zero)
                out.add_coeff(m, i, 0.5 * (c - other.conj().T))
        return out.prune()

    # -- calculus ----------------------------------------------------------

    def d(self) -> "FourierField":
        """Exterior derivative, exact in Fourier space: d(e^{2pi i m.x} e^J)
        = 2 pi i sum_j m_j e^j ^ e^J."""
        out = FourierField.zero(self.dim, self.degree + 1, self.group_rank, self.cutoff)
        for m, dct in self.modes.items():
            for idx, c in dct.items():
                for j in range(self.dim):
                    if m[j] == 0:
                        continue
                    merged = merge_indices((j + 1,), idx)
                    if merged is None:
                        continue
                    sign, new_idx = merged
                    out.add_coeff(m, new_idx, TWO_PI_I * m[j] * sign * c)
        return out.prune()

    def wedge(self, other: "FourierField", cutoff: int | None = None) -> "FourierField":
        """Matrix-valued wedge by mode convolution.

        Output modes beyond ``cutoff`` (default: sum of the operand cutoffs)
        are dropped; with polynomially generated fields the convolution is
        exact below that bound.
        """
        if self.dim != other.dim or self.group_rank != other.group_rank:
            raise ValueError("field shape mismatch")
        lim = cutoff if cutoff is not None else self.cutoff + other.cutoff
        out = FourierField.zero(self.dim, self.degree + other.degree,
                                self.group_rank, lim)
        if out.degree > self.dim:
            return out
        for m1, d1 in self.modes.items():
            for m2, d2 in other.modes.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                if max(abs(x) for x in m) > lim if m else False:
                    continue
                for i1, c1 in d1.items():
                    for i2, c2 in d2.items():
                        merged = merge_indices(i1, i2)
                        if merged is None:
                            continue
                        sign, idx = merged
                        out.add_coeff(m, idx, sign * (c1 @ c2))
        return out.prune(1e-300)

    def contract(self, v) -> "FourierField":
        """Interior product with a constant vector (1-indexed components v)."""
        if len(v) != self.dim:
            raise ValueError("vector dimension mismatch")
        out = FourierField.zero(self.dim, self.degree - 1, self.group_rank, self.cutoff)
        for m, dct in self.modes.items():
            for idx, c in dct.items():
                for p, i in enumerate(idx):
                    if v[i - 1] == 0:
                        continue
                    rest = idx[:p] + idx[p + 1:]
                    out.add_coeff(m, rest, ((-1) ** p) * v[i - 1] * c)
        return out.prune()

    def trace(self) -> "FourierField":
        out = FourierField.zero(self.dim, self.degree, 1, self.cutoff)
        for m, dct in self.modes.items():
            for idx, c in dct.items():
                out.add_coeff(m, idx, np.trace(c))
        return out.prune()

    def wedge_const(self, a: ConstForm) -> "FourierField":
        """Wedge with a constant scalar-coefficient form on the right."""
        if a.dim != self.dim:
            raise ValueError("dimension mismatch")
        out = FourierField.zero(self.dim, self.degree + a.degree,
                                self.group_rank, self.cutoff)
        if out.degree > self.dim:
            return out
        for m, dct in self.modes.items():
            for idx, c in dct.items():
                for ia, ca in a.coeffs.items():
                    merged = merge_indices(idx, ia)
                    if merged is None:
                        continue
                    sign, new_idx = merged
                    out.add_coeff(m, new_idx, sign * float(ca) * c)
        return out.prune()

    def integrate_top(self) -> complex:
        """Integral over the unit torus of the top-degree component.

        Only the zero mode survives; returns the trace of its coefficient at
        the top index (scalar for group_rank 1).
        """
        if self.degree != self.dim:
            raise ValueError("integrand must be a top-degree form")
        top = tuple(range(1, self.dim + 1))
        c = self.modes.get((0,) * self.dim, {}).get(top)
        if c is None:
            return 0.0
        return complex(np.trace(c)) if self.group_rank > 1 else complex(c[0, 0])

    def norm_sq(self) -> float:
        """Parseval L^2 norm squared with the tr(c c^dagger) matrix norm."""
        return float(sum(np.real(np.trace(c @ c.conj().T))
                         for d in self.modes.values() for c in d.values()))

    def coeff_vector(self, freq: Freq, basis=None) -> list:
        basis = basis if basis is not None else lex_basis(self.dim, self.degree)
        d = self.modes.get(tuple(freq), {})
        z = np.zeros((self.group_rank, self.group_rank), dtype=complex)
        return [d.get(i, z) for i in basis]


# ---------------------------------------------------------------------------
# curvature


@dataclass
class CurvatureField:
    """Degree-2 field plus the integer flux block of a nontrivial bundle.

    The constant part 2 pi i m_{jk} e^{jk} is stored separately in ``flux``
    (a 4x4 antisymmetric integer matrix over the base coordinates) so that
    topological data stays exact; ``fluctuation`` carries the Fourier part.
    """

    fluctuation: FourierField
    flux: tuple = ((0,) * 4,) * 4
    truncation_error: float = 0.0

    def __post_init__(self):
        if self.fluctuation.degree != 2:
            raise ValueError("curvature must have degree 2")
        fl = tuple(tuple(int(x) for x in row) for row in self.flux)
        if len(fl) != 4 or any(len(r) != 4 for r in fl):
            raise ValueError("flux must be 4x4")
        if any(fl[i][j] != -fl[j][i] for i in range(4) for j in range(4)):
            raise ValueError("flux must be antisymmetric")
        object.__setattr__(self, "flux", fl)

    @property
    def dim(self) -> int:
        return self.fluctuation.dim

    @property
    def group_rank(self) -> int:
        return self.fluctuation.group_rank

    def full_field(self) -> FourierField:
        """Fluctuation plus the constant flux part folded into the zero mode."""
        out = self.fluctuation.copy()
        eye = np.eye(self.group_rank, dtype=complex)
        zero = (0,) * self.dim
        for j in range(4):
            for k in range(j + 1, 4):
                if self.flux[j][k] != 0:
                    out.add_coeff(zero, (j + 1, k + 1),
                                  TWO_PI_I * self.flux[j][k] * eye)
        return out.prune()

    def is_flat(self, tol: float = 0.0) -> bool:
        return all(x == 0 for r in self.flux for x in r) \
            and self.fluctuation.is_zero(tol)


def curvature(A: FourierField) -> CurvatureField:
    """F = dA + A ^ A for a globally defined (topologically trivial) potential.

    The quadratic term is a mode convolution truncated at twice the cutoff;
    the dropped tail is reported as ``truncation_error``.
    """
    if A.degree != 1:
        raise ValueError("potential must be a 1-form")
    dA = A.d()
    lim = 2 * A.cutoff
    AA_full = A.wedge(A, cutoff=4 * A.cutoff)
    AA = FourierField.zero(A.dim, 2, A.group_rank, lim)
    tail = 0.0
    for m, d in AA_full.modes.items():
        far = m and max(abs(x) for x in m) > lim
        for i, c in d.items():
            if far:
                tail += float(np.real(np.trace(c @ c.conj().T)))
            else:
                AA.add_coeff(m, i, c)
    F = (dA + AA).prune()
    F.cutoff = lim
    return CurvatureField(F, truncation_error=np.sqrt(tail))


def constant_curvature_u1(m) -> CurvatureField:
    """Abelian connection with constant curvature 2 pi i sum m_{jk} e^{jk}.

    The flux matrix must be integer-valued and antisymmetric: these are the
    first Chern numbers of the line bundle over the coordinate 2-tori, so no
    global potential exists unless m = 0.
    """
    rows = [list(r) for r in m]
    if len(rows) != 4 or any(len(r) != 4 for r in rows):
        raise ValueError("flux matrix must be 4x4")
    for i in range(4):
        for j in range(4):
            if rows[i][j] != int(rows[i][j]):
                raise ValueError("flux entries must be integers")
            if rows[i][j] != -rows[j][i]:
                raise ValueError("flux matrix must be antisymmetric")
    return CurvatureField(FourierField.zero(4, 2, 1, 0), flux=rows)


def is_self_dual_flux(m) -> bool:
    return m[0][1] == m[2][3] and m[0][2] == m[3][1] and m[0][3] == m[1][2]


def flux_charge(m) -> int:
    """q = -(m12 m34 + m13 m42 + m14 m23), the second Chern number of the
    direct-sum bundle in the anti-Hermitian trace convention."""
    return -(m[0][1] * m[2][3] + m[0][2] * m[3][1] + m[0][3] * m[1][2])


def topological_charge(F: CurvatureField) -> float:
    """(1/8 pi^2) integral of tr(F ^ F); exact mode arithmetic."""
    full = F.full_field()
    if F.dim != 4:
        raise ValueError("charge is defined for 4D fields")
    FF = full.wedge(full, cutoff=2 * full.cutoff + 1)
    val = FF.trace().integrate_top() if F.group_rank > 1 else FF.integrate_top()
    return float(np.real(val)) / (8.0 * np.pi ** 2)


def _chirality_vectors():
    b2 = lex_basis(4, 2)
    sd = [np.array([float(x) for x in w.coeff_vector(b2)]) for w in OMEGA_BAR_BASE]
    asd = [np.array([float(x) for x in w.coeff_vector(b2)]) for w in OMEGA_BASE]
    return b2, sd, asd


def ym_energy_4d(F: CurvatureField) -> dict:
    """Yang-Mills energy split into SD and ASD parts, plus the charge.

    SD means the +1 eigenspace of the flat Hodge star with the +e^{1234}
    orientation: the e^{12}+e^{34} family, which is the chirality whose
    lifts are instantons.  Parseval makes every number exact in the modes.
    """
    if F.dim != 4:
        raise ValueError("expected a 4D field")
    full = F.full_field()
    basis, sd_vecs, asd_vecs = _chirality_vectors()
    sd_part = 0.0
    asd_part = 0.0
    for m in full.modes:
        vec = full.coeff_vector(m, basis)
        for u in sd_vecs:
            comp = sum(u[i] * vec[i] for i in range(6)) / np.sqrt(2.0)
            sd_part += float(np.real(np.trace(comp @ comp.conj().T)))
        for u in asd_vecs:
            comp = sum(u[i] * vec[i] for i in range(6)) / np.sqrt(2.0)
            asd_part += float(np.real(np.trace(comp @ comp.conj().T)))
    q = topological_charge(F)
    return {"total": sd_part + asd_part, "sd_part": sd_part,
            "asd_part": asd_part, "q": q}


# ---------------------------------------------------------------------------
# the 7D lift


def lift_to_7d(F: CurvatureField, fib: TorusFibration) -> CurvatureField:
    """Pull a base field up the fibration, in lattice-adapted coordinates.

    The fibration map is projection onto the first four coordinates there,
    so modes pad with zero fiber frequencies and index tuples are reused;
    the lift has no fiber legs and no fiber dependence by construction.
    """
    if F.dim != 4:
        raise ValueError("expected a base field")
    del fib  # adapted coordinates make the map the same for every spec
    out = FourierField.zero(7, 2, F.group_rank, F.fluctuation.cutoff)
    for m, d in F.fluctuation.modes.items():
        m7 = m + (0, 0, 0)
        for idx, c in d.items():
            out.add_coeff(m7, idx, c)
    return CurvatureField(out, flux=F.flux, truncation_error=F.truncation_error)


def energy_decomposition_7d(F: CurvatureField, s) -> dict:
    """Split the 7D energy by the two curvature eigenspaces.

    kappa_integral is computed independently by integrating -tr(F^F)^phi
    and must match lambda7*F7sq + lambda14*F14sq by the eigen-calculus.
    """
    if F.dim != 7:
        raise ValueError("expected a 7D field")
    full = F.full_field()
    basis = lex_basis(7, 2)
    p7 = s.p7_array()
    p14 = s.p14_array()
    f7sq = 0.0
    f14sq = 0.0
    for m in full.modes:
        vec = full.coeff_vector(m, basis)
        stacked = np.stack(vec)  # (21, r, r)
        v7 = np.tensordot(p7, stacked, axes=(1, 0))
        v14 = np.tensordot(p14, stacked, axes=(1, 0))
        f7sq += float(sum(np.real(np.trace(v7[i] @ v7[i].conj().T)) for i in range(21)))
        f14sq += float(sum(np.real(np.trace(v14[i] @ v14[i].conj().T)) for i in range(21)))
    FF = full.wedge(full, cutoff=2 * full.cutoff + 1)
    trFF = FF.trace() if F.group_rank > 1 else FF
    kappa = -float(np.real(trFF.wedge_const(s.phi).integrate_top()))
    lam7 = float(s.lambda7)
    lam14 = float(s.lambda14)
    return {
        "F7sq": f7sq, "F14sq": f14sq, "ym": f7sq + f14sq,
        "kappa_integral": kappa,
        "identity_residual": abs(kappa - (lam7 * f7sq + lam14 * f14sq)),
    }


def instanton_residual_field(F: CurvatureField, s) -> dict:
    """L^2 residuals of the instanton conditions for a 7D Fourier field."""
    if F.dim != 7:
        raise ValueError("expected a 7D field")
    full = F.full_field()
    r_a_sq = full.wedge_const(s.star_phi).norm_sq()
    basis = lex_basis(7, 2)
    T = np.array([[float(x) for x in row]
                  for row in _structure_t_matrix(s)])
    lam14 = float(s.lambda14)
    p7 = s.p7_array()
    r_b_sq = 0.0
    f7_sq = 0.0
    for m in full.modes:
        vec = np.stack(full.coeff_vector(m, basis))
        diff = vec - np.tensordot(T, vec, axes=(1, 0)) / lam14
        v7 = np.tensordot(p7, vec, axes=(1, 0))
        r_b_sq += float(sum(np.real(np.trace(diff[i] @ diff[i].conj().T))
                            for i in range(21)))
        f7_sq += float(sum(np.real(np.trace(v7[i] @ v7[i].conj().T))
                           for i in range(21)))
    return {"r_a": float(np.sqrt(max(r_a_sq, 0.0))),
            "r_b": float(np.sqrt(max(r_b_sq, 0.0))),
            "f7_norm": float(np.sqrt(max(f7_sq, 0.0)))}


def _structure_t_matrix(s):
    # p7 = (T - lam14) / (lam7 - lam14)  =>  T = p7*(lam7-lam14) + lam14*I
    lam7, lam14 = s.lambda7, s.lambda14
    n = 21
    return [[s.p7[i][j] * (lam7 - lam14) + (lam14 if i == j else 0)
             for j in range(n)] for i in range(n)]


def asd_defect_form(F: CurvatureField) -> np.ndarray:
    """Components of the 4D ASD defect (F34-F12, F42-F13, F23-F14).

    For a constant-flux abelian field these are the three matrix
    coefficients whose norms control the 7D residual of the lift.
    """
    full = F.full_field()
    r = F.group_rank
    z = np.zeros((r, r), dtype=complex)
    zero = (0,) * F.dim
    d = full.modes.get(zero, {})

    def comp(i, j):
        return d.get((i, j), z)

    return np.stack([comp(3, 4) - comp(1, 2),
                     -comp(2, 4) - comp(1, 3),
                     comp(2, 3) - comp(1, 4)])
