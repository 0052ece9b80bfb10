"""Constant-coefficient exterior algebra on R^n, n <= 7.

Forms are sparse maps from strictly increasing index tuples (1-based) to
scalars.  Scalars are either exact (int / Fraction) or floats; every
operation propagates whichever kind it is given, so the same code path
serves both the exact identity suite and the floating-point pipelines.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Tuple

Index = Tuple[int, ...]


class DimensionMismatch(ValueError):
    pass


class DegreeMismatch(ValueError):
    pass


class NotPositiveDefinite(ValueError):
    pass


class ExactnessError(ValueError):
    """Raised when an exact computation would require an irrational scalar."""


# ---------------------------------------------------------------------------
# index bookkeeping


def sort_indices(seq: Sequence[int]) -> Tuple[int, Index] | None:
    """Sort ``seq`` into increasing order, returning (sign, tuple).

    Returns None if an index repeats (the wedge monomial vanishes).
    """
    idx = list(seq)
    sign = 1
    # insertion sort; k <= 7 so quadratic cost is irrelevant
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return None
    return sign, tuple(idx)


def merge_indices(left: Index, right: Index) -> Tuple[int, Index] | None:
    """Sign and sorted tuple of the concatenation, or None if they collide."""
    return sort_indices(left + right)


def complement(idx: Index, dim: int) -> Index:
    s = set(idx)
    return tuple(i for i in range(1, dim + 1) if i not in s)


def perm_sign(idx: Index, rest: Index) -> int:
    """Sign of the permutation (idx, rest) relative to increasing order."""
    res = sort_indices(idx + rest)
    assert res is not None
    return res[0]


def increasing_tuples(dim: int, degree: int) -> Iterable[Index]:
    return itertools.combinations(range(1, dim + 1), degree)


def lex_basis(dim: int, degree: int) -> list[Index]:
    return list(increasing_tuples(dim, degree))


# ---------------------------------------------------------------------------
# scalar helpers


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def sqrt_exact(x: Fraction) -> Fraction:
    """Exact square root of a nonnegative rational, or raise ExactnessError."""
    fr = Fraction(x)
    if fr < 0:
        raise ExactnessError("square root of negative rational")
    pn, pd = math.isqrt(fr.numerator), math.isqrt(fr.denominator)
    if pn * pn != fr.numerator or pd * pd != fr.denominator:
        raise ExactnessError(f"{fr} is not a rational square")
    return Fraction(pn, pd)


# ---------------------------------------------------------------------------
# small exact/float matrix helpers (dims <= 7: plain Python is fine)


def mat_identity(n: int, exact: bool = True):
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_det(m) -> object:
    """Determinant by fraction-free-ish Gaussian elimination (exact or float)."""
    n = len(m)
    a = [list(row) for row in m]
    det = a[0][0] - a[0][0] + 1  # one, in the scalar type of the matrix
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col] != 0:
                piv = r
                break
        if piv is None:
            return det * 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        pval = a[col][col]
        det = det * pval
        inv = Fraction(1, 1) / pval if is_exact(pval) else 1.0 / pval
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f == 0:
                continue
            for c in range(col, n):
                a[r][c] = a[r][c] - f * a[col][c]
    return det


def mat_inverse(m):
    n = len(m)
    a = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(m)]
    exact = is_exact(m[0][0])
    if exact:
        a = [[Fraction(x) for x in row] for row in a]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col]))
        if a[piv][col] == 0:
            raise ValueError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        pval = a[col][col]
        inv = (Fraction(1) / pval) if exact else 1.0 / pval
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def mat_minor_det(m, rows: Index, cols: Index):
    sub = [[m[r - 1][c - 1] for c in cols] for r in rows]
    if not sub:
        return 1
    return mat_det(sub)


# ---------------------------------------------------------------------------
# core types


@dataclass(frozen=True)
class Orientation:
    """Sign relative to the standard frame order e^1 ^ ... ^ e^n."""

    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("orientation sign must be +1 or -1")


@dataclass(frozen=True)
class Metric:
    """Symmetric positive-definite inner product on R^dim."""

    dim: int
    mat: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.mat)
        object.__setattr__(self, "mat", rows)
        if len(rows) != self.dim or any(len(r) != self.dim for r in rows):
            raise DimensionMismatch("metric matrix shape")
        for i in range(self.dim):
            for j in range(i):
                if not _close(rows[i][j], rows[j][i]):
                    raise ValueError("metric must be symmetric")
        # Leading principal minors: positive for SPD (exact when rational).
        for k in range(1, self.dim + 1):
            d = mat_minor_det(rows, tuple(range(1, k + 1)), tuple(range(1, k + 1)))
            if not d > 0:
                raise NotPositiveDefinite(f"leading minor {k} is {d}")

    @staticmethod
    def identity(dim: int, exact: bool = True) -> "Metric":
        return Metric(dim, mat_identity(dim, exact=exact))

    def inverse_matrix(self):
        return mat_inverse([list(r) for r in self.mat])

    def det(self):
        return mat_det([list(r) for r in self.mat])

    def is_exact(self) -> bool:
        return is_exact(self.mat[0][0])


def _close(a, b, tol: float = 1e-12) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    scale = max(abs(a), abs(b), 1.0)
    return abs(a - b) <= tol * scale


@dataclass(frozen=True)
class ConstForm:
    """A constant-coefficient k-form, canonically sparse (no zero entries)."""

    dim: int
    degree: int
    coeffs: Mapping[Index, object] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for idx, c in self.coeffs.items():
            idx = tuple(idx)
            if len(idx) != self.degree:
                raise DegreeMismatch(f"key {idx} has wrong degree")
            if any(not (1 <= i <= self.dim) for i in idx):
                raise DimensionMismatch(f"key {idx} outside 1..{self.dim}")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"key {idx} not strictly increasing")
            if c != 0:
                clean[idx] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def zero(dim: int, degree: int) -> "ConstForm":
        return ConstForm(dim, degree, {})

    @staticmethod
    def basis(dim: int, idx: Sequence[int], coeff=1) -> "ConstForm":
        res = sort_indices(idx)
        if res is None:
            return ConstForm.zero(dim, len(idx))
        sign, key = res
        return ConstForm(dim, len(idx), {key: sign * coeff})

    @staticmethod
    def scalar(dim: int, value) -> "ConstForm":
        return ConstForm(dim, 0, {(): value})

    @staticmethod
    def from_terms(dim: int, degree: int, terms: Mapping[Sequence[int], object]) -> "ConstForm":
        out: dict = {}
        for idx, c in terms.items():
            res = sort_indices(idx)
            if res is None:
                continue
            sign, key = res
            out[key] = out.get(key, 0) + sign * c
        return ConstForm(dim, degree, out)

    # -- linear structure ----------------------------------------------------

    def __add__(self, other: "ConstForm") -> "ConstForm":
        self._check_same(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return ConstForm(self.dim, self.degree, out)

    def __sub__(self, other: "ConstForm") -> "ConstForm":
        return self + (-other)

    def __neg__(self) -> "ConstForm":
        return ConstForm(self.dim, self.degree, {k: -c for k, c in self.coeffs.items()})

    def scale(self, s) -> "ConstForm":
        return ConstForm(self.dim, self.degree, {k: s * c for k, c in self.coeffs.items()})

    def __getitem__(self, idx: Sequence[int]):
        res = sort_indices(idx)
        if res is None:
            return 0
        sign, key = res
        return sign * self.coeffs.get(key, 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check_same(self, other: "ConstForm"):
        if self.dim != other.dim:
            raise DimensionMismatch(f"{self.dim} vs {other.dim}")
        if self.degree != other.degree:
            raise DegreeMismatch(f"{self.degree} vs {other.degree}")

    # -- mode conversion -----------------------------------------------------

    def to_double(self) -> "ConstForm":
        return ConstForm(self.dim, self.degree, {k: float(c) for k, c in self.coeffs.items()})

    def to_exact(self) -> "ConstForm":
        return ConstForm(self.dim, self.degree, {k: Fraction(c).limit_denominator(10**12)
                                                 for k, c in self.coeffs.items()})

    def coeff_vector(self, basis: Sequence[Index] | None = None) -> list:
        basis = basis if basis is not None else lex_basis(self.dim, self.degree)
        return [self.coeffs.get(k, 0) for k in basis]

    def norm_sq(self, g: Metric | None = None):
        return form_inner(self, self, g)

    # -- serialization (spec wire format) ------------------------------------

    def to_json_dict(self) -> dict:
        terms = []
        for idx, c in self.coeffs.items():
            cv = str(Fraction(c)) if is_exact(c) else float(c)
            terms.append({"idx": list(idx), "c": cv})
        return {"dim": self.dim, "degree": self.degree, "terms": terms}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @staticmethod
    def from_json_dict(d: dict) -> "ConstForm":
        coeffs = {}
        for t in d["terms"]:
            c = t["c"]
            coeffs[tuple(t["idx"])] = Fraction(c) if isinstance(c, str) else float(c)
        return ConstForm(d["dim"], d["degree"], coeffs)

    @staticmethod
    def from_json(s: str) -> "ConstForm":
        return ConstForm.from_json_dict(json.loads(s))


# ---------------------------------------------------------------------------
# operations


def wedge(a: ConstForm, b: ConstForm) -> ConstForm:
    if a.dim != b.dim:
        raise DimensionMismatch(f"{a.dim} vs {b.dim}")
    deg = a.degree + b.degree
    if deg > a.dim:
        # degree overflow is not an error: the product is identically zero
        return ConstForm.zero(a.dim, a.dim)
    out: dict = {}
    for ia, ca in a.coeffs.items():
        for ib, cb in b.coeffs.items():
            res = merge_indices(ia, ib)
            if res is None:
                continue
            sign, key = res
            out[key] = out.get(key, 0) + sign * ca * cb
    return ConstForm(a.dim, deg, out)


def wedge_all(*forms: ConstForm) -> ConstForm:
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def interior(v: Sequence, a: ConstForm) -> ConstForm:
    """Interior product v -| a for a plain vector v (no metric involved)."""
    if len(v) != a.dim:
        raise DimensionMismatch(f"vector dim {len(v)} vs form dim {a.dim}")
    if a.degree == 0:
        return ConstForm.zero(a.dim, 0)
    out: dict = {}
    for idx, c in a.coeffs.items():
        for p, i in enumerate(idx):
            vi = v[i - 1]
            if vi == 0:
                continue
            key = idx[:p] + idx[p + 1:]
            out[key] = out.get(key, 0) + ((-1) ** p) * vi * c
    return ConstForm(a.dim, a.degree - 1, out)


def form_inner(a: ConstForm, b: ConstForm, g: Metric | None = None):
    """Inner product on Lambda^k induced by g (Gram determinants)."""
    a._check_same(b)
    if g is None:
        return sum((a.coeffs[k] * b.coeffs[k] for k in a.coeffs.keys() & b.coeffs.keys()),
                   start=0)
    if g.dim != a.dim:
        raise DimensionMismatch("metric dim")
    ginv = g.inverse_matrix()
    total = 0
    for ia, ca in a.coeffs.items():
        for ib, cb in b.coeffs.items():
            total = total + ca * cb * mat_minor_det(ginv, ia, ib)
    return total


def hodge(a: ConstForm, g: Metric | None = None, o: Orientation = Orientation(1)) -> ConstForm:
    """Hodge star for an arbitrary SPD metric and explicit orientation.

    Defined by b ^ (star a) = <b, a>_g dVol for every b, with
    dVol = sign * sqrt(det g) e^{1...n}.
    """
    n = a.dim
    if g is not None and g.dim != n:
        raise DimensionMismatch("metric dim")
    exact = (g is None or g.is_exact()) and all(is_exact(c) for c in a.coeffs.values())
    if g is None:
        ginv = None
        vol = Fraction(1) if exact else 1.0
    else:
        ginv = g.inverse_matrix()
        detg = g.det()
        vol = sqrt_exact(Fraction(detg)) if exact else math.sqrt(float(detg))
    out: dict = {}
    # raised coefficients a^J = sum_I det(ginv[J, I]) a_I, then pair with the
    # complement: (star a)_K = vol * sign(J, K) * a^J, K = complement(J).
    for jdx in increasing_tuples(n, a.degree):
        if ginv is None:
            raised = a.coeffs.get(jdx, 0)
        else:
            raised = 0
            for idx, c in a.coeffs.items():
                raised = raised + c * mat_minor_det(ginv, jdx, idx)
        if raised == 0:
            continue
        kdx = complement(jdx, n)
        sign = perm_sign(jdx, kdx)
        out[kdx] = out.get(kdx, 0) + o.sign * sign * vol * raised
    return ConstForm(n, n - a.degree, out)


def volume_form(g: Metric | None, dim: int, o: Orientation = Orientation(1)) -> ConstForm:
    exact = g is None or g.is_exact()
    return hodge(ConstForm.scalar(dim, Fraction(1) if exact else 1.0), g, o)


def pullback_linear(M, a: ConstForm) -> ConstForm:
    """Pullback of a along the linear map with matrix M (rows = a.dim).

    M is an n x m array-like; the result lives in dimension m.  Satisfies
    (M^* a)(v_1,...,v_k) = a(M v_1, ..., M v_k) via Cauchy-Binet.
    """
    rows = [list(r) for r in M]
    n = len(rows)
    m = len(rows[0]) if rows else 0
    if a.dim != n:
        raise DimensionMismatch(f"matrix has {n} rows, form dim {a.dim}")
    if a.degree == 0:
        return ConstForm(m, 0, dict(a.coeffs))
    out: dict = {}
    for jdx in increasing_tuples(m, a.degree):
        total = 0
        for idx, c in a.coeffs.items():
            total = total + c * mat_minor_det(rows, idx, jdx)
        if total != 0:
            out[jdx] = total
    return ConstForm(m, a.degree, out)
