"""The exact subspace ortholattice L(F^d).

Subspaces are stored as reduced row echelon bases over an exact field, which
makes the representation canonical: two subspaces are equal as sets exactly
when their stored matrices are equal.  Meet is computed by the kernel method
(independent of any form), join by row reduction of stacked bases, and the
orthocomplement against a hermitean form that must first be validated
anisotropic (positive definite Gram matrices over Q / Q(i) are certified
symbolically, GF(p) forms by exhaustive scan within a budget).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .fields import Field, FieldError, Q, QI, GaussianRational, PrimeField


class SubspaceError(ValueError):
    pass


def _check_matrix(field: Field, d: int, rows) -> list:
    out = []
    for r in rows:
        r = list(r)
        if len(r) != d:
            raise SubspaceError(f"row of length {len(r)}, expected {d}")
        out.append(r)
    return out


def rref_matrix(field: Field, d: int, rows) -> list:
    """Reduced row echelon form with zero rows dropped (Gauss-Jordan)."""
    m = _check_matrix(field, d, rows)
    nrows = len(m)
    pivot_row = 0
    for col in range(d):
        pr = None
        for r in range(pivot_row, nrows):
            if m[r][col]:
                pr = r
                break
        if pr is None:
            continue
        m[pivot_row], m[pr] = m[pr], m[pivot_row]
        piv = m[pivot_row][col]
        if piv != field.one:
            m[pivot_row] = [x / piv for x in m[pivot_row]]
        for r in range(nrows):
            if r != pivot_row and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[pivot_row])]
        pivot_row += 1
        if pivot_row == nrows:
            break
    return m[:pivot_row]


def kernel_matrix(field: Field, width: int, rows) -> list:
    """Basis rows of the right null space {x : M x = 0} of the given matrix."""
    red = rref_matrix(field, width, rows)
    pivots = []
    for row in red:
        for c in range(width):
            if row[c]:
                pivots.append(c)
                break
    pivot_set = set(pivots)
    free = [c for c in range(width) if c not in pivot_set]
    basis = []
    zero, one = field.zero, field.one
    for fc in free:
        vec = [zero] * width
        vec[fc] = one
        for i, pc in enumerate(pivots):
            vec[pc] = -red[i][fc]
        basis.append(vec)
    return basis


@dataclass(frozen=True)
class Subspace:
    field: Field
    d: int
    rows: tuple

    @property
    def dim(self) -> int:
        return len(self.rows)

    @staticmethod
    def from_rows(field: Field, d: int, rows) -> "Subspace":
        red = rref_matrix(field, d, rows)
        return Subspace(field, d, tuple(tuple(r) for r in red))

    @staticmethod
    def zero(field: Field, d: int) -> "Subspace":
        return Subspace(field, d, ())

    @staticmethod
    def full(field: Field, d: int) -> "Subspace":
        one, zero = field.one, field.zero
        rows = tuple(
            tuple(one if j == i else zero for j in range(d)) for i in range(d)
        )
        return Subspace(field, d, rows)

    def _require_compatible(self, other: "Subspace") -> None:
        if self.field is not other.field or self.d != other.d:
            raise SubspaceError(
                f"incompatible subspaces: {self.field.name}^{self.d} "
                f"vs {other.field.name}^{other.d}"
            )

    def join(self, other: "Subspace") -> "Subspace":
        self._require_compatible(other)
        return Subspace.from_rows(self.field, self.d, list(self.rows) + list(other.rows))

    def meet(self, other: "Subspace") -> "Subspace":
        self._require_compatible(other)
        r, s = self.dim, other.dim
        if r == 0 or s == 0:
            return Subspace.zero(self.field, self.d)
        # Coefficient vectors (a, b) with a.U = b.V span the intersection.
        cols = []
        for t in range(self.d):
            cols.append(
                [self.rows[i][t] for i in range(r)]
                + [-other.rows[j][t] for j in range(s)]
            )
        zero = self.field.zero
        vecs = []
        for k in kernel_matrix(self.field, r + s, cols):
            vec = [zero] * self.d
            for i in range(r):
                if k[i]:
                    vec = [v + k[i] * u for v, u in zip(vec, self.rows[i])]
            vecs.append(vec)
        return Subspace.from_rows(self.field, self.d, vecs)

    def contains(self, other: "Subspace") -> bool:
        self._require_compatible(other)
        return self.meet(other) == other

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self)

    def to_strings(self) -> list:
        return [[self.field.format(x) for x in row] for row in self.rows]

    @staticmethod
    def from_strings(field: Field, d: int, rows) -> "Subspace":
        return Subspace.from_rows(field, d, [[field.parse(x) for x in r] for r in rows])

    def __repr__(self):
        body = "; ".join(",".join(self.field.format(x) for x in r) for r in self.rows)
        return f"span[{body}]" if self.rows else "span[]"


# ---------------------------------------------------------------------------
# Hermitean forms and the orthocomplement


@dataclass(frozen=True)
class AnisotropyVerdict:
    status: str  # "anisotropic" | "isotropic" | "unknown"
    witness: Optional[tuple] = None
    detail: str = ""


@dataclass(frozen=True)
class Form:
    field: Field
    d: int
    gram: tuple

    @staticmethod
    def canonical(field: Field, d: int) -> "Form":
        one, zero = field.one, field.zero
        gram = tuple(
            tuple(one if i == j else zero for j in range(d)) for i in range(d)
        )
        return Form(field, d, gram)

    @staticmethod
    def from_rows(field: Field, d: int, rows) -> "Form":
        m = _check_matrix(field, d, rows)
        if len(m) != d:
            raise SubspaceError(f"Gram matrix must be {d}x{d}")
        form = Form(field, d, tuple(tuple(r) for r in m))
        if not form.is_hermitean():
            raise SubspaceError("Gram matrix is not hermitean")
        return form

    def is_hermitean(self) -> bool:
        conj = self.field.conj
        return all(
            self.gram[i][j] == conj(self.gram[j][i])
            for i in range(self.d)
            for j in range(self.d)
        )

    def inner(self, u, v):
        """<u, v> = sum_ij u_i G_ij conj(v_j)."""
        conj = self.field.conj
        total = self.field.zero
        for i in range(self.d):
            if not u[i]:
                continue
            for j in range(self.d):
                if self.gram[i][j] and v[j]:
                    total = total + u[i] * self.gram[i][j] * conj(v[j])
        return total


def _det(field: Field, m: list):
    """Exact determinant by fraction-free-ish elimination with division."""
    n = len(m)
    a = [row[:] for row in m]
    det = field.one
    for col in range(n):
        pr = None
        for r in range(col, n):
            if a[r][col]:
                pr = r
                break
        if pr is None:
            return field.zero
        if pr != col:
            a[col], a[pr] = a[pr], a[col]
            det = -det
        piv = a[col][col]
        det = det * piv
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] / piv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


@lru_cache(maxsize=None)
def check_anisotropic(form: Form, budget: int = 200_000) -> AnisotropyVerdict:
    """Decide whether <x,x> = 0 forces x = 0 for the given hermitean form.

    Over Q and Q(i) a positive definite Gram matrix is certified via
    Sylvester's criterion (exact leading principal minors); indefinite exact
    forms come back "unknown".  Over GF(p) all nonzero vectors are scanned
    when p^d fits the budget.
    """
    if not form.is_hermitean():
        return AnisotropyVerdict("unknown", detail="Gram matrix not hermitean")
    if form.field in (Q, QI):
        for k in range(1, form.d + 1):
            minor = [list(form.gram[i][:k]) for i in range(k)]
            det = _det(form.field, minor)
            if form.field is QI:
                if det.imag:
                    return AnisotropyVerdict(
                        "unknown", detail=f"minor {k} not real: {det}"
                    )
                det = det.real
            if det <= 0:
                return AnisotropyVerdict(
                    "unknown", detail=f"leading minor {k} is {det}, not positive"
                )
        return AnisotropyVerdict("anisotropic", detail="positive definite")
    if isinstance(form.field, PrimeField):
        p = form.field.p
        if p**form.d > budget:
            return AnisotropyVerdict(
                "unknown", detail=f"{p}^{form.d} exceeds scan budget {budget}"
            )
        elems = [form.field.of(v) for v in range(p)]
        for combo in itertools.product(elems, repeat=form.d):
            if not any(combo):
                continue
            if not form.inner(combo, combo):
                return AnisotropyVerdict("isotropic", witness=combo)
        return AnisotropyVerdict("anisotropic", detail="exhaustive scan")
    return AnisotropyVerdict("unknown", detail=f"unsupported field {form.field.name}")


def ortho(U: Subspace, form: Form) -> Subspace:
    """Orthocomplement of U with respect to a validated anisotropic form."""
    if form.field is not U.field or form.d != U.d:
        raise SubspaceError("form does not match subspace field/dimension")
    verdict = check_anisotropic(form)
    if verdict.status != "anisotropic":
        raise SubspaceError(
            f"form not validated anisotropic ({verdict.status}: {verdict.detail})"
        )
    if U.dim == 0:
        return Subspace.full(U.field, U.d)
    conj = U.field.conj
    # <u, x> = (U G) conj(x), so x ranges over conjugated kernel vectors.
    ug = []
    for row in U.rows:
        ug.append(
            [
                sum((row[i] * form.gram[i][j] for i in range(U.d)), U.field.zero)
                for j in range(U.d)
            ]
        )
    vecs = [[conj(x) for x in k] for k in kernel_matrix(U.field, U.d, ug)]
    return Subspace.from_rows(U.field, U.d, vecs)


# ---------------------------------------------------------------------------
# Random sampling and the lattice wrapper


def random_subspace(field: Field, d: int, k: int, seed: int) -> Subspace:
    """Deterministic random k-dimensional subspace of field^d.

    Entries are drawn from a small integer range; draws are repeated on the
    same stream until the sampled matrix has full rank k.
    """
    if not 0 <= k <= d:
        raise SubspaceError(f"need 0 <= k <= d, got k={k}, d={d}")
    if k == 0:
        return Subspace.zero(field, d)
    rng = random.Random(seed)
    for _ in range(1000):
        rows = [[field.random(rng) for _ in range(d)] for _ in range(k)]
        s = Subspace.from_rows(field, d, rows)
        if s.dim == k:
            return s
    raise SubspaceError(f"could not sample a rank-{k} subspace of {field.name}^{d}")


class SubspaceLattice:
    """L(field^d) with a validated anisotropic form, as an evaluation model."""

    def __init__(self, field: Field, d: int, form: Optional[Form] = None):
        if d < 1:
            raise SubspaceError("dimension must be at least 1")
        self.field = field
        self.d = d
        self.form = form if form is not None else Form.canonical(field, d)
        verdict = check_anisotropic(self.form)
        if verdict.status != "anisotropic":
            raise SubspaceError(
                f"no anisotropic form for {field.name}^{d} "
                f"({verdict.status}: {verdict.detail})"
            )
        self.bottom = Subspace.zero(field, d)
        self.top = Subspace.full(field, d)

    @property
    def name(self) -> str:
        return f"L({self.field.name}^{self.d})"

    def meet(self, a: Subspace, b: Subspace) -> Subspace:
        return a.meet(b)

    def join(self, a: Subspace, b: Subspace) -> Subspace:
        return a.join(b)

    def ortho(self, a: Subspace) -> Subspace:
        return ortho(a, self.form)

    def random_element(self, k: int, seed: int) -> Subspace:
        return random_subspace(self.field, self.d, k, seed)

    def describe(self, a: Subspace) -> str:
        return repr(a)

    def __repr__(self):
        return self.name


# ---------------------------------------------------------------------------
# Real restriction of Gaussian subspaces


def realify(U: Subspace) -> Subspace:
    """Image of a Gaussian-rational subspace under C^d -> R^(2d).

    Coordinates interleave as (re x1, im x1, re x2, im x2, ...); each complex
    basis vector v contributes the two real vectors v and iv.  The embedding
    sends meet to meet, join to join, and the canonical hermitean complement
    to the canonical real complement.
    """
    if U.field is not QI:
        raise SubspaceError("realify expects a subspace over the Gaussian rationals")
    rows = []
    for row in U.rows:
        re_row, im_row = [], []
        for x in row:
            re_row.extend([x.real, x.imag])
            im_row.extend([-x.imag, x.real])
        rows.append(re_row)
        rows.append(im_row)
    return Subspace.from_rows(Q, 2 * U.d, rows)
