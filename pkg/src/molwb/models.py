"""Finite ortholattices as explicit tables, validated against the MOL axioms.

A model is a list of element names, an order table, an orthocomplement
permutation, and bottom/top indices.  Validation checks everything it can by
exhaustion: partial order, existence of all meets and joins, the modular law
over all triples, and the orthocomplement laws.  Nothing is assumed; catalog
constructions are validated like any user-supplied table.  Meets and joins
are memoized into full operation tables at validation time, so a validated
model doubles as a fast brute-force evaluation backend.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np


class ModelError(ValueError):
    pass


@dataclass
class CheckResult:
    name: str
    ok: bool
    witness: str = ""


@dataclass
class ValidationReport:
    model_name: str
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def summary(self) -> str:
        lines = [f"validation of {self.model_name}:"]
        for c in self.checks:
            status = "pass" if c.ok else "FAIL"
            extra = f"  [{c.witness}]" if c.witness else ""
            lines.append(f"  {status}  {c.name}{extra}")
        lines.append(f"  => {'MOL' if self.ok else 'not a MOL'}")
        return "\n".join(lines)


MODEL_SIZE_CAP = 512


class FiniteModel:
    """Explicit finite ortholattice candidate; call validate() before use."""

    def __init__(self, elements, leq, ortho, bottom: int, top: int, name: str = ""):
        self.elements = [str(e) for e in elements]
        n = len(self.elements)
        if n == 0:
            raise ModelError("empty model")
        if n > MODEL_SIZE_CAP:
            raise ModelError(f"model size {n} exceeds cap {MODEL_SIZE_CAP}")
        self.leq = np.array(leq, dtype=bool)
        if self.leq.shape != (n, n):
            raise ModelError(f"leq table must be {n}x{n}")
        self.orthomap = np.array(ortho, dtype=np.int64)
        if sorted(self.orthomap.tolist()) != list(range(n)):
            raise ModelError("ortho table is not a permutation")
        if not (0 <= bottom < n and 0 <= top < n):
            raise ModelError("bottom/top out of range")
        self.bottom = int(bottom)
        self.top = int(top)
        self.name = name or f"model[{n}]"
        self.meet_table: Optional[np.ndarray] = None
        self.join_table: Optional[np.ndarray] = None
        self.validated = False
        self.report: Optional[ValidationReport] = None

    @property
    def size(self) -> int:
        return len(self.elements)

    # -- evaluation interface -------------------------------------------------

    def _require_validated(self) -> None:
        if not self.validated:
            raise ModelError(f"{self.name} has not passed validation")

    def meet(self, a: int, b: int) -> int:
        self._require_validated()
        return int(self.meet_table[a, b])

    def join(self, a: int, b: int) -> int:
        self._require_validated()
        return int(self.join_table[a, b])

    def ortho(self, a: int) -> int:
        return int(self.orthomap[a])

    def index(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise ModelError(f"no element named {name!r} in {self.name}") from None

    def describe(self, a: int) -> str:
        return self.elements[a]

    def __repr__(self):
        return f"<{self.name}: {self.size} elements>"

    # -- validation -----------------------------------------------------------

    def _compute_tables(self):
        """Meet/join tables via down-set bitmasks; None entry = not a lattice."""
        n = self.size
        down = [0] * n
        up = [0] * n
        for x in range(n):
            col = self.leq[:, x]
            row = self.leq[x, :]
            d = 0
            u = 0
            for y in range(n):
                if col[y]:
                    d |= 1 << y
                if row[y]:
                    u |= 1 << y
            down[x] = d
            up[x] = u
        down_index = {d: x for x, d in enumerate(down)}
        up_index = {u: x for x, u in enumerate(up)}
        meet = np.full((n, n), -1, dtype=np.int64)
        join = np.full((n, n), -1, dtype=np.int64)
        missing = None
        for x in range(n):
            for y in range(x, n):
                m = down_index.get(down[x] & down[y])
                j = up_index.get(up[x] & up[y])
                if m is None or j is None:
                    if missing is None:
                        kind = "meet" if m is None else "join"
                        missing = (kind, x, y)
                else:
                    meet[x, y] = meet[y, x] = m
                    join[x, y] = join[y, x] = j
        return meet, join, missing

    def validate(self) -> ValidationReport:
        checks = []
        n = self.size
        names = self.elements
        leq = self.leq

        # Partial order.
        refl = bool(leq.diagonal().all())
        checks.append(CheckResult("reflexive", refl))
        anti = leq & leq.T & ~np.eye(n, dtype=bool)
        ok = not anti.any()
        w = ""
        if not ok:
            x, y = map(int, np.argwhere(anti)[0])
            w = f"{names[x]} <= {names[y]} <= {names[x]}"
        checks.append(CheckResult("antisymmetric", ok, w))
        closure = (leq.astype(np.int64) @ leq.astype(np.int64)) > 0
        trans_bad = closure & ~leq
        ok = not trans_bad.any()
        w = ""
        if not ok:
            x, z = map(int, np.argwhere(trans_bad)[0])
            w = f"{names[x]} .. {names[z]} breaks transitivity"
        checks.append(CheckResult("transitive", ok, w))

        # Bounds.
        ok = bool(leq[self.bottom, :].all())
        checks.append(CheckResult("bottom below all", ok))
        ok = bool(leq[:, self.top].all())
        checks.append(CheckResult("top above all", ok))

        order_ok = all(c.ok for c in checks)
        if not order_ok:
            self.report = ValidationReport(self.name, checks)
            return self.report

        # Lattice operations.
        meet, join, missing = self._compute_tables()
        ok = missing is None
        w = ""
        if not ok:
            kind, x, y = missing
            w = f"no {kind} for {names[x]}, {names[y]}"
        checks.append(CheckResult("all meets and joins exist", ok, w))
        if not ok:
            self.report = ValidationReport(self.name, checks)
            return self.report
        self.meet_table = meet.astype(np.int64)
        self.join_table = join.astype(np.int64)

        # Modular law: x <= z implies x + (y*z) = (x+y)*z, all triples.
        M, J = self.meet_table, self.join_table
        ok = True
        w = ""
        block = max(1, (1 << 22) // (n * n + 1))
        for start in range(0, n, block):
            xs = np.arange(start, min(start + block, n))
            lhs = J[xs][:, M]                    # J[x, M[y, z]]
            rhs = M[J[xs, :], :]                 # M[J[x, y], z]
            mask = leq[xs][:, None, :]           # x <= z
            bad = mask & (lhs != rhs)
            if bad.any():
                bx, by, bz = map(int, np.argwhere(bad)[0])
                x, y, z = int(xs[bx]), by, bz
                w = (
                    f"x={names[x]}, y={names[y]}, z={names[z]}: "
                    f"x+(y*z)={names[int(J[x, M[y, z]])]} but "
                    f"(x+y)*z={names[int(M[J[x, y], z])]}"
                )
                ok = False
                break
        checks.append(CheckResult("modular law", ok, w))

        # Orthocomplementation.
        o = self.orthomap
        ok = bool((o[o] == np.arange(n)).all())
        checks.append(CheckResult("ortho is an involution", ok))
        rev_bad = leq & ~leq[o][:, o].T
        ok = not rev_bad.any()
        w = ""
        if not ok:
            x, y = map(int, np.argwhere(rev_bad)[0])
            w = f"{names[x]} <= {names[y]} but not {names[int(o[y])]} <= {names[int(o[x])]}"
        checks.append(CheckResult("ortho is order-reversing", ok, w))
        idx = np.arange(n)
        bad = idx[M[idx, o[idx]] != self.bottom]
        ok = bad.size == 0
        w = "" if ok else f"{names[int(bad[0])]} * ortho != bottom"
        checks.append(CheckResult("x * x' = 0", ok, w))
        bad = idx[J[idx, o[idx]] != self.top]
        ok = bad.size == 0
        w = "" if ok else f"{names[int(bad[0])]} + ortho != top"
        checks.append(CheckResult("x + x' = 1", ok, w))

        self.report = ValidationReport(self.name, checks)
        self.validated = self.report.ok
        return self.report

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> str:
        payload = {
            "elements": self.elements,
            "leq": self.leq.astype(int).tolist(),
            "ortho": self.orthomap.tolist(),
            "bottom": self.bottom,
            "top": self.top,
        }
        return json.dumps(payload, indent=2)

    @staticmethod
    def from_json(text: str, name: str = "") -> "FiniteModel":
        try:
            payload = json.loads(text)
            return FiniteModel(
                payload["elements"],
                payload["leq"],
                payload["ortho"],
                payload["bottom"],
                payload["top"],
                name=name or "file model",
            )
        except (KeyError, TypeError, json.JSONDecodeError) as e:
            raise ModelError(f"bad model file: {e}") from None


# ---------------------------------------------------------------------------
# Catalog constructions


@lru_cache(maxsize=None)
def catalog(name: str, parameter: int) -> FiniteModel:
    """Named stock models: boolean(n) = 2^n, mo(n) = MO_n with 2n atoms."""
    if parameter < 1:
        raise ModelError("catalog parameter must be >= 1")
    if name == "boolean":
        return _boolean(parameter)
    if name == "mo":
        return _mo(parameter)
    raise ModelError(f"unknown catalog model {name!r}")


def _boolean(n: int) -> FiniteModel:
    size = 1 << n
    if size > MODEL_SIZE_CAP:
        raise ModelError(f"boolean({n}) exceeds size cap")
    names = [format(mask, f"0{n}b") for mask in range(size)]
    leq = [[(x & y) == x for y in range(size)] for x in range(size)]
    full = size - 1
    orth = [full ^ x for x in range(size)]
    m = FiniteModel(names, leq, orth, 0, full, name=f"boolean({n})")
    report = m.validate()
    if not report.ok:
        raise ModelError(f"boolean({n}) failed validation:\n{report.summary()}")
    return m


def _atom_names(n: int) -> list:
    out = []
    letters = string.ascii_lowercase
    for i in range(n):
        base = letters[i] if n <= len(letters) else f"a{i + 1}"
        out.append(base)
    return out


def _mo(n: int) -> FiniteModel:
    size = 2 * n + 2
    if size > MODEL_SIZE_CAP:
        raise ModelError(f"mo({n}) exceeds size cap")
    atom = _atom_names(n)
    names = ["0"]
    for a in atom:
        names.extend([a, a + "'"])
    names.append("1")
    top = size - 1
    leq = [[False] * size for _ in range(size)]
    for x in range(size):
        leq[0][x] = True
        leq[x][top] = True
        leq[x][x] = True
    orth = [0] * size
    orth[0] = top
    orth[top] = 0
    for i in range(n):
        a, ap = 1 + 2 * i, 2 + 2 * i
        orth[a], orth[ap] = ap, a
    m = FiniteModel(names, leq, orth, 0, top, name=f"mo({n})")
    report = m.validate()
    if not report.ok:
        raise ModelError(f"mo({n}) failed validation:\n{report.summary()}")
    return m


def trivial() -> FiniteModel:
    """The one-element ortholattice."""
    m = FiniteModel(["*"], [[True]], [0], 0, 0, name="trivial")
    m.validate()
    return m


def pentagon() -> FiniteModel:
    """N5 with an arbitrary complement map; fails the modular law."""
    names = ["0", "a", "b", "c", "1"]
    order = {(0, 0), (1, 1), (2, 2), (3, 3), (4, 4)}
    for x in range(5):
        order.add((0, x))
        order.add((x, 4))
    order.add((1, 3))  # a < c, b incomparable to both
    leq = [[(x, y) in order for y in range(5)] for x in range(5)]
    orth = [4, 2, 1, 3, 0]  # 0<->1, a<->b, c fixed: any involution will do
    return FiniteModel(names, leq, orth, 0, 4, name="N5")


def direct_product(m1: FiniteModel, m2: FiniteModel) -> FiniteModel:
    """Componentwise product; validated before being returned."""
    m1._require_validated()
    m2._require_validated()
    n1, n2 = m1.size, m2.size
    names = [f"({a},{b})" for a in m1.elements for b in m2.elements]
    leq = np.kron(m1.leq.astype(np.int8), m2.leq.astype(np.int8)).astype(bool)
    orth = [int(m1.orthomap[i]) * n2 + int(m2.orthomap[j]) for i in range(n1) for j in range(n2)]
    bottom = m1.bottom * n2 + m2.bottom
    top = m1.top * n2 + m2.top
    prod = FiniteModel(
        names, leq, orth, bottom, top, name=f"{m1.name} x {m2.name}"
    )
    report = prod.validate()
    if not report.ok:
        raise ModelError(f"product failed validation:\n{report.summary()}")
    return prod


def interval_mol(m: FiniteModel, b, c) -> FiniteModel:
    """The interval [b, c] as an MOL with complement x -> (x' * c) + b."""
    m._require_validated()
    bi = m.index(b) if isinstance(b, str) else int(b)
    ci = m.index(c) if isinstance(c, str) else int(c)
    if not m.leq[bi, ci]:
        raise ModelError(
            f"{m.elements[bi]} is not below {m.elements[ci]} in {m.name}"
        )
    members = [x for x in range(m.size) if m.leq[bi, x] and m.leq[x, ci]]
    pos = {x: k for k, x in enumerate(members)}
    names = [m.elements[x] for x in members]
    leq = [[bool(m.leq[x, y]) for y in members] for x in members]
    orth = [pos[m.join(m.meet(m.ortho(x), ci), bi)] for x in members]
    sub = FiniteModel(
        names,
        leq,
        orth,
        pos[bi],
        pos[ci],
        name=f"{m.name}[{m.elements[bi]},{m.elements[ci]}]",
    )
    report = sub.validate()
    if not report.ok:
        raise ModelError(f"interval failed validation:\n{report.summary()}")
    return sub


def height(m: FiniteModel) -> int:
    """Length of a longest chain minus one."""
    m._require_validated()
    n = m.size
    order = sorted(range(n), key=lambda x: int(m.leq[:, x].sum()))
    h = np.zeros(n, dtype=np.int64)
    for x in order:
        below = m.leq[:, x].copy()
        below[x] = False
        h[x] = 1 + (h[below].max() if below.any() else -1)
    return int(h[m.top])


def catalog_upto(max_elements: int) -> list:
    """Stock models with at most the given number of elements."""
    out = []
    n = 1
    while (1 << n) <= max_elements:
        out.append(catalog("boolean", n))
        n += 1
    n = 1
    while 2 * n + 2 <= max_elements:
        out.append(catalog("mo", n))
        n += 1
    return out
