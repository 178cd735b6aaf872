"""Polynomial feasibility backend: encode "this identity fails in L(R^d)" as
integer-coefficient polynomial equations over real scalars, attack the system
by multi-restart penalty descent, decode numeric solutions back to exact
rational subspaces, and emit the system for external solvers.

Encoding: the identity is folded to a single term T that equals 1 exactly
where the identity holds, meets are removed by De Morgan, and every remaining
node becomes a d x d real matrix: term variables and joins get symmetric
idempotent "projection" blocks, complements are affine substitutions I - P,
and a join J of A, B carries J.A = A, J.B = B and J = A.X + B.Y with free
witness blocks X, Y.  A witness vector v with v'(I - T)v = 1 pins down a
vector outside the root projection, so exact solutions decode to exact
refutations.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dfield, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from .fields import Q
from .subspaces import Subspace, SubspaceLattice
from .terms import (
    Comp,
    Identity,
    Join,
    Meet,
    One,
    Term,
    Var,
    Zero,
    subterms,
    to_tautology,
    vars_of_identity,
)
from .checker import eval_term


class FeasError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Sparse integer polynomials
#
# A monomial is (coef, ((var_index, exponent), ...)) with the exponent list
# sorted by variable; a polynomial is a tuple of monomials sorted by their
# exponent lists.  All arithmetic stays in integers.


def _poly_norm(d: dict) -> tuple:
    items = [(exps, c) for exps, c in d.items() if c != 0]
    items.sort(key=lambda kv: kv[0])
    return tuple((c, exps) for exps, c in items)


def poly_const(c: int) -> tuple:
    return ((c, ()),) if c else ()


def poly_var(i: int) -> tuple:
    return ((1, ((i, 1),)),)


def poly_add(p: tuple, q: tuple) -> tuple:
    acc: dict = {}
    for c, exps in p:
        acc[exps] = acc.get(exps, 0) + c
    for c, exps in q:
        acc[exps] = acc.get(exps, 0) + c
    return _poly_norm(acc)


def poly_neg(p: tuple) -> tuple:
    return tuple((-c, exps) for c, exps in p)


def poly_sub(p: tuple, q: tuple) -> tuple:
    return poly_add(p, poly_neg(q))


def poly_mul(p: tuple, q: tuple) -> tuple:
    acc: dict = {}
    for c1, e1 in p:
        for c2, e2 in q:
            m: dict = {}
            for v, e in e1:
                m[v] = m.get(v, 0) + e
            for v, e in e2:
                m[v] = m.get(v, 0) + e
            key = tuple(sorted(m.items()))
            acc[key] = acc.get(key, 0) + c1 * c2
    return _poly_norm(acc)


def poly_eval(p: tuple, x) -> float:
    total = 0.0
    for c, exps in p:
        term = float(c)
        for v, e in exps:
            term *= x[v] ** e
        total += term
    return total


# ---------------------------------------------------------------------------
# The polynomial system


@dataclass
class PolySystem:
    d: int
    variables: list
    constraints: list
    provenance: list
    root: int
    projections: dict

    _arrays: Optional[tuple] = dfield(default=None, repr=False, compare=False)
    # The rewritten source term, kept (not serialized) so the solver can warm
    # start restarts by numerically simulating the encoded configuration.
    _term: Optional[Term] = dfield(default=None, repr=False, compare=False)

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    def _compiled(self):
        """Monomials flattened to index arrays for fast residual/gradient."""
        if self._arrays is None:
            nvars = len(self.variables)
            con_idx, coefs, slots = [], [], []
            for ci, poly in enumerate(self.constraints):
                for c, exps in poly:
                    flat = []
                    for v, e in exps:
                        flat.extend([v] * e)
                    if len(flat) > 3:
                        raise FeasError("constraint degree exceeds 3")
                    while len(flat) < 3:
                        flat.append(nvars)  # the constant-1 slot
                    con_idx.append(ci)
                    coefs.append(float(c))
                    slots.append(flat)
            self._arrays = (
                np.array(con_idx, dtype=np.int64),
                np.array(coefs, dtype=np.float64),
                np.array(slots, dtype=np.int64),
                len(self.constraints),
            )
        return self._arrays


def _demorgan(t: Term) -> Term:
    """Rewrite meets as complement-join-complement, preserving DAG sharing."""
    cache: dict = {}

    def rw(node: Term) -> Term:
        got = cache.get(id(node))
        if got is not None:
            return got
        if isinstance(node, Meet):
            out = Comp(Join(Comp(rw(node.left)), Comp(rw(node.right))))
        elif isinstance(node, Join):
            out = Join(rw(node.left), rw(node.right))
        elif isinstance(node, Comp):
            out = Comp(rw(node.child))
        else:
            out = node
        cache[id(node)] = out
        return out

    order = list(subterms(t))
    for node in order:
        rw(node)
    return cache[id(t)]


def encode(identity: Identity, d: int) -> PolySystem:
    """Encode "identity fails somewhere in L(R^d)" as a polynomial system."""
    if d < 1:
        raise FeasError("dimension must be at least 1")
    taut = _demorgan(to_tautology([identity]))

    variables: list = []
    var_index: dict = {}

    def new_var(name: str) -> int:
        var_index[name] = len(variables)
        variables.append(name)
        return var_index[name]

    constraints: list = []
    provenance: list = []

    def add_constraint(poly: tuple, node_id: int) -> None:
        constraints.append(poly)
        provenance.append(node_id)

    def new_block(prefix: str, node_id: int):
        """A d x d matrix of fresh scalar variables, as polynomial entries."""
        return [
            [poly_var(new_var(f"{prefix}_{node_id}_{i}_{j}")) for j in range(d)]
            for i in range(d)
        ]

    def constrain_projection(P, node_id: int) -> None:
        for i in range(d):
            for j in range(i + 1, d):
                add_constraint(poly_sub(P[i][j], P[j][i]), node_id)
        PP = _mat_mul(P, P)
        for i in range(d):
            for j in range(d):
                add_constraint(poly_sub(PP[i][j], P[i][j]), node_id)

    def _mat_mul(A, B):
        out = []
        for i in range(d):
            row = []
            for j in range(d):
                acc: tuple = ()
                for k in range(d):
                    acc = poly_add(acc, poly_mul(A[i][k], B[k][j]))
                row.append(acc)
            out.append(row)
        return out

    def _mat_sub(A, B):
        return [[poly_sub(A[i][j], B[i][j]) for j in range(d)] for i in range(d)]

    def _mat_add(A, B):
        return [[poly_add(A[i][j], B[i][j]) for j in range(d)] for i in range(d)]

    identity_mat = [
        [poly_const(1 if i == j else 0) for j in range(d)] for i in range(d)
    ]
    zero_mat = [[poly_const(0) for _ in range(d)] for _ in range(d)]

    node_ids: dict = {}
    next_id = [0]

    def node_id_of(node) -> int:
        nid = node_ids.get(id(node))
        if nid is None:
            nid = next_id[0]
            next_id[0] += 1
            node_ids[id(node)] = nid
        return nid

    projections: dict = {}
    var_blocks: dict = {}
    exprs: dict = {}

    for node in subterms(taut):
        nid = node_id_of(node)
        if isinstance(node, Var):
            if node.name in var_blocks:
                exprs[id(node)] = var_blocks[node.name]
                continue
            P = new_block("p", nid)
            constrain_projection(P, nid)
            var_blocks[node.name] = P
            projections[node.name] = nid
            exprs[id(node)] = P
        elif isinstance(node, Zero):
            exprs[id(node)] = zero_mat
        elif isinstance(node, One):
            exprs[id(node)] = identity_mat
        elif isinstance(node, Comp):
            exprs[id(node)] = _mat_sub(identity_mat, exprs[id(node.child)])
        elif isinstance(node, Join):
            A = exprs[id(node.left)]
            B = exprs[id(node.right)]
            J = new_block("p", nid)
            constrain_projection(J, nid)
            X = new_block("x", nid)
            Y = new_block("y", nid)
            JA = _mat_mul(J, A)
            JB = _mat_mul(J, B)
            span = _mat_add(_mat_mul(A, X), _mat_mul(B, Y))
            for i in range(d):
                for j in range(d):
                    add_constraint(poly_sub(JA[i][j], A[i][j]), nid)
            for i in range(d):
                for j in range(d):
                    add_constraint(poly_sub(JB[i][j], B[i][j]), nid)
            for i in range(d):
                for j in range(d):
                    add_constraint(poly_sub(J[i][j], span[i][j]), nid)
            exprs[id(node)] = J
        else:
            raise FeasError(f"unexpected node after rewrite: {node!r}")

    root_id = node_ids[id(taut)]
    root_expr = exprs[id(taut)]
    v = [poly_var(new_var(f"v_{i}")) for i in range(d)]
    witness: tuple = ()
    for i in range(d):
        for j in range(d):
            gap = poly_sub(poly_const(1 if i == j else 0), root_expr[i][j])
            witness = poly_add(witness, poly_mul(poly_mul(v[i], v[j]), gap))
    add_constraint(poly_sub(witness, poly_const(1)), root_id)

    return PolySystem(
        d, variables, constraints, provenance, root_id, projections, _term=taut
    )


# ---------------------------------------------------------------------------
# Residual, gradient, penalty descent


def residual(system: PolySystem, point) -> float:
    """Sum of squared constraint values at the point."""
    x = np.asarray(point, dtype=np.float64)
    if x.shape != (system.num_variables,):
        raise FeasError(
            f"point has length {x.shape}, expected {system.num_variables}"
        )
    con_idx, coefs, slots, ncons = system._compiled()
    xe = np.append(x, 1.0)
    vals = coefs * xe[slots[:, 0]] * xe[slots[:, 1]] * xe[slots[:, 2]]
    r = np.bincount(con_idx, weights=vals, minlength=ncons)
    return float(r @ r)


def gradient(system: PolySystem, point):
    """Analytic gradient of the residual."""
    x = np.asarray(point, dtype=np.float64)
    if x.shape != (system.num_variables,):
        raise FeasError(
            f"point has length {x.shape}, expected {system.num_variables}"
        )
    con_idx, coefs, slots, ncons = system._compiled()
    xe = np.append(x, 1.0)
    f0 = xe[slots[:, 0]]
    f1 = xe[slots[:, 1]]
    f2 = xe[slots[:, 2]]
    vals = coefs * f0 * f1 * f2
    r = np.bincount(con_idx, weights=vals, minlength=ncons)
    w = 2.0 * r[con_idx] * coefs
    n = system.num_variables + 1
    g = np.bincount(slots[:, 0], weights=w * f1 * f2, minlength=n)
    g += np.bincount(slots[:, 1], weights=w * f0 * f2, minlength=n)
    g += np.bincount(slots[:, 2], weights=w * f0 * f1, minlength=n)
    return g[:-1]


@dataclass
class PenaltyParams:
    restarts: int = 32
    iterations: int = 5000
    tol: float = 1e-9
    backtrack: float = 0.5
    box: float = 10.0
    polish_iterations: int = 200
    seed: int = 0


@dataclass
class SolveOutcome:
    status: str  # "solved" | "exhausted"
    point: Optional[np.ndarray]
    residual: float
    restarts_used: int
    iterations_used: int

    @property
    def solved(self) -> bool:
        return self.status == "solved"


def _residual_vector_jacobian(system: PolySystem, x):
    con_idx, coefs, slots, ncons = system._compiled()
    n = system.num_variables
    xe = np.append(x, 1.0)
    f0, f1, f2 = xe[slots[:, 0]], xe[slots[:, 1]], xe[slots[:, 2]]
    vals = coefs * f0 * f1 * f2
    r = np.bincount(con_idx, weights=vals, minlength=ncons)
    J = np.zeros((ncons, n + 1))
    np.add.at(J, (con_idx, slots[:, 0]), coefs * f1 * f2)
    np.add.at(J, (con_idx, slots[:, 1]), coefs * f0 * f2)
    np.add.at(J, (con_idx, slots[:, 2]), coefs * f0 * f1)
    return r, J[:, :n]


def _random_projector(rng, d: int):
    """Random rank-k orthogonal projector, rank biased toward atoms."""
    roll = rng.uniform()
    if roll < 0.5:
        k = 1
    elif roll < 0.65 and d > 2:
        k = d - 1
    else:
        k = int(rng.integers(0, d + 1))
    if k == 0:
        return np.zeros((d, d))
    a = rng.normal(size=(d, k))
    q, _ = np.linalg.qr(a)
    return q[:, :k] @ q[:, :k].T


def _init_point(system: PolySystem, rng):
    """Restart point: simulate the encoded term when its structure is known.

    Leaves get random projectors, joins get the exact projector onto the
    numeric column-space sum with least-squares witnesses, and the refutation
    vector comes from the top eigenvector of I - T, so a restart whose random
    configuration falsifies the identity starts at a near-solution.  Systems
    loaded from JSON fall back to random projectors for every block.
    """
    d = system.d
    index = {name: i for i, name in enumerate(system.variables)}
    x = rng.uniform(-1.0, 1.0, system.num_variables)

    def put(prefix, nid, M):
        for i in range(d):
            for j in range(d):
                key = f"{prefix}_{nid}_{i}_{j}"
                if key in index:
                    x[index[key]] = M[i, j]

    if system._term is None:
        blocks = set()
        for name in system.variables:
            parts = name.split("_")
            if parts[0] == "p":
                blocks.add(parts[1])
        for nid in sorted(blocks):
            put("p", nid, _random_projector(rng, d))
        vidx = [i for n, i in index.items() if n.startswith("v_")]
        if vidx:
            v = rng.normal(size=len(vidx))
            v /= max(float(np.linalg.norm(v)), 1e-9)
            for t, i in enumerate(sorted(vidx)):
                x[i] = v[t]
        return x

    node_ids: dict = {}
    nid_counter = 0
    for node in subterms(system._term):
        node_ids[id(node)] = nid_counter
        nid_counter += 1
    var_mats: dict = {}
    vals: dict = {}
    for node in subterms(system._term):
        nid = node_ids[id(node)]
        if isinstance(node, Var):
            if node.name not in var_mats:
                M = _random_projector(rng, d)
                var_mats[node.name] = M
                put("p", system.projections[node.name], M)
            vals[id(node)] = var_mats[node.name]
        elif isinstance(node, Zero):
            vals[id(node)] = np.zeros((d, d))
        elif isinstance(node, One):
            vals[id(node)] = np.eye(d)
        elif isinstance(node, Comp):
            vals[id(node)] = np.eye(d) - vals[id(node.child)]
        else:
            A = vals[id(node.left)]
            B = vals[id(node.right)]
            stacked = np.hstack([A, B])
            u, s, _ = np.linalg.svd(stacked)
            rank = int((s > 1e-8).sum())
            P = u[:, :rank] @ u[:, :rank].T if rank else np.zeros((d, d))
            vals[id(node)] = P
            put("p", nid, P)
            W, *_ = np.linalg.lstsq(stacked, P, rcond=None)
            put("x", nid, W[:d])
            put("y", nid, W[d:])
    gap = np.eye(d) - vals[id(system._term)]
    evals, evecs = np.linalg.eigh(gap)
    if evals[-1] > 1e-6:
        v = evecs[:, -1] / np.sqrt(evals[-1])
    else:
        v = rng.normal(size=d)
        v /= max(float(np.linalg.norm(v)), 1e-9)
    for i in range(d):
        x[index[f"v_{i}"]] = v[i]
    return x


def _lm_polish(system: PolySystem, x, box: float, iterations: int, tol: float):
    """Damped Gauss-Newton refinement within the box."""
    lam = 1e-3
    n = system.num_variables
    r, J = _residual_vector_jacobian(system, x)
    f = float(r @ r)
    for _ in range(iterations):
        if f < tol:
            break
        lhs = J.T @ J + lam * np.eye(n)
        try:
            delta = np.linalg.solve(lhs, J.T @ r)
        except np.linalg.LinAlgError:
            lam *= 10.0
            continue
        x_new = np.clip(x - delta, -box, box)
        r_new, J_new = _residual_vector_jacobian(system, x_new)
        f_new = float(r_new @ r_new)
        if f_new < f:
            x, r, J, f = x_new, r_new, J_new, f_new
            lam = max(lam * 0.3, 1e-12)
        else:
            lam *= 10.0
            if lam > 1e10:
                break
    return x, f


def penalty_solve(system: PolySystem, params: Optional[PenaltyParams] = None) -> SolveOutcome:
    """Multi-restart descent on the residual, then Gauss-Newton refinement.

    Each restart runs gradient steps with a backtracking line search
    (Barzilai-Borwein step proposals) inside a coordinate box; the box rules
    out the spurious escape where the refutation vector grows without bound
    while the root gap shrinks.  A damped Gauss-Newton polish finishes the
    restart because plain first-order steps approach the bilinear span
    constraints too slowly to reach tight tolerances.
    """
    p = params or PenaltyParams()
    rng = np.random.default_rng(p.seed)
    best_f = float("inf")
    best_x = None
    iters_total = 0
    for restart in range(p.restarts):
        x = _init_point(system, rng)
        f = residual(system, x)
        g = gradient(system, x)
        step = 1e-2
        x_prev = g_prev = None
        f_window = f
        for it in range(p.iterations):
            iters_total += 1
            if f < p.tol:
                return SolveOutcome("solved", x, f, restart + 1, iters_total)
            if it % 25 == 24:
                if f > (1.0 - 1e-2) * f_window:
                    break
                f_window = f
            gnorm2 = float(g @ g)
            if gnorm2 < 1e-30:
                break
            if x_prev is not None:
                dx = x - x_prev
                dg = g - g_prev
                denom = float(dx @ dg)
                step = float(dx @ dx) / denom if denom > 1e-30 else 1e-2
            t = min(max(step, 1e-12), 1e4)
            accepted = False
            while t > 1e-16:
                x_new = np.clip(x - t * g, -p.box, p.box)
                f_new = residual(system, x_new)
                if f_new <= f - 1e-8 * min(t, 1.0) * gnorm2:
                    x_prev, g_prev = x, g
                    x, f = x_new, f_new
                    g = gradient(system, x)
                    accepted = True
                    break
                t *= p.backtrack
            if not accepted:
                break
        # Polishing a restart that is nowhere near feasibility is wasted
        # linear algebra; those restarts only contribute their best residual.
        if f < 1e-1:
            x, f = _lm_polish(system, x, p.box, p.polish_iterations, p.tol * 1e-3)
        if f < p.tol:
            return SolveOutcome("solved", x, f, restart + 1, iters_total)
        if f < best_f:
            best_f, best_x = f, x.copy()
    return SolveOutcome("exhausted", best_x, best_f, p.restarts, iters_total)


# ---------------------------------------------------------------------------
# Decoding numeric solutions to exact witnesses


def rationalize_and_verify(
    point,
    system: PolySystem,
    identity: Identity,
    residual_tol: float = 1e-6,
    denominator_cap: int = 10_000,
) -> Optional[dict]:
    """Decode a low-residual point to an exact falsifying assignment, or None.

    Each variable block is eigendecomposed, eigenvalues snapped to {0, 1},
    the column space rationalized by continued fractions, and the candidate
    assignment re-checked exactly; only a verified refutation is returned.
    """
    r = residual(system, point)
    if r >= residual_tol:
        raise FeasError(f"residual {r:.3g} violates the tolerance {residual_tol}")
    d = system.d
    x = np.asarray(point, dtype=np.float64)
    index = {name: i for i, name in enumerate(system.variables)}
    lattice = SubspaceLattice(Q, d)
    assignment = {}
    for var, nid in sorted(system.projections.items()):
        P = np.array(
            [[x[index[f"p_{nid}_{i}_{j}"]] for j in range(d)] for i in range(d)]
        )
        P = (P + P.T) / 2.0
        evals, evecs = np.linalg.eigh(P)
        cols = [evecs[:, k] for k in range(d) if evals[k] > 0.5]
        rows = []
        for c in cols:
            scale = np.max(np.abs(c))
            if scale > 0:
                c = c / scale
            rows.append(
                [Fraction(float(v)).limit_denominator(denominator_cap) for v in c]
            )
        assignment[var] = Subspace.from_rows(Q, d, rows)
    for name in vars_of_identity(identity):
        if name not in assignment:
            return None
    lhs = eval_term(identity.lhs, assignment, lattice)
    rhs = eval_term(identity.rhs, assignment, lattice)
    if lhs != rhs:
        return assignment
    return None


def solve_identity(
    identity: Identity,
    d: int,
    params: Optional[PenaltyParams] = None,
    decode_attempts: int = 3,
) -> tuple:
    """encode + penalty_solve + exact decode; returns (outcome, assignment).

    The assignment is None when the solver exhausts or when no numeric
    solution rationalizes to a verified exact witness; reseeded attempts
    cover the occasional solution whose decode collapses.
    """
    system = encode(identity, d)
    p = params or PenaltyParams()
    outcome = None
    for attempt in range(max(1, decode_attempts)):
        attempt_params = replace(p, seed=p.seed + attempt)
        outcome = penalty_solve(system, attempt_params)
        if not outcome.solved:
            return outcome, None
        assignment = rationalize_and_verify(outcome.point, system, identity)
        if assignment is not None:
            return outcome, assignment
    return outcome, None


# ---------------------------------------------------------------------------
# Emission and parsing


def emit(system: PolySystem, fmt: str) -> str:
    if fmt == "json":
        return _emit_json(system)
    if fmt == "smt":
        return _emit_smt(system)
    raise FeasError(f"unknown format {fmt!r} (expected json or smt)")


def _emit_json(system: PolySystem) -> str:
    constraints = []
    for poly in system.constraints:
        monomials = []
        for c, exps in poly:
            monomials.append(
                {"coef": c, "exps": {system.variables[v]: e for v, e in exps}}
            )
        constraints.append({"monomials": monomials})
    payload = {
        "d": system.d,
        "vars": list(system.variables),
        "constraints": constraints,
        "root": system.root,
        "provenance": list(system.provenance),
        "projections": dict(sorted(system.projections.items())),
    }
    return json.dumps(payload, separators=(",", ":"))


def parse_system(text: str) -> PolySystem:
    try:
        payload = json.loads(text)
        variables = list(payload["vars"])
        index = {name: i for i, name in enumerate(variables)}
        constraints = []
        for con in payload["constraints"]:
            acc: dict = {}
            for mono in con["monomials"]:
                exps = tuple(sorted((index[v], e) for v, e in mono["exps"].items()))
                acc[exps] = acc.get(exps, 0) + int(mono["coef"])
            constraints.append(_poly_norm(acc))
        return PolySystem(
            int(payload["d"]),
            variables,
            constraints,
            [int(i) for i in payload["provenance"]],
            int(payload["root"]),
            {str(k): int(v) for k, v in payload["projections"].items()},
        )
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as e:
        raise FeasError(f"bad system JSON: {e}") from None


def _smt_monomial(system: PolySystem, coef: int, exps: tuple) -> str:
    factors = []
    if abs(coef) != 1 or not exps:
        factors.append(str(abs(coef)))
    for v, e in exps:
        factors.extend([system.variables[v]] * e)
    if len(factors) == 1:
        return factors[0]
    return "(* " + " ".join(factors) + ")"


def _smt_group(parts: list) -> str:
    if len(parts) == 1:
        return parts[0]
    return "(+ " + " ".join(parts) + ")"


def _smt_poly(system: PolySystem, poly: tuple) -> str:
    if not poly:
        return "0"
    pos = [_smt_monomial(system, c, e) for c, e in poly if c > 0]
    neg = [_smt_monomial(system, c, e) for c, e in poly if c < 0]
    if not neg:
        return _smt_group(pos)
    if not pos:
        return "(- " + _smt_group(neg) + ")"
    return "(- " + _smt_group(pos) + " " + _smt_group(neg) + ")"


def _emit_smt(system: PolySystem) -> str:
    lines = ["(set-logic QF_NRA)"]
    for name in system.variables:
        lines.append(f"(declare-const {name} Real)")
    for poly in system.constraints:
        lines.append(f"(assert (= {_smt_poly(system, poly)} 0))")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# A small SMT-LIB2 syntax checker (used when no external solver is present)


_SMT_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_SMT_NUMERAL = re.compile(r"^\d+$")
_SMT_SYMBOL = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _sexp_parse(text: str) -> list:
    tokens = _SMT_TOKEN.findall(text)
    pos = 0

    def parse_one():
        nonlocal pos
        if pos >= len(tokens):
            raise FeasError("unexpected end of SMT input")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            items = []
            while pos < len(tokens) and tokens[pos] != ")":
                items.append(parse_one())
            if pos >= len(tokens):
                raise FeasError("unbalanced parenthesis in SMT input")
            pos += 1
            return items
        if tok == ")":
            raise FeasError("unexpected ')' in SMT input")
        return tok

    out = []
    while pos < len(tokens):
        out.append(parse_one())
    return out


def smt_syntax_check(text: str) -> tuple:
    """Structural validation of emitted SMT-LIB2; returns (ok, message)."""
    try:
        forms = _sexp_parse(text)
    except FeasError as e:
        return False, str(e)
    if not forms or forms[0] != ["set-logic", "QF_NRA"]:
        return False, "missing (set-logic QF_NRA) header"
    if not forms[-1] == ["check-sat"]:
        return False, "missing final (check-sat)"
    declared = set()

    def term_ok(t) -> bool:
        if isinstance(t, str):
            return bool(_SMT_NUMERAL.match(t)) or t in declared
        if not t or t[0] not in ("+", "-", "*"):
            return False
        if t[0] == "-" and len(t) == 2:
            return term_ok(t[1])
        if len(t) < 3:
            return False
        return all(term_ok(arg) for arg in t[1:])

    for form in forms[1:-1]:
        if not isinstance(form, list) or not form:
            return False, f"stray form: {form!r}"
        if form[0] == "declare-const":
            if len(form) != 3 or form[2] != "Real" or not _SMT_SYMBOL.match(form[1]):
                return False, f"bad declaration: {form!r}"
            declared.add(form[1])
        elif form[0] == "assert":
            if len(form) != 2:
                return False, f"bad assert arity: {form!r}"
            eq = form[1]
            if not isinstance(eq, list) or len(eq) != 3 or eq[0] != "=" or eq[2] != "0":
                return False, f"assert is not (= poly 0): {form!r}"
            if not term_ok(eq[1]):
                return False, f"ill-formed polynomial: {eq[1]!r}"
        else:
            return False, f"unexpected command {form[0]!r}"
    return True, "ok"
