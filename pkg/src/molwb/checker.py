"""Identity checking: evaluation, brute force on finite models, random exact
refutation in L(F^d), dimension-bounded refutation, and satisfiability search.

Terms are compiled once into small register programs (one instruction per
distinct DAG node), which both the exact subspace evaluator and the
numpy-vectorized finite-model evaluator execute.  Brute force on a finite
model runs over blocks of the assignment space, so falsified identities exit
early while validity still means exhaustion.

Random refutation reports are deterministic in (seed, trial): every witness
can be replayed exactly, and "valid-up-to-budget" is never strengthened to
"valid".
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dfield
from typing import Optional

import numpy as np

from .fields import Field, field_by_name
from .models import FiniteModel, ModelError, catalog_upto
from .subspaces import Subspace, SubspaceLattice, random_subspace
from .terms import (
    Comp,
    Identity,
    Join,
    Meet,
    One,
    Term,
    Var,
    Zero,
    print_term,
    subterms,
    term_length,
    vars_of,
    vars_of_identity,
)


class CheckError(ValueError):
    pass


class BudgetExceededError(CheckError):
    pass


# ---------------------------------------------------------------------------
# Term compilation and evaluation


def compile_term(t: Term, var_slot: dict) -> tuple:
    """Compile to a register program; returns (instructions, result register).

    Each distinct DAG node becomes one instruction, so shared subterms are
    evaluated once.  Instructions are (op, a, b) with register operands.
    """
    prog, roots = compile_terms([t], var_slot)
    return prog, roots[0]


def compile_terms(ts, var_slot: dict) -> tuple:
    """Compile several terms into one shared program; returns (prog, roots).

    Terms built from shared subterm objects are evaluated without repetition,
    which matters for the generated diamond terms.
    """
    reg: dict = {}
    prog = []
    roots = []
    for t in ts:
        for node in subterms(t):
            if id(node) in reg:
                continue
            if isinstance(node, Var):
                if node.name not in var_slot:
                    raise CheckError(f"unbound variable {node.name!r}")
                inst = ("var", var_slot[node.name], -1)
            elif isinstance(node, Zero):
                inst = ("bot", -1, -1)
            elif isinstance(node, One):
                inst = ("top", -1, -1)
            elif isinstance(node, Meet):
                inst = ("meet", reg[id(node.left)], reg[id(node.right)])
            elif isinstance(node, Join):
                inst = ("join", reg[id(node.left)], reg[id(node.right)])
            elif isinstance(node, Comp):
                inst = ("comp", reg[id(node.child)], -1)
            else:
                raise CheckError(f"not a term node: {node!r}")
            reg[id(node)] = len(prog)
            prog.append(inst)
        roots.append(reg[id(t)])
    return prog, roots


def run_program(prog, root: int, model, values: list):
    """Execute a compiled term over any model with meet/join/ortho/bottom/top."""
    out = [None] * len(prog)
    for i, (op, a, b) in enumerate(prog):
        if op == "var":
            out[i] = values[a]
        elif op == "bot":
            out[i] = model.bottom
        elif op == "top":
            out[i] = model.top
        elif op == "meet":
            out[i] = model.meet(out[a], out[b])
        elif op == "join":
            out[i] = model.join(out[a], out[b])
        else:
            out[i] = model.ortho(out[a])
    return out[root]


def eval_term(t: Term, assignment: dict, model):
    """Evaluate ``t`` under an assignment (variable name -> model element)."""
    names = vars_of(t)
    var_slot = {name: i for i, name in enumerate(names)}
    missing = [n for n in names if n not in assignment]
    if missing:
        raise CheckError(f"unbound variables: {', '.join(missing)}")
    prog, root = compile_term(t, var_slot)
    return run_program(prog, root, model, [assignment[n] for n in names])


def _run_vectorized(prog, root, meet_t, join_t, orthomap, bottom, top, var_arrays):
    out = [None] * len(prog)
    for i, (op, a, b) in enumerate(prog):
        if op == "var":
            out[i] = var_arrays[a]
        elif op == "bot":
            out[i] = bottom
        elif op == "top":
            out[i] = top
        elif op == "meet":
            out[i] = meet_t[out[a], out[b]]
        elif op == "join":
            out[i] = join_t[out[a], out[b]]
        else:
            out[i] = orthomap[out[a]]
    return out[root]


# ---------------------------------------------------------------------------
# Brute force over finite models


@dataclass
class HoldsResult:
    holds: bool
    witness: Optional[dict]
    assignments_checked: int

    def __bool__(self) -> bool:
        return self.holds


DEFAULT_ASSIGNMENT_CAP = 5_000_000


def _brute_force(identity: Identity, m: FiniteModel, element_pool, cap, chunk):
    m._require_validated()
    names = vars_of_identity(identity)
    k = len(names)
    pool = np.asarray(element_pool, dtype=np.int64)
    base = len(pool)
    total = base**k if k else 1
    if total > cap:
        raise BudgetExceededError(
            f"{base}^{k} assignments exceed the cap of {cap}"
        )
    var_slot = {name: i for i, name in enumerate(names)}
    prog_l, root_l = compile_term(identity.lhs, var_slot)
    prog_r, root_r = compile_term(identity.rhs, var_slot)
    meet_t, join_t, orthomap = m.meet_table, m.join_table, m.orthomap
    powers = [base**i for i in range(k)]
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total), dtype=np.int64)
        var_arrays = [pool[(flat // powers[i]) % base] for i in range(k)]
        lv = _run_vectorized(
            prog_l, root_l, meet_t, join_t, orthomap, m.bottom, m.top, var_arrays
        )
        rv = _run_vectorized(
            prog_r, root_r, meet_t, join_t, orthomap, m.bottom, m.top, var_arrays
        )
        neq = np.broadcast_to(np.asarray(lv != rv), flat.shape)
        if neq.any():
            j = int(np.argmax(neq))
            idx = int(flat[j])
            witness = {
                names[i]: m.elements[int(pool[(idx // powers[i]) % base])]
                for i in range(k)
            }
            return HoldsResult(False, witness, start + j + 1)
    return HoldsResult(True, None, total)


def holds(
    identity: Identity,
    m: FiniteModel,
    cap: int = DEFAULT_ASSIGNMENT_CAP,
    chunk: int = 1 << 16,
) -> HoldsResult:
    """Exhaustively check an identity on a validated finite model."""
    return _brute_force(identity, m, list(range(m.size)), cap, chunk)


def test_set_check(
    identity: Identity,
    m: FiniteModel,
    subset,
    cap: int = DEFAULT_ASSIGNMENT_CAP,
    chunk: int = 1 << 16,
) -> HoldsResult:
    """Brute force restricted to assignments into ``subset`` of elements.

    A subset is a test set when agreement here implies agreement of holds();
    the restriction alone proves nothing, which is the point of the probe.
    """
    pool = sorted(
        m.index(x) if isinstance(x, str) else int(x) for x in set(subset)
    )
    if not pool:
        raise CheckError("empty test subset")
    for i in pool:
        if not 0 <= i < m.size:
            raise CheckError(f"subset element {i} out of range")
    return _brute_force(identity, m, pool, cap, chunk)


# ---------------------------------------------------------------------------
# Random exact refutation in L(F^d)


@dataclass
class SubspaceWitness:
    field_name: str
    d: int
    assignment: dict
    lhs_value: Subspace
    rhs_value: Subspace
    trial: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "field": self.field_name,
            "d": self.d,
            "assignment": {v: s.to_strings() for v, s in sorted(self.assignment.items())},
            "lhs": self.lhs_value.to_strings(),
            "rhs": self.rhs_value.to_strings(),
            "trial": self.trial,
            "seed": self.seed,
        }


@dataclass
class RefutationReport:
    identity: Identity
    status: str  # "refuted" | "valid-up-to-budget"
    field_name: str
    witness: Optional[SubspaceWitness]
    trials_run: int
    dims_searched: list
    seed: int
    bound: Optional[int] = None
    elapsed: float = 0.0

    @property
    def refuted(self) -> bool:
        return self.status == "refuted"

    def to_dict(self) -> dict:
        # elapsed is intentionally omitted: reports must be byte-stable
        # across runs with the same arguments and seed.
        return {
            "identity": str(self.identity),
            "status": self.status,
            "field": self.field_name,
            "witness": self.witness.to_dict() if self.witness else None,
            "trials": self.trials_run,
            "dimensions": self.dims_searched,
            "seed": self.seed,
            "bound": self.bound,
        }


def _trial_seed(seed: int, d: int, trial: int) -> int:
    return (seed * 1_000_003 + d) * 1_000_033 + trial


def _sample_dim(rng: random.Random, d: int, atom_bias: float = 0.2) -> int:
    # Witnesses in the low-dimensional separations tend to be atoms or
    # coatoms, so bias a fifth of the draws there.
    if rng.random() < atom_bias:
        return rng.choice([1, d - 1] if d > 1 else [1])
    return rng.randint(0, d)


def sample_assignment(
    field: Field, d: int, names, seed: int
) -> dict:
    """Deterministic random subspace assignment used by the refutation search."""
    rng = random.Random(seed)
    out = {}
    for name in names:
        k = _sample_dim(rng, d)
        out[name] = random_subspace(field, d, k, rng.randrange(1 << 62))
    return out


def refute_random(
    identity: Identity,
    field: Field,
    d: int,
    trials: int,
    seed: int,
    threads: int = 1,
) -> RefutationReport:
    """Sample exact assignments in L(field^d) until one falsifies the identity.

    Trials are independent with per-trial seeds derived from (seed, d, trial),
    so the report is identical whether trials run sequentially or split over
    worker threads: the earliest falsifying trial index always wins.
    """
    t0 = time.monotonic()
    lattice = SubspaceLattice(field, d)
    names = vars_of_identity(identity)
    var_slot = {name: i for i, name in enumerate(names)}
    prog_l, root_l = compile_term(identity.lhs, var_slot)
    prog_r, root_r = compile_term(identity.rhs, var_slot)

    def scan(lo: int, hi: int):
        for trial in range(lo, hi):
            assignment = sample_assignment(
                field, d, names, _trial_seed(seed, d, trial)
            )
            values = [assignment[n] for n in names]
            lv = run_program(prog_l, root_l, lattice, values)
            rv = run_program(prog_r, root_r, lattice, values)
            if lv != rv:
                return trial, assignment, lv, rv
        return None

    hit = None
    if threads <= 1 or trials < 2:
        hit = scan(0, trials)
    else:
        from concurrent.futures import ThreadPoolExecutor

        nblocks = min(threads, trials)
        bounds = [
            (trials * b // nblocks, trials * (b + 1) // nblocks)
            for b in range(nblocks)
        ]
        with ThreadPoolExecutor(max_workers=nblocks) as pool:
            results = list(pool.map(lambda b: scan(*b), bounds))
        found = [r for r in results if r is not None]
        if found:
            hit = min(found, key=lambda r: r[0])

    if hit is not None:
        trial, assignment, lv, rv = hit
        witness = SubspaceWitness(field.name, d, assignment, lv, rv, trial, seed)
        return RefutationReport(
            identity,
            "refuted",
            field.name,
            witness,
            trial + 1,
            [d],
            seed,
            elapsed=time.monotonic() - t0,
        )
    return RefutationReport(
        identity,
        "valid-up-to-budget",
        field.name,
        None,
        trials,
        [d],
        seed,
        elapsed=time.monotonic() - t0,
    )


def refute_bounded(
    identity: Identity,
    field: Field,
    cap: Optional[int] = None,
    base_trials: int = 64,
    trials_cap: int = 8192,
    seed: int = 0,
    threads: int = 1,
) -> RefutationReport:
    """Search dimensions 1..D with escalating budgets, D from the term length.

    The dimension bound is the combined expression length of the identity
    (or the explicit cap when smaller); a refutable identity falsifies within
    a dimension computable from its length, so searching beyond it is waste.
    """
    t0 = time.monotonic()
    bound = term_length(identity.lhs) + term_length(identity.rhs)
    if cap is not None:
        bound = min(cap, bound)
    bound = max(1, bound)
    dims = []
    trials_total = 0
    for d in range(1, bound + 1):
        trials = min(trials_cap, base_trials * (2**d))
        report = refute_random(identity, field, d, trials, seed, threads=threads)
        dims.append(d)
        trials_total += report.trials_run
        if report.refuted:
            return RefutationReport(
                identity,
                "refuted",
                field.name,
                report.witness,
                trials_total,
                dims,
                seed,
                bound=bound,
                elapsed=time.monotonic() - t0,
            )
    return RefutationReport(
        identity,
        "valid-up-to-budget",
        field.name,
        None,
        trials_total,
        dims,
        seed,
        bound=bound,
        elapsed=time.monotonic() - t0,
    )


def verify_witness(identity: Identity, witness: SubspaceWitness) -> bool:
    """Replay a witness: true when the assignment still separates the sides."""
    field = field_by_name(witness.field_name)
    lattice = SubspaceLattice(field, witness.d)
    lv = eval_term(identity.lhs, witness.assignment, lattice)
    rv = eval_term(identity.rhs, witness.assignment, lattice)
    return lv != rv and lv == witness.lhs_value and rv == witness.rhs_value


# ---------------------------------------------------------------------------
# Bounded satisfiability search


@dataclass
class SatReport:
    status: str  # "found" | "not-found-within-budget"
    model_name: Optional[str] = None
    assignment: Optional[dict] = None
    subspace_assignment: Optional[dict] = None
    field_name: Optional[str] = None
    d: Optional[int] = None
    trials_run: int = 0
    models_searched: list = dfield(default_factory=list)
    seed: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"

    def to_dict(self) -> dict:
        out = {
            "status": self.status,
            "models_searched": self.models_searched,
            "trials": self.trials_run,
            "seed": self.seed,
        }
        if self.found:
            out["model"] = self.model_name
            if self.assignment is not None:
                out["assignment"] = dict(sorted(self.assignment.items()))
            if self.subspace_assignment is not None:
                out["field"] = self.field_name
                out["d"] = self.d
                out["assignment"] = {
                    v: s.to_strings()
                    for v, s in sorted(self.subspace_assignment.items())
                }
        return out


def satisfiable_bounded(
    equations: list,
    field: Field,
    dcap: int = 3,
    trials: int = 512,
    seed: int = 0,
    finite_models: Optional[list] = None,
    cap: int = DEFAULT_ASSIGNMENT_CAP,
) -> SatReport:
    """Look for a joint satisfying assignment in a nontrivial model.

    Searches the stock finite models exhaustively, then L(field^d) for
    d <= dcap at random.  This is a semi-decision: a miss reports
    "not-found-within-budget", never unsatisfiability.
    """
    if not equations:
        raise CheckError("no equations given")
    names: list = []
    for eq in equations:
        for n in vars_of_identity(eq):
            if n not in names:
                names.append(n)
    var_slot = {name: i for i, name in enumerate(names)}
    k = len(names)
    searched = []

    models = finite_models if finite_models is not None else catalog_upto(10)
    for m in models:
        if m.bottom == m.top:
            continue
        searched.append(m.name)
        n = m.size
        total = n**k if k else 1
        if total > cap:
            continue
        progs = [
            (compile_term(eq.lhs, var_slot), compile_term(eq.rhs, var_slot))
            for eq in equations
        ]
        chunk = 1 << 16
        found_idx = None
        for start in range(0, total, chunk):
            flat = np.arange(start, min(start + chunk, total), dtype=np.int64)
            var_arrays = [(flat // (n**i)) % n for i in range(k)]
            ok = np.ones(flat.shape, dtype=bool)
            for (pl, rl), (pr, rr) in progs:
                lv = _run_vectorized(
                    pl, rl, m.meet_table, m.join_table, m.orthomap,
                    m.bottom, m.top, var_arrays,
                )
                rv = _run_vectorized(
                    pr, rr, m.meet_table, m.join_table, m.orthomap,
                    m.bottom, m.top, var_arrays,
                )
                ok &= np.broadcast_to(np.asarray(lv == rv), flat.shape)
                if not ok.any():
                    break
            if ok.any():
                found_idx = int(flat[int(np.argmax(ok))])
                break
        if found_idx is not None:
            assignment = {
                names[i]: m.elements[(found_idx // (n**i)) % n] for i in range(k)
            }
            return SatReport(
                "found",
                model_name=m.name,
                assignment=assignment,
                models_searched=searched,
                seed=seed,
            )

    trials_run = 0
    for d in range(1, dcap + 1):
        lattice = SubspaceLattice(field, d)
        searched.append(lattice.name)
        for trial in range(trials):
            trials_run += 1
            assignment = sample_assignment(
                field, d, names, _trial_seed(seed, d, trial)
            )
            if all(
                eval_term(eq.lhs, assignment, lattice)
                == eval_term(eq.rhs, assignment, lattice)
                for eq in equations
            ):
                return SatReport(
                    "found",
                    model_name=lattice.name,
                    subspace_assignment=assignment,
                    field_name=field.name,
                    d=d,
                    trials_run=trials_run,
                    models_searched=searched,
                    seed=seed,
                )
    return SatReport(
        "not-found-within-budget",
        trials_run=trials_run,
        models_searched=searched,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# Assignment file I/O (witness format shared with the CLI)


def assignment_to_payload(field: Field, d: int, assignment: dict) -> dict:
    return {
        "field": field.name,
        "d": d,
        "assignment": {v: s.to_strings() for v, s in sorted(assignment.items())},
    }


def assignment_from_payload(payload: dict) -> tuple:
    try:
        field = field_by_name(payload["field"])
        d = int(payload["d"])
        assignment = {
            var: Subspace.from_strings(field, d, rows)
            for var, rows in payload["assignment"].items()
        }
    except (KeyError, TypeError) as e:
        raise CheckError(f"bad assignment payload: {e}") from None
    return field, d, assignment
