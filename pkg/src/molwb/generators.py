"""Generators for the identity and term families used by the workbench.

Dimension bounding is done with diamonds: a d-diamond is a tuple of d+1
elements of an interval, any d of which are independent there with common
join the interval top.  :func:`diamond_terms` builds terms that normalize an
arbitrary tuple into a d-diamond while leaving genuine d-diamonds fixed, by
iterating an interval repair: join every defect (pairwise meets that should
agree, independence failures of d-subsets) onto each element and clamp below
the meet of all d-subset joins.  Diamonds are exactly the tuples whose
defects collapse, so they are fixed points of the repair.  For d = 2 one
round reduces to the classical median construction on three generators; for
d >= 3 the terms come out of d - 1 rounds and are validated by the property
suite rather than assumed.

The remaining families are direct: the d-distributive laws, the dimension
identities built from diamond terms, the test-set identities with their
two-sided branch behavior, and canonical frames in L(F^d).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .fields import Field
from .subspaces import Subspace
from .terms import (
    Comp,
    Identity,
    Join,
    Meet,
    Term,
    Var,
    join_all,
    meet_all,
)


class GeneratorError(ValueError):
    pass


def _zvars(d: int) -> list:
    return [Var(f"z{i}") for i in range(d + 1)]


@dataclass(frozen=True)
class DiamondTerms:
    d: int
    variables: tuple
    terms: tuple


def _repair_round(us: list) -> list:
    """One interval repair: join all defects on, clamp under the common top."""
    n = len(us)
    defects = []
    for i, j in combinations(range(n), 2):
        defects.append(Meet(us[i], us[j]))
    for e in range(n):
        members = [us[i] for i in range(n) if i != e]
        for k, u in enumerate(members):
            others = [m for t, m in enumerate(members) if t != k]
            if len(others) >= 2:
                defects.append(Meet(u, join_all(others)))
    rho = join_all(defects)
    tau = meet_all([join_all([us[i] for i in range(n) if i != e]) for e in range(n)])
    return [Meet(Join(u, rho), tau) for u in us]


def diamond_terms(d: int, rounds: int = 0) -> DiamondTerms:
    """Terms t_0..t_d in z0..zd whose values always form a d-diamond.

    Genuine d-diamonds evaluate to themselves.  d = 2 and d = 3 are the
    supported range checked by the test suite; larger d reuses the same
    recursion best-effort.  ``rounds`` overrides the number of repair
    rounds (default d - 1).
    """
    if d < 2:
        raise GeneratorError("diamond terms need d >= 2")
    zs = _zvars(d)
    if d == 2:
        z0, z1, z2 = zs
        b = Join(Join(Meet(z0, z1), Meet(z1, z2)), Meet(z0, z2))
        t = Meet(Meet(Join(z0, z1), Join(z1, z2)), Join(z0, z2))
        terms = [Meet(Join(z, b), t) for z in zs]
        extra = max(0, rounds - 1)
    else:
        terms = list(zs)
        extra = rounds if rounds > 0 else d - 1
    for _ in range(extra):
        terms = _repair_round(terms)
    return DiamondTerms(d, tuple(v.name for v in zs), tuple(terms))


def delta_distributive(d: int) -> Identity:
    """The d-distributive law x*(y0+..+yd) = sum_j x*(sum_{i!=j} yi)."""
    if d < 1:
        raise GeneratorError("d-distributive law needs d >= 1")
    x = Var("x")
    ys = [Var(f"y{i}") for i in range(d + 1)]
    lhs = Meet(x, join_all(ys))
    rhs = join_all(
        [Meet(x, join_all([ys[i] for i in range(d + 1) if i != j])) for j in range(d + 1)]
    )
    return Identity(lhs, rhs)


def delta_diamond(d: int) -> Identity:
    """Dimension bound via diamonds: meet of the t_i equals their join.

    Valid exactly in (subdirect products of) MOLs of height at most d, since
    any nontrivial d+1-diamond needs height d+1.
    """
    if d < 1:
        raise GeneratorError("diamond dimension identity needs d >= 1")
    dt = diamond_terms(d + 1)
    return Identity(meet_all(list(dt.terms)), join_all(list(dt.terms)))


def s_term(d: int, x: str) -> Term:
    """Test-set component (t0*x)'*(t0+t1)*x + t0*t1 with x a fresh variable."""
    dt = diamond_terms(d)
    t0, t1 = dt.terms[0], dt.terms[1]
    if x in dt.variables:
        raise GeneratorError(f"variable {x!r} collides with the diamond variables")
    xv = Var(x)
    return Join(
        Meet(Meet(Comp(Meet(t0, xv)), Join(t0, t1)), xv),
        Meet(t0, t1),
    )


def sigma(d: int, m: int) -> Identity:
    """Test-set identity in z0..zd, x1..xm.

    Fails in infinite simple MOLs of height d under assignments sending the
    z's to a nontrivial diamond of atoms and the x's to suitably distinct
    atoms; holds whenever two of the x's are identified.
    """
    if d < 2 or m < 2:
        raise GeneratorError("sigma needs d >= 2 and m >= 2")
    dt = diamond_terms(d)
    t0, t1 = dt.terms[0], dt.terms[1]
    svals = {j: s_term(d, f"x{j}") for j in range(1, m + 1)}
    factors = [Join(svals[j], svals[k]) for j, k in combinations(range(1, m + 1), 2)]
    lhs = Meet(t0, t1)
    rhs = meet_all([t0] + factors)
    return Identity(lhs, rhs)


# ---------------------------------------------------------------------------
# Frames and concrete diamonds in L(F^d)


@dataclass(frozen=True)
class Frame:
    d: int
    a: tuple
    axes: tuple


def frame_canonical(field: Field, d: int) -> Frame:
    """The coordinate frame of field^d: axes span e1 - ej."""
    if d < 2:
        raise GeneratorError("frames need d >= 2")
    zero, one = field.zero, field.one

    def unit(i):
        return Subspace.from_rows(
            field, d, [[one if j == i else zero for j in range(d)]]
        )

    def axis(j):
        row = [zero] * d
        row[0] = one
        row[j] = -one
        return Subspace.from_rows(field, d, [row])

    a = tuple(unit(i) for i in range(d))
    axes = tuple(axis(j) for j in range(1, d))
    return Frame(d, a, axes)


def diamond_canonical(field: Field, d: int) -> list:
    """A genuine nontrivial d-diamond in L(field^d): e1..ed and the diagonal."""
    if d < 2:
        raise GeneratorError("need d >= 2")
    one, zero = field.one, field.zero
    diag = Subspace.from_rows(field, d, [[one] * d])
    units = [
        Subspace.from_rows(field, d, [[one if j == i else zero for j in range(d)]])
        for i in range(d)
    ]
    return [diag] + units


def sigma_witness(field: Field, d: int, m: int) -> dict:
    """A falsifying assignment for sigma(d, m) in L(field^d).

    The z's get the canonical diamond; each x_j gets a distinct atom of the
    two-dimensional interval below t0 + t1, different from the t0 value, so
    the falsification branch of the identity fires.
    """
    vals = diamond_canonical(field, d)
    assign = {f"z{i}": vals[i] for i in range(d + 1)}
    one = field.one
    for j in range(1, m + 1):
        vec = [one + field.of(j) if t == 0 else one for t in range(d)]
        assign[f"x{j}"] = Subspace.from_rows(field, d, [vec])
    return assign


# ---------------------------------------------------------------------------
# Diamond recognition (used by the property suite)


def is_diamond(model, values) -> bool:
    """Exact check that values form a d-diamond (d = len(values) - 1)."""
    d = len(values) - 1
    if d < 1:
        return True
    if d == 1:
        return values[0] == values[1]
    beta = model.meet(values[0], values[1])
    for i, j in combinations(range(d + 1), 2):
        if model.meet(values[i], values[j]) != beta:
            return False
    tau = None
    for e in range(d + 1):
        member_join = None
        for i in range(d + 1):
            if i == e:
                continue
            member_join = (
                values[i] if member_join is None else model.join(member_join, values[i])
            )
        if tau is None:
            tau = member_join
        elif member_join != tau:
            return False
    for e in range(d + 1):
        members = [values[i] for i in range(d + 1) if i != e]
        acc = members[0]
        for u in members[1:]:
            if model.meet(u, acc) != beta:
                return False
            acc = model.join(acc, u)
    return True
