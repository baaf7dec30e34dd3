"""Exact-rational feasibility LPs, extreme points, and iterated relaxation.

The solver finds a vertex (basic feasible solution) of a polytope given by
finite variable bounds plus sparse linear constraints.  Everything is done
in exact rational arithmetic: re-substituting a returned point into its LP
gives zero violation exactly, and every returned point carries a
certificate of ``n_vars`` linearly independent tight constraints/bounds.

Implementation: bounded-variable phase-one simplex.  Nonbasic variables
sit at a finite bound; entering steps that hit the entering variable's own
opposite bound are cheap "bound flips".  Bland's rule (lowest index for
entering, lowest basic index on ratio ties) guarantees termination and
makes the solver deterministic.

``iterated_relax`` drives the relax-and-round loop used by the splitting
and tree-path decomposers: solve an extreme point, freeze every variable
that landed on 0/1, then drop one tight constraint chosen by a pluggable
discard rule, until all variables are frozen.

The hot loop prefers ``gmpy2.mpq`` (about 10x faster than
``fractions.Fraction`` here) but falls back to the stdlib transparently;
all public values are plain ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Mapping

from .errors import InfeasibleLP, StructureTheoremViolation

try:  # optional speedup, exactness identical
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

_ZERO = _Q(0)
_ONE = _Q(1)


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


@dataclass(frozen=True)
class Constraint:
    """Sparse linear constraint ``sum(coeffs[j] * x_j) sense rhs``."""

    coeffs: Mapping[int, Fraction]
    sense: str  # "<=", ">=" or "="
    rhs: Fraction
    tag: Hashable = None

    def __post_init__(self):
        if self.sense not in ("<=", ">=", "="):
            raise ValueError(f"bad sense {self.sense!r}")
        object.__setattr__(
            self, "coeffs", {int(j): Fraction(c) for j, c in self.coeffs.items()}
        )
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    def lhs_at(self, values) -> Fraction:
        return sum((c * values[j] for j, c in self.coeffs.items()), Fraction(0))

    def satisfied_by(self, values) -> bool:
        lhs = self.lhs_at(values)
        if self.sense == "<=":
            return lhs <= self.rhs
        if self.sense == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class RationalLP:
    """Feasibility LP: finite per-variable bounds plus constraints."""

    n_vars: int
    var_bounds: list[tuple[Fraction, Fraction]]
    constraints: list[Constraint]

    def __post_init__(self):
        if len(self.var_bounds) != self.n_vars:
            raise ValueError("need one bound pair per variable")
        self.var_bounds = [(Fraction(a), Fraction(b)) for a, b in self.var_bounds]
        for j, (a, b) in enumerate(self.var_bounds):
            if a > b:
                raise ValueError(f"variable {j} has empty bound interval [{a}, {b}]")
        for con in self.constraints:
            for j in con.coeffs:
                if not 0 <= j < self.n_vars:
                    raise ValueError(f"constraint references unknown variable {j}")


@dataclass(frozen=True)
class ExtremePoint:
    """A vertex: exact values plus a defining family of tight rows.

    ``tight_set`` lists ``n_vars`` entries of the form ("lo", j),
    ("hi", j) or ("con", i), each holding with equality at ``values`` and
    jointly linearly independent.
    """

    values: tuple[Fraction, ...]
    tight_set: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class RelaxationState:
    """Audit snapshot after one relax-and-round iteration."""

    fixed: Mapping[int, int]
    discarded: tuple[Hashable, ...]
    live: RationalLP


# ---------------------------------------------------------------------------
# Simplex


def solve_extreme_point(lp: RationalLP) -> ExtremePoint:
    """Return a basic feasible solution of ``lp`` with its certificate.

    Deterministic for a given LP (Bland's pivot rule, fixed warm start).
    Raises :class:`InfeasibleLP` when the feasible region is empty,
    naming a constraint that failed in phase one when one is known.
    """
    n = lp.n_vars
    cons = lp.constraints
    m = len(cons)

    lo: list = [None] * (n + m)
    hi: list = [None] * (n + m)
    for j, (a, b) in enumerate(lp.var_bounds):
        lo[j] = _Q(a)
        hi[j] = _Q(b)
    for i, con in enumerate(cons):
        if con.sense == "<=":
            lo[n + i], hi[n + i] = _ZERO, None
        elif con.sense == ">=":
            lo[n + i], hi[n + i] = None, _ZERO
        else:
            lo[n + i], hi[n + i] = _ZERO, _ZERO

    # nonbasic start: fixed vars at their value, others alternating lo/hi
    status = [""] * (n + m)
    for j in range(n):
        status[j] = "L" if (lo[j] == hi[j] or j % 2 == 0) else "H"

    def val(c):
        return lo[c] if status[c] == "L" else hi[c]

    rows: list[list] = []
    basis: list[int] = []
    beta: list = []
    art_rows: list[int] = []

    for i, con in enumerate(cons):
        row = [_ZERO] * (n + m)
        for j, c in con.coeffs.items():
            row[j] = _Q(c)
        row[n + i] = _ONE
        s = _Q(con.rhs) - sum(
            (row[j] * val(j) for j in con.coeffs), _ZERO
        )
        slo, shi = lo[n + i], hi[n + i]
        if (slo is None or s >= slo) and (shi is None or s <= shi):
            basis.append(n + i)
            status[n + i] = "B"
            beta.append(s)
        else:
            # slack pinned at 0, violation absorbed by an artificial
            status[n + i] = "L" if slo is not None else "H"
            if s < 0:
                row = [-x for x in row]
                s = -s
            basis.append(None)  # placeholder, set below
            beta.append(s)
            art_rows.append(i)
        rows.append(row)

    total = n + m + len(art_rows)
    for k2, i in enumerate(art_rows):
        c = n + m + k2
        lo.append(_ZERO)
        hi.append(None)
        status.append("B")
        basis[i] = c
        for i2 in range(m):
            rows[i2].append(_ONE if i2 == i else _ZERO)

    is_art = [c >= n + m for c in range(total)]
    banned = [False] * total

    # phase-one reduced costs: minimise the sum of artificials
    zrow = [_ONE if is_art[c] else _ZERO for c in range(total)]
    for i in art_rows:
        r = rows[i]
        for c in range(total):
            if r[c]:
                zrow[c] -= r[c]

    def zval():
        return sum((beta[i] for i in range(m) if is_art[basis[i]]), _ZERO)

    def pivot(r_idx: int, c: int, new_beta) -> None:
        rowr = rows[r_idx]
        piv = rowr[c]
        if piv != _ONE:
            inv = _ONE / piv
            rows[r_idx] = rowr = [x * inv for x in rowr]
        for i2 in range(m):
            if i2 == r_idx:
                continue
            f = rows[i2][c]
            if f:
                ri = rows[i2]
                rows[i2] = [a - f * b for a, b in zip(ri, rowr)]
        f = zrow[c]
        if f:
            zrow[:] = [a - f * b for a, b in zip(zrow, rowr)]
        leaving = basis[r_idx]
        basis[r_idx] = c
        status[c] = "B"
        beta[r_idx] = new_beta
        if is_art[leaving]:
            banned[leaving] = True
        return leaving

    while zval() > 0:
        entering = -1
        direction = 0
        for c in range(total):
            if status[c] == "B" or banned[c]:
                continue
            if lo[c] is not None and lo[c] == hi[c]:
                continue
            d = zrow[c]
            if status[c] == "L" and d < 0:
                entering, direction = c, 1
                break
            if status[c] == "H" and d > 0:
                entering, direction = c, -1
                break
        if entering < 0:
            break  # phase-one optimum reached with positive value
        c = entering
        span = None
        if lo[c] is not None and hi[c] is not None:
            span = hi[c] - lo[c]
        row_t = None
        leave = -1
        for i in range(m):
            coef = rows[i][c]
            if not coef:
                continue
            delta = -direction * coef
            b = basis[i]
            if delta > 0:
                if hi[b] is None:
                    continue
                t_i = (hi[b] - beta[i]) / delta
            else:
                if lo[b] is None:
                    continue
                t_i = (beta[i] - lo[b]) / (-delta)
            if row_t is None or t_i < row_t or (t_i == row_t and b < basis[leave]):
                row_t, leave = t_i, i
        if span is not None and (row_t is None or span <= row_t):
            if span:
                for i in range(m):
                    coef = rows[i][c]
                    if coef:
                        beta[i] += (-direction * coef) * span
            status[c] = "H" if status[c] == "L" else "L"
            continue
        if row_t is None:
            raise RuntimeError("unbounded improving ray in phase one")
        t = row_t
        new_beta = val(c) + direction * t
        for i in range(m):
            if i == leave:
                continue
            coef = rows[i][c]
            if coef:
                beta[i] += (-direction * coef) * t
        b = basis[leave]
        status[b] = "H" if -direction * rows[leave][c] > 0 else "L"
        pivot(leave, c, new_beta)

    if zval() > 0:
        for i in range(m):
            if is_art[basis[i]] and beta[i] > 0:
                tag = cons[i].tag if cons[i].tag is not None else i
                raise InfeasibleLP(
                    f"LP infeasible; constraint {tag!r} unsatisfiable in phase one",
                    witness_tag=tag,
                )
        raise InfeasibleLP("LP infeasible", witness_tag=None)

    # drive zero-valued artificials out of the basis where possible
    for i in range(m):
        if not is_art[basis[i]]:
            continue
        found = -1
        for c in range(n + m):
            if status[c] != "B" and rows[i][c]:
                found = c
                break
        if found >= 0:
            status[basis[i]] = "L"
            pivot(i, found, val(found))
        # otherwise the row is redundant; the artificial stays at zero

    values = [None] * n
    for i in range(m):
        b = basis[i]
        if b < n:
            values[b] = beta[i]
    for j in range(n):
        if values[j] is None:
            values[j] = val(j)
    out = tuple(_to_fraction(v) for v in values)

    _check_feasible(lp, out)
    tight = _tight_set(lp, out)
    return ExtremePoint(values=out, tight_set=tight)


def _check_feasible(lp: RationalLP, values) -> None:
    for j, (a, b) in enumerate(lp.var_bounds):
        if not a <= values[j] <= b:
            raise RuntimeError(f"solver bug: variable {j} violates its bounds")
    for i, con in enumerate(lp.constraints):
        if not con.satisfied_by(values):
            raise RuntimeError(f"solver bug: constraint {i} violated exactly")


def _tight_set(lp: RationalLP, values) -> tuple[tuple[str, int], ...]:
    """Greedy linearly independent family of tight rows, size n_vars."""
    n = lp.n_vars
    pivots: dict[int, dict[int, Fraction]] = {}
    chosen: list[tuple[str, int]] = []

    def try_add(label: tuple[str, int], vec: dict[int, Fraction]) -> None:
        vec = dict(vec)
        while vec:
            lead = min(vec)
            prow = pivots.get(lead)
            if prow is None:
                f = vec[lead]
                pivots[lead] = {c: v / f for c, v in vec.items()}
                chosen.append(label)
                return
            f = vec[lead]
            for c, v in prow.items():
                nv = vec.get(c, Fraction(0)) - f * v
                if nv:
                    vec[c] = nv
                else:
                    vec.pop(c, None)

    for j in range(n):
        if len(chosen) == n:
            break
        a, b = lp.var_bounds[j]
        if values[j] == a:
            try_add(("lo", j), {j: Fraction(1)})
        elif values[j] == b:
            try_add(("hi", j), {j: Fraction(1)})
    for i, con in enumerate(lp.constraints):
        if len(chosen) == n:
            break
        if con.lhs_at(values) == con.rhs:
            try_add(("con", i), {j: c for j, c in con.coeffs.items() if c})
    if len(chosen) != n:
        raise RuntimeError("solver bug: solution is not a vertex (rank deficit)")
    return tuple(chosen)


# ---------------------------------------------------------------------------
# Iterated relaxation


DiscardRule = Callable[[ExtremePoint, RationalLP], "int | None"]


def fractional_support_rule(max_fractional: int) -> DiscardRule:
    """Rule: first live *tight* constraint with <= ``max_fractional``
    fractional variables (lowest index wins).  Returns None when no
    constraint qualifies, which the caller escalates."""

    def rule(ep: ExtremePoint, live: RationalLP):
        for idx, con in enumerate(live.constraints):
            if con.lhs_at(ep.values) != con.rhs:
                continue
            nfrac = sum(1 for j in con.coeffs if ep.values[j].denominator != 1)
            if nfrac <= max_fractional:
                return idx
        return None

    rule.max_fractional = max_fractional
    return rule


def iterated_relax(
    lp: RationalLP, discard_rule: DiscardRule
) -> tuple[list[int], list[RelaxationState]]:
    """Relax-and-round until every variable is fixed to 0 or 1.

    Each iteration solves an extreme point, permanently fixes variables
    with integral (0/1) values, and discards the constraint chosen by
    ``discard_rule``.  Raises :class:`StructureTheoremViolation` when
    fractional variables remain but no constraint qualifies; this is the
    runtime check of the counting lemmas and is never suppressed.
    """
    n = lp.n_vars
    bounds = list(lp.var_bounds)
    live = list(lp.constraints)
    fixed: dict[int, int] = {}
    discarded: list[Hashable] = []
    log: list[RelaxationState] = []

    for _round in range(len(lp.constraints) + n + 1):
        cur = RationalLP(n, list(bounds), list(live))
        ep = solve_extreme_point(cur)
        for j in range(n):
            if j not in fixed and ep.values[j] in (0, 1):
                fixed[j] = int(ep.values[j])
                bounds[j] = (ep.values[j], ep.values[j])
        if len(fixed) == n:
            log.append(
                RelaxationState(dict(fixed), tuple(discarded), cur)
            )
            return [fixed[j] for j in range(n)], log
        idx = discard_rule(ep, cur)
        if idx is None:
            raise StructureTheoremViolation(
                f"{n - len(fixed)} fractional variables remain but no tight "
                "constraint with small fractional support exists"
            )
        con = live.pop(idx)
        discarded.append(con.tag if con.tag is not None else idx)
        log.append(
            RelaxationState(
                dict(fixed), tuple(discarded), RationalLP(n, list(bounds), list(live))
            )
        )
    raise RuntimeError("iterated relaxation failed to terminate")


def format_relaxation_log(log) -> list[str]:
    # every entry except the last records exactly one new discard
    lines = []
    for k, state in enumerate(log):
        latest = None if k == len(log) - 1 else state.discarded[-1]
        lines.append(f"iter {k}: fixed={sorted(state.fixed)} discarded={latest}")
    return lines
