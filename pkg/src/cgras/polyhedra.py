"""Exact-rational linear systems, Fourier-Motzkin projection and regions.

Rows are kept in the normal form ``sum c_v * v <= rhs`` where rhs is either
an :class:`~cgras.entropy.EntropyExpr` or a plain :class:`~fractions.Fraction`
(numeric systems).  All arithmetic is exact; floating point never enters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .bounds import (
    BINNING, CODEBOOK, MESSAGE, SPLIT,
    Inequality, Provenance, RateVar,
    binning_bounds_cl, binning_bounds_mcl,
    decoding_bounds_jd, decoding_bounds_sd, prune_non_error_bounds,
)
from .entropy import EntropyExpr, is_nonneg_combination
from .graph import OrientedCgras
from .network import MessageId, SplitMatrix

Rhs = Union[EntropyExpr, Fraction]


class PolyhedronError(ValueError):
    pass


def _rhs_add(a: Rhs, b: Rhs) -> Rhs:
    return a + b


def _rhs_scale(a: Rhs, s: Fraction) -> Rhs:
    return a * s


def _rhs_is_zero(a: Rhs) -> bool:
    if isinstance(a, Fraction):
        return a == 0
    return a.is_zero()


def _rhs_key(a: Rhs):
    if isinstance(a, Fraction):
        return ("num", a)
    return ("sym", tuple(sorted(((tuple(sorted(v.sort_key() for v in b)), c) for b, c in a.terms.items()))))


@dataclass(frozen=True)
class Row:
    """Normal form inequality: coeffs . x <= rhs."""

    coeffs: Tuple[Tuple[RateVar, Fraction], ...]
    rhs: Rhs
    provenance: Optional[Provenance] = None

    @staticmethod
    def of(coeffs: Dict[RateVar, Fraction], rhs: Rhs, provenance=None) -> "Row":
        items = tuple(sorted(((v, Fraction(c)) for v, c in coeffs.items() if c != 0),
                             key=lambda vc: vc[0].sort_key()))
        return Row(items, rhs, provenance)

    def coeff_dict(self) -> Dict[RateVar, Fraction]:
        return dict(self.coeffs)

    def coeff(self, v: RateVar) -> Fraction:
        return dict(self.coeffs).get(v, Fraction(0))

    def scaled(self, s: Fraction) -> "Row":
        if s <= 0:
            raise PolyhedronError("rows scale by positive rationals only")
        return Row.of({v: c * s for v, c in self.coeffs}, _rhs_scale(self.rhs, s), self.provenance)

    def plus(self, other: "Row") -> "Row":
        coeffs = dict(self.coeffs)
        for v, c in other.coeffs:
            coeffs[v] = coeffs.get(v, Fraction(0)) + c
        return Row.of(coeffs, _rhs_add(self.rhs, other.rhs), None)

    def normalized(self) -> "Row":
        if not self.coeffs:
            return self
        lead = abs(self.coeffs[0][1])
        return self.scaled(Fraction(1) / lead)

    def key(self):
        n = self.normalized()
        return (n.coeffs, _rhs_key(n.rhs))

    def __str__(self):
        lhs = " + ".join((f"{c}·{v}" if c != 1 else str(v)) for v, c in self.coeffs) or "0"
        from .entropy import render

        rhs = str(self.rhs) if isinstance(self.rhs, Fraction) else render(self.rhs)
        return f"{lhs} ≤ {rhs}"


def row_from_inequality(ineq: Inequality) -> Row:
    """Convert to <= normal form (>= rows are negated)."""
    sign = Fraction(1) if ineq.sense == "<=" else Fraction(-1)
    coeffs = {v: c * sign for v, c in ineq.lhs}
    return Row.of(coeffs, _rhs_scale(ineq.rhs, sign), ineq.provenance)


@dataclass
class LinearSystem:
    variables: Tuple[RateVar, ...]
    rows: List[Row] = field(default_factory=list)
    side_conditions: List[Rhs] = field(default_factory=list)
    infeasible: bool = False

    def used_variables(self) -> Set[RateVar]:
        out: Set[RateVar] = set()
        for r in self.rows:
            out |= {v for v, _ in r.coeffs}
        return out

    def copy(self) -> "LinearSystem":
        return LinearSystem(self.variables, list(self.rows),
                            list(self.side_conditions), self.infeasible)


def _absorb_trivial(sys: LinearSystem) -> None:
    """Move variable-free rows out of the system; ``0 <= e`` facts never
    constrain the remaining rates (negative numeric ones mark infeasibility)."""
    keep = []
    for r in sys.rows:
        if r.coeffs:
            keep.append(r)
        else:
            if isinstance(r.rhs, Fraction):
                if r.rhs < 0:
                    sys.infeasible = True
            elif not _rhs_is_zero(r.rhs):
                sys.side_conditions.append(r.rhs)
    sys.rows = keep


def fme_eliminate(sys: LinearSystem, var: RateVar) -> LinearSystem:
    """Project out one variable by pairing opposite-sign rows (exact)."""
    if var not in sys.variables:
        raise PolyhedronError(f"variable {var} not declared")
    pos, neg, free = [], [], []
    for r in sys.rows:
        c = r.coeff(var)
        if c > 0:
            pos.append(r.scaled(Fraction(1) / c))
        elif c < 0:
            neg.append(r.scaled(Fraction(-1) / c))
        else:
            free.append(r)
    out = LinearSystem(
        tuple(v for v in sys.variables if v != var),
        list(free),
        list(sys.side_conditions),
        sys.infeasible,
    )
    for p in pos:
        for n in neg:
            combined = p.plus(n)  # var cancels: +1 and -1 after scaling
            coeffs = {v: c for v, c in combined.coeffs if v != var}
            out.rows.append(Row.of(coeffs, combined.rhs))
    _absorb_trivial(out)
    out.rows = _dedup(out.rows)
    return out


def _dedup(rows: Sequence[Row]) -> List[Row]:
    seen = {}
    for r in rows:
        seen.setdefault(r.key(), r)
    return list(seen.values())


def _dominates(strong: Row, weak: Row) -> bool:
    """Does ``strong`` (alone, plus rate-nonnegativity) prove ``weak``?

    Search positive scalings lambda with lambda*strong >= weak coefficient-wise
    and weak.rhs - lambda*strong.rhs a recognisable non-negative combination.
    """
    if isinstance(strong.rhs, Fraction) != isinstance(weak.rhs, Fraction):
        return False
    sc, wc = strong.coeff_dict(), weak.coeff_dict()
    if not sc or not wc:
        return False
    candidates = set()
    for v, c in wc.items():
        s = sc.get(v, Fraction(0))
        if c != 0:
            if s == 0 or (c > 0) != (s > 0):
                return False  # cannot build this coefficient by dropping vars
            candidates.add(c / s)
    for lam in sorted(candidates):
        if lam <= 0:
            continue
        ok = True
        for v, s in sc.items():
            if lam * s < wc.get(v, Fraction(0)):
                ok = False
                break
        if not ok:
            continue
        if any(lam * sc.get(v, Fraction(0)) < c for v, c in wc.items()):
            continue
        if isinstance(weak.rhs, Fraction):
            if lam * strong.rhs <= weak.rhs:
                return True
        else:
            diff = weak.rhs - strong.rhs * lam
            if diff.is_zero() or is_nonneg_combination(diff):
                return True
    return False


def remove_redundant(sys: LinearSystem, numeric: bool = False) -> LinearSystem:
    """Drop duplicates, positive multiples, and rows provable from a single
    other row plus rate-nonnegativity (right-hand side slack a recognisable
    non-negative entropy combination).  For numeric systems an exact LP
    certifies general redundancy."""
    rows = _dedup(sys.rows)
    rows.sort(key=lambda r: (len(r.coeffs), tuple(v.sort_key() for v, _ in r.coeffs)))
    keep: List[Row] = []
    for r in rows:
        if any(_dominates(k, r) for k in keep):
            continue
        keep = [k for k in keep if not _dominates(r, k)]
        keep.append(r)
    rows = keep
    if numeric:
        rows = _lp_remove_redundant(rows)
    out = sys.copy()
    out.rows = rows
    return out


# -- exact simplex ------------------------------------------------------------


def simplex(c, a_ub, b_ub, a_eq=(), b_eq=()):
    """Maximise c.x subject to a_ub x <= b_ub, a_eq x = b_eq, x >= 0.

    Exact two-phase simplex with Bland's rule; returns (status, value, x)
    with status one of "optimal", "unbounded", "infeasible".
    """
    n = len(c)
    rows = []
    rhs = []
    art_rows = []
    for coeffs, b in zip(a_ub, b_ub):
        coeffs = list(coeffs) + [Fraction(0)] * (n - len(coeffs))
        if b < 0:
            coeffs = [-x for x in coeffs]
            b = -b
            rows.append((coeffs, b, "surplus"))
        else:
            rows.append((coeffs, b, "slack"))
    for coeffs, b in zip(a_eq, b_eq):
        coeffs = list(coeffs) + [Fraction(0)] * (n - len(coeffs))
        if b < 0:
            coeffs = [-x for x in coeffs]
            b = -b
        rows.append((coeffs, b, "eq"))

    m = len(rows)
    slack_count = sum(1 for _, _, k in rows if k == "slack")
    surplus_count = sum(1 for _, _, k in rows if k == "surplus")
    total = n + slack_count + surplus_count + m  # artificials for every row
    tableau = []
    basis = []
    si = 0
    ui = 0
    for i, (coeffs, b, kind) in enumerate(rows):
        row = [Fraction(x) for x in coeffs] + [Fraction(0)] * (total - n)
        if kind == "slack":
            row[n + si] = Fraction(1)
            si += 1
        elif kind == "surplus":
            row[n + slack_count + ui] = Fraction(-1)
            ui += 1
        row[n + slack_count + surplus_count + i] = Fraction(1)
        tableau.append(row + [Fraction(b)])
        basis.append(n + slack_count + surplus_count + i)

    def pivot(t, bs, obj, allowed):
        while True:
            col = None
            for j in allowed:
                if obj[j] > 0:
                    col = j
                    break
            if col is None:
                return "optimal"
            ratios = []
            for i, row in enumerate(t):
                if row[col] > 0:
                    ratios.append((row[-1] / row[col], bs[i], i))
            if not ratios:
                return "unbounded"
            _, _, pr = min(ratios, key=lambda x: (x[0], x[1]))
            pv = t[pr][col]
            t[pr] = [x / pv for x in t[pr]]
            for i in range(len(t)):
                if i != pr and t[i][col] != 0:
                    f = t[i][col]
                    t[i] = [x - f * y for x, y in zip(t[i], t[pr])]
            f = obj[col]
            for j in range(len(obj)):
                obj[j] -= f * t[pr][j]
            bs[pr] = col

    # phase 1: drive artificials to zero
    art_lo = n + slack_count + surplus_count
    obj1 = [Fraction(0)] * (total + 1)
    for j in range(art_lo, total):
        obj1[j] = Fraction(-1)
    for i, b in enumerate(basis):
        if b >= art_lo:
            obj1 = [o + t for o, t in zip(obj1, tableau[i])]
    allowed = list(range(art_lo))
    pivot(tableau, basis, obj1, allowed)
    if obj1[-1] != 0:
        return "infeasible", None, None
    # drop artificial columns (pivot out any still basic with zero value)
    for i, b in enumerate(basis):
        if b >= art_lo:
            for j in range(art_lo):
                if tableau[i][j] != 0:
                    pv = tableau[i][j]
                    tableau[i] = [x / pv for x in tableau[i]]
                    for k in range(len(tableau)):
                        if k != i and tableau[k][j] != 0:
                            f = tableau[k][j]
                            tableau[k] = [x - f * y for x, y in zip(tableau[k], tableau[i])]
                    basis[i] = j
                    break

    # phase 2
    obj2 = [Fraction(0)] * (total + 1)
    for j in range(n):
        obj2[j] = Fraction(c[j])
    for i, b in enumerate(basis):
        if b < art_lo and obj2[b] != 0:
            f = obj2[b]
            obj2 = [o - f * t for o, t in zip(obj2, tableau[i])]
            obj2[b] = Fraction(0)
    status = pivot(tableau, basis, obj2, allowed)
    x = [Fraction(0)] * total
    for i, b in enumerate(basis):
        if b < total:
            x[b] = tableau[i][-1]
    if status == "unbounded":
        return "unbounded", None, x[:n]
    value = sum(Fraction(c[j]) * x[j] for j in range(n))
    return "optimal", value, x[:n]


def _lp_remove_redundant(rows: List[Row]) -> List[Row]:
    """Exact-LP redundancy for numeric systems: a row is dropped when its
    left side cannot exceed its bound under the remaining rows (with x >= 0)."""
    keep = list(rows)
    changed = True
    while changed:
        changed = False
        for i, r in enumerate(keep):
            others = keep[:i] + keep[i + 1:]
            variables = sorted({v for row in keep for v, _ in row.coeffs},
                               key=RateVar.sort_key)
            idx = {v: k for k, v in enumerate(variables)}
            c = [Fraction(0)] * len(variables)
            for v, cf in r.coeffs:
                c[idx[v]] = cf
            a_ub = []
            b_ub = []
            for row in others:
                a = [Fraction(0)] * len(variables)
                for v, cf in row.coeffs:
                    a[idx[v]] = cf
                a_ub.append(a)
                b_ub.append(row.rhs)
            status, value, _ = simplex(c, a_ub, b_ub)
            if status == "optimal" and value <= r.rhs:
                keep.pop(i)
                changed = True
                break
    return keep


def feasible(rows: Sequence[Row], variables: Sequence[RateVar]) -> bool:
    """Exact feasibility of a numeric system with x >= 0."""
    idx = {v: k for k, v in enumerate(variables)}
    a_ub, b_ub = [], []
    for row in rows:
        a = [Fraction(0)] * len(variables)
        for v, cf in row.coeffs:
            a[idx[v]] = cf
        a_ub.append(a)
        b_ub.append(row.rhs)
    status, _, _ = simplex([Fraction(0)] * len(variables), a_ub, b_ub)
    return status == "optimal"


# -- scheme-aware atom canonicalisation ----------------------------------------


def scheme_canonical(og: OrientedCgras, expr: EntropyExpr) -> EntropyExpr:
    """Rewrite entropy atoms using the scheme's own factorisation.

    Every admissible distribution factors as the product of the per-codeword
    encoding conditionals, so a joint-entropy block that contains all the
    encoding parents of its members splits exactly into those conditionals.
    The rewrite is an identity on the scheme class and yields a canonical
    atom basis in which projection by-products cancel.
    """
    from .entropy import VarRef, uref

    parents = {
        v: frozenset(og.base.spc_ancestors(v) | og.binp_parents(v))
        for v in og.vertices
    }
    order = {v: i for i, v in enumerate(og.order())}
    cache: Dict[frozenset, EntropyExpr] = {}

    def rewrite_atom(block: frozenset) -> EntropyExpr:
        if block in cache:
            return cache[block]
        cache[block] = EntropyExpr({block: Fraction(1)})  # guard against cycles
        msgs = {r.msg for r in block if r.kind == "u"}
        if any(r.kind != "u" for r in block) or len(msgs) < 2:
            return cache[block]
        if not all(parents[m] <= msgs for m in msgs):
            return cache[block]
        total = EntropyExpr.zero()
        for m in sorted(msgs, key=lambda v: order[v]):
            hi = frozenset({uref(m)} | {uref(p) for p in parents[m]})
            lo = frozenset(uref(p) for p in parents[m])
            total = total + rewrite_atom_expr(hi) - rewrite_atom_expr(lo)
        if total.terms != {block: Fraction(1)}:
            cache[block] = total
        return cache[block]

    def rewrite_atom_expr(block: frozenset) -> EntropyExpr:
        if not block:
            return EntropyExpr.zero()
        out = rewrite_atom(block)
        if out.terms == {block: Fraction(1)}:
            return out
        # recurse on produced atoms
        acc = EntropyExpr.zero()
        for b, c in out.terms.items():
            if b == block:
                acc = acc + EntropyExpr({b: c})
            else:
                acc = acc + rewrite_atom_expr(b) * c
        return acc

    out = EntropyExpr.zero()
    for block, coeff in expr.terms.items():
        out = out + rewrite_atom_expr(block) * coeff
    return out


# -- regions ------------------------------------------------------------------


@dataclass
class Region:
    """Linear system over original message-rate variables only."""

    variables: Tuple[RateVar, ...]
    rows: List[Row]
    side_conditions: List[Rhs] = field(default_factory=list)

    def sorted_rows(self) -> List[Row]:
        def key(r: Row):
            heads = tuple(v.sort_key() for v, _ in r.coeffs)
            return (len(r.coeffs), heads, _rhs_key(r.rhs))

        return sorted(self.rows, key=key)


def _conic_exact(target: Row, rows: List[Row], variables: Sequence[RateVar]) -> bool:
    """Is target derivable as a non-negative combination of rows plus
    variable-nonnegativity, with exactly matching right-hand side atoms?"""
    if isinstance(target.rhs, Fraction):
        return False
    rows = [r for r in rows if not isinstance(r.rhs, Fraction)]
    atoms: Set = set()
    for r in rows + [target]:
        atoms |= set(r.rhs.terms)
    atoms = sorted(atoms, key=lambda b: (len(b), tuple(sorted(v.sort_key() for v in b))))
    nl = len(rows)
    var_list = list(variables)
    nm = len(var_list)
    # unknowns: lambda_i (nl), mu_v (nm)
    a_eq, b_eq = [], []
    for v in var_list:
        coeffs = [r.coeff(v) for r in rows] + [
            Fraction(-1) if u == v else Fraction(0) for u in var_list
        ]
        a_eq.append(coeffs)
        b_eq.append(target.coeff(v))
    for atom in atoms:
        coeffs = [r.rhs.terms.get(atom, Fraction(0)) for r in rows] + [Fraction(0)] * nm
        a_eq.append(coeffs)
        b_eq.append(target.rhs.terms.get(atom, Fraction(0)))
    status, _, _ = simplex([Fraction(0)] * (nl + nm), [], [], a_eq, b_eq)
    return status == "optimal"


def _solve_exact(matrix: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    """Solve a (possibly overdetermined) exact linear system; None if inconsistent."""
    m = [row[:] + [b] for row, b in zip(matrix, rhs)]
    ncols = len(matrix[0]) if matrix else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    for i in range(r, len(m)):
        if m[i][-1] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = m[i][-1]
    return sol


def _single_combo(target: Row, rows: List[Row], max_rows: int = 3) -> bool:
    """Search small conic combinations whose slack against the target is a
    recognisable non-negative entropy combination."""
    if isinstance(target.rhs, Fraction):
        return False
    support = [v for v, _ in target.coeffs]
    candidates = [r for r in rows if not isinstance(r.rhs, Fraction)]
    for k in range(1, max_rows + 1):
        for combo in itertools.combinations(candidates, k):
            matrix = [[r.coeff(v) for r in combo] for v in support]
            rhs = [target.coeff(v) for v in support]
            lam = _solve_exact(matrix, rhs)
            if lam is None or any(l < 0 for l in lam):
                continue
            if all(l == 0 for l in lam):
                continue
            # dropped variables must have non-negative surplus
            combined: Dict[RateVar, Fraction] = {}
            rhs_expr = EntropyExpr.zero()
            for l, r in zip(lam, combo):
                if l == 0:
                    continue
                for v, c in r.coeffs:
                    combined[v] = combined.get(v, Fraction(0)) + l * c
                rhs_expr = rhs_expr + r.rhs * l
            ok = all(combined.get(v, Fraction(0)) == target.coeff(v) for v in support)
            ok = ok and all(
                c >= 0 for v, c in combined.items() if v not in support
            )
            if not ok:
                continue
            slack = target.rhs - rhs_expr
            if slack.is_zero() or is_nonneg_combination(slack):
                return True
    return False


def _implied_by(target: Row, rows: List[Row]) -> bool:
    t = target.normalized()
    if any(t.key() == r.key() for r in rows):
        return True
    return _conic_exact(t, rows, sorted({v for r in rows + [target] for v, _ in r.coeffs},
                                        key=RateVar.sort_key)) or _single_combo(t, rows)


def minimize_region(region: Region) -> Region:
    """Drop every row that follows from the remaining ones (conic combination
    with recognisable non-negative entropy slack) and all plain
    nonnegativity rows, which are implicit."""
    rows = [r for r in _dedup([r.normalized() for r in region.rows])
            if not (len(r.coeffs) == 1 and r.coeffs[0][1] < 0 and _rhs_is_zero(r.rhs))]
    # cheap single-row dominance sweep first
    pruned: List[Row] = []
    for r in sorted(rows, key=lambda r: (len(r.coeffs), tuple(v.sort_key() for v, _ in r.coeffs))):
        if any(_dominates(k, r) for k in pruned):
            continue
        pruned = [k for k in pruned if not _dominates(r, k)]
        pruned.append(r)
    rows = pruned
    changed = True
    while changed:
        changed = False
        rows_sorted = sorted(
            rows,
            key=lambda r: (-len(r.coeffs), tuple(v.sort_key() for v, _ in r.coeffs)),
        )
        for r in rows_sorted:
            others = [x for x in rows if x is not r]
            if others and _implied_by(r, others):
                rows = others
                changed = True
                break
    return Region(region.variables, rows, list(region.side_conditions))


def region_implies(a: Region, b: Region) -> bool:
    """True when every inequality of ``b`` follows from ``a`` as an exact
    non-negative rational combination (plus rate-nonnegativity), allowing a
    slack that is a recognisable non-negative entropy combination.

    Syntactic-level implication: entropy atoms are opaque symbols and only
    plainly recognisable conditional-information slacks are accepted.
    """
    if set(a.variables) != set(b.variables):
        raise PolyhedronError("regions over different rate variables")
    arows = _dedup([r.normalized() for r in a.rows])
    keys = {r.key() for r in arows}
    for target in b.rows:
        t = target.normalized()
        if t.key() in keys:
            continue
        if _conic_exact(t, arows, a.variables):
            continue
        if _single_combo(t, arows):
            continue
        return False
    return True


def regions_equivalent(a: Region, b: Region) -> bool:
    return region_implies(a, b) and region_implies(b, a)


# -- assembly pipeline ---------------------------------------------------------


def _elimination_order(sys: LinearSystem, vars_to_go: List[RateVar]) -> List[RateVar]:
    """Greedy: repeatedly eliminate the variable touching fewest rows."""
    order = []
    remaining = list(vars_to_go)
    while remaining:
        counts = []
        for v in remaining:
            pos = sum(1 for r in sys.rows if r.coeff(v) > 0)
            neg = sum(1 for r in sys.rows if r.coeff(v) < 0)
            counts.append((pos * neg, pos + neg, v.sort_key(), v))
        counts.sort()
        order.append(counts[0][3])
        remaining.remove(counts[0][3])
    return order


def assemble_region(
    og: OrientedCgras,
    split: SplitMatrix,
    encoder_mode: str = "cl",
    decoder_mode: str = "jd",
    prune: bool = False,
) -> Region:
    """Full pipeline: collect binning and decoding bounds, substitute the
    codebook rates, project out binning and split rates, and return the
    region over original message rates."""
    g = og.base
    binned = g.binned_vertices()

    if encoder_mode == "cl":
        enc = binning_bounds_cl(og)
    elif encoder_mode == "mcl":
        enc = binning_bounds_mcl(og)
    else:
        raise PolyhedronError(f"unknown encoder mode {encoder_mode!r}")

    dec: List[Inequality] = []
    for z in g.net.decoders():
        if decoder_mode == "sd":
            bz = decoding_bounds_sd(og, z)
        elif decoder_mode == "jd":
            bz = decoding_bounds_jd(og, z)
        else:
            raise PolyhedronError(f"unknown decoder mode {decoder_mode!r}")
        if prune:
            bz = prune_non_error_bounds(bz, g.net, z)
        dec.extend(bz)

    # substitute L_v = R'_v + Rbar_v and set up working variables;
    # right-hand sides move to the scheme-canonical atom basis so projection
    # by-products cancel exactly
    rows: List[Row] = []
    for ineq in enc:
        row = row_from_inequality(ineq)
        rows.append(Row(row.coeffs, scheme_canonical(og, row.rhs), row.provenance))
    for ineq in dec:
        coeffs: Dict[RateVar, Fraction] = {}
        for v, c in ineq.lhs:
            assert v.kind == CODEBOOK
            coeffs[RateVar(SPLIT, v.msg)] = coeffs.get(RateVar(SPLIT, v.msg), Fraction(0)) + c
            if v.msg in binned:
                coeffs[RateVar(BINNING, v.msg)] = coeffs.get(RateVar(BINNING, v.msg), Fraction(0)) + c
        row = row_from_inequality(Inequality.of(coeffs, ineq.sense, ineq.rhs, ineq.provenance))
        rows.append(Row(row.coeffs, scheme_canonical(og, row.rhs), row.provenance))

    rbar_vars = [RateVar(BINNING, v) for v in sorted(binned, key=MessageId.sort_key)]
    split_vars = [RateVar(SPLIT, v) for v in g.sorted_vertices()]
    for v in rbar_vars:
        rows.append(Row.of({v: Fraction(-1)}, EntropyExpr.zero()))  # Rbar >= 0
    for v in split_vars:
        rows.append(Row.of({v: Fraction(-1)}, EntropyExpr.zero()))  # R' >= 0

    # rate-splitting: portion variables t[(original, split)] >= 0 with
    #   R'_s = sum_m t[m, s]      and      R_m = sum_s t[m, s]
    # (the achievable region is the union over the admissible splitting
    # proportions, i.e. the projection of this extended system)
    pairs = sorted(split.gamma.keys(), key=lambda os: (os[0].sort_key(), os[1].sort_key()))
    portion: Dict[Tuple[MessageId, MessageId], RateVar] = {}
    for o, s in pairs:
        portion[(o, s)] = RateVar("t:" + str(o), s)

    split_ids = set(split.split_messages())
    for v in g.sorted_vertices():
        if v not in split_ids:
            raise PolyhedronError(f"vertex {v} missing from the split matrix")

    # replace R'_s by sum of portions in every row
    def substitute(row: Row) -> Row:
        coeffs: Dict[RateVar, Fraction] = {}
        for v, c in row.coeffs:
            if v.kind == SPLIT:
                for o in split.originals_of(v.msg):
                    pv = portion[(o, v.msg)]
                    coeffs[pv] = coeffs.get(pv, Fraction(0)) + c
            else:
                coeffs[v] = coeffs.get(v, Fraction(0)) + c
        return Row.of(coeffs, row.rhs, row.provenance)

    rows = [substitute(r) for r in rows]

    for pv in portion.values():
        rows.append(Row.of({pv: Fraction(-1)}, EntropyExpr.zero()))  # t >= 0

    msg_vars = [RateVar(MESSAGE, m) for m in split.originals()]
    for o in split.originals():
        lhs = {portion[(o, s)]: Fraction(1) for s in split.splits_of(o)}
        lhs[RateVar(MESSAGE, o)] = Fraction(-1)
        rows.append(Row.of(dict(lhs), EntropyExpr.zero()))           # sum t <= R_m
        rows.append(Row.of({v: -c for v, c in lhs.items()}, EntropyExpr.zero()))  # sum t >= R_m

    all_vars = tuple(msg_vars) + tuple(sorted(set(portion.values()), key=lambda v: str(v))) + tuple(rbar_vars)
    sys = LinearSystem(all_vars, rows)
    _absorb_trivial(sys)
    sys = remove_redundant(sys)

    for v in _elimination_order(sys, list(rbar_vars)):
        sys = fme_eliminate(sys, v)
        sys = remove_redundant(sys)
    t_list = sorted(set(portion.values()), key=lambda v: str(v))
    for v in _elimination_order(sys, t_list):
        sys = fme_eliminate(sys, v)
        sys = remove_redundant(sys)

    leftover = sys.used_variables() - set(msg_vars)
    if leftover:
        raise PolyhedronError(f"auxiliary rates survived elimination: {leftover}")
    return minimize_region(Region(tuple(msg_vars), sys.rows, sys.side_conditions))
