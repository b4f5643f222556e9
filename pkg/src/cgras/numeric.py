"""Numeric instantiation of entropy expressions on finite-alphabet tables.

A :class:`JointPmf` holds a dense probability table over the time-sharing
variable, the auxiliary codewords, the channel inputs and the channel
outputs.  Inputs are deterministic functions of the auxiliaries known at the
transmitter; the channel acts through a conditional table.  Everything here
is floating point with a 1e-9 comparison tolerance; exact arithmetic lives in
the polyhedral layer.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .entropy import EntropyExpr, VarRef, uref, yref
from .network import MessageId, Network
from .polyhedra import Region, Row
from .bounds import RateVar

TOL = 1e-9


class PmfError(ValueError):
    pass


@dataclass
class JointPmf:
    """Distribution over (Q, auxiliaries, inputs, outputs).

    ``aux_table`` is P(Q, U_1, ..., U_k) in the order of ``aux_order``;
    ``input_maps`` gives X_k as a deterministic function of (the auxiliaries
    encoded at k, Q); ``channel`` is P(Y_1..Y_m | X_1..X_n).
    """

    net: Network
    q_size: int
    aux_order: Tuple[MessageId, ...]
    aux_sizes: Tuple[int, ...]
    aux_table: np.ndarray                    # shape (q_size, *aux_sizes)
    input_sizes: Tuple[int, ...]
    input_maps: Tuple[Callable[..., int], ...]   # f_k(q, {msg: value}) -> symbol
    output_sizes: Tuple[int, ...]
    channel: np.ndarray                      # shape (*input_sizes, *output_sizes)
    _joint: Optional[np.ndarray] = field(default=None, repr=False)

    def validate(self) -> List[str]:
        """Hard errors raise; factorisation conformance issues are returned
        as warnings so exploratory tables remain usable."""
        warnings: List[str] = []
        if abs(float(self.aux_table.sum()) - 1.0) > 1e-12:
            raise PmfError("auxiliary table does not sum to one")
        if (self.aux_table < -1e-15).any():
            raise PmfError("negative probabilities in auxiliary table")
        ch = self.channel.reshape(int(np.prod(self.input_sizes)), -1)
        if not np.allclose(ch.sum(axis=1), 1.0, atol=1e-12):
            raise PmfError("channel rows do not sum to one")
        return warnings

    # -- full joint -----------------------------------------------------------

    def joint(self) -> np.ndarray:
        """P(Q, U..., X..., Y...) as a dense array."""
        if self._joint is not None:
            return self._joint
        q = self.q_size
        shape = (q, *self.aux_sizes, *self.input_sizes, *self.output_sizes)
        table = np.zeros(shape)
        n_in = len(self.input_sizes)
        for idx in itertools.product(range(q), *[range(s) for s in self.aux_sizes]):
            p = float(self.aux_table[idx])
            if p == 0.0:
                continue
            qv, aux_vals = idx[0], dict(zip(self.aux_order, idx[1:]))
            xs = tuple(self.input_maps[k](qv, aux_vals) for k in range(n_in))
            ch = self.channel[xs]
            table[idx + xs] += p * ch
        self._joint = table
        return table

    def _axis_of(self, ref: VarRef) -> int:
        if ref.kind == "u":
            return 1 + self.aux_order.index(ref.msg)
        return 1 + len(self.aux_order) + len(self.input_sizes) + (ref.decoder - 1)

    def entropy(self, block: Iterable[VarRef]) -> float:
        """H(block | Q) in bits, marginalising the full joint."""
        self.validate()
        block = list(block)
        axes = sorted({0, *[self._axis_of(v) for v in block]})
        joint = self.joint()
        drop = tuple(i for i in range(joint.ndim) if i not in axes)
        marg = joint.sum(axis=drop) if drop else joint
        with_q = _entropy_of(marg)
        q_marg = marg.reshape(marg.shape[0], -1).sum(axis=1)
        return with_q - _entropy_of(q_marg)

    def eval_expr(self, e: EntropyExpr) -> float:
        """Numeric value of a canonical expression (atoms given Q)."""
        total = 0.0
        for block, coeff in e.terms.items():
            total += float(coeff) * self.entropy(block)
        if abs(total) < TOL:
            return 0.0
        return total


def _entropy_of(p: np.ndarray) -> float:
    flat = p.reshape(-1)
    nz = flat[flat > 0]
    return float(-(nz * np.log2(nz)).sum())


# -- regions -------------------------------------------------------------------


@dataclass
class NumericRegion:
    variables: Tuple[RateVar, ...]
    rows: List[Tuple[Tuple[Tuple[RateVar, Fraction], ...], float]]

    def rhs_values(self) -> List[float]:
        return [rhs for _, rhs in self.rows]


def instantiate_region(r: Region, pmf: JointPmf) -> NumericRegion:
    """Replace every symbolic right-hand side by its value in bits."""
    rows = []
    for row in r.sorted_rows():
        rhs = row.rhs if isinstance(row.rhs, Fraction) else pmf.eval_expr(row.rhs)
        rows.append((row.coeffs, float(rhs)))
    return NumericRegion(r.variables, rows)


def enumerate_vertices(nr: NumericRegion, tol: float = TOL) -> List[Tuple[float, ...]]:
    """All vertices of the polytope {x >= 0, rows}, dimensions <= 3.

    Facets are the rows plus the coordinate planes; vertices are the feasible
    intersections of ``dim`` independent facets.
    """
    dim = len(nr.variables)
    if dim > 3:
        raise ValueError("vertex enumeration supports at most 3 dimensions")
    idx = {v: i for i, v in enumerate(nr.variables)}
    facets: List[Tuple[np.ndarray, float]] = []
    for coeffs, rhs in nr.rows:
        a = np.zeros(dim)
        for v, c in coeffs:
            a[idx[v]] = float(c)
        facets.append((a, rhs))
    for i in range(dim):
        a = np.zeros(dim)
        a[i] = -1.0
        facets.append((a, 0.0))

    # boundedness: every coordinate direction must be capped by some facet mix
    rows = [Row.of({v: c for v, c in coeffs}, _to_frac(rhs)) for coeffs, rhs in nr.rows]
    for v in nr.variables:
        if not _bounded_direction(rows, nr.variables, v):
            raise ValueError(f"region unbounded in direction {v}")

    verts = set()
    for combo in itertools.combinations(range(len(facets)), dim):
        a = np.array([facets[i][0] for i in combo])
        b = np.array([facets[i][1] for i in combo])
        if abs(np.linalg.det(a)) < 1e-12:
            continue
        x = np.linalg.solve(a, b)
        if (x < -tol).any():
            continue
        ok = all(float(av @ x) <= bv + 1e-7 for av, bv in facets)
        if ok:
            verts.add(tuple(round(float(c), 9) + 0.0 for c in x))
    return sorted(verts)


def _to_frac(x: float) -> Fraction:
    return Fraction(x).limit_denominator(10**9)


def _bounded_direction(rows: List[Row], variables, v) -> bool:
    from .polyhedra import simplex

    var_list = list(variables)
    i = var_list.index(v)
    c = [Fraction(0)] * len(var_list)
    c[i] = Fraction(1)
    a_ub, b_ub = [], []
    for r in rows:
        a = [Fraction(0)] * len(var_list)
        for u, cf in r.coeffs:
            a[var_list.index(u)] = cf
        a_ub.append(a)
        b_ub.append(r.rhs)
    status, _, _ = simplex(c, a_ub, b_ub)
    return status != "unbounded"


# -- file format -----------------------------------------------------------------


def load_pmf(path: str, net: Network) -> JointPmf:
    """Load a distribution file.

    JSON schema::

        {"q_size": 1,
         "auxiliaries": [{"msg": {"tx": [...], "rx": [...]}, "size": 2}, ...],
         "aux_probs": [ ... dense row-major over (q, u_1, ..., u_k) ... ],
         "inputs": [{"size": 2, "table": [ ... dense over (q, aux known at k) ... ]}],
         "outputs": [{"size": 3}],
         "channel": [ ... dense row-major over (x_1, ..., x_n, y_1, ..., y_m) ... ]}
    """
    import json

    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    q_size = int(doc.get("q_size", 1))
    order = []
    sizes = []
    for a in doc["auxiliaries"]:
        order.append(MessageId.of(a["msg"]["tx"], a["msg"]["rx"]))
        sizes.append(int(a["size"]))
    aux_order = tuple(order)
    aux_sizes = tuple(sizes)
    aux_table = np.array(doc["aux_probs"], dtype=float).reshape((q_size, *aux_sizes))

    input_sizes = tuple(int(i["size"]) for i in doc["inputs"])
    output_sizes = tuple(int(o["size"]) for o in doc["outputs"])

    input_maps = []
    for k, spec_in in enumerate(doc["inputs"]):
        known = [i for i, m in enumerate(aux_order) if (k + 1) in m.tx]
        shape = (q_size, *[aux_sizes[i] for i in known])
        table = np.array(spec_in["table"], dtype=int).reshape(shape)

        def make(table=table, known=tuple(known)):
            def f(q, aux_vals):
                key = (q, *[aux_vals[aux_order[i]] for i in known])
                return int(table[key])

            return f

        input_maps.append(make())

    channel = np.array(doc["channel"], dtype=float).reshape((*input_sizes, *output_sizes))
    pmf = JointPmf(
        net=net,
        q_size=q_size,
        aux_order=aux_order,
        aux_sizes=aux_sizes,
        aux_table=aux_table,
        input_sizes=input_sizes,
        input_maps=tuple(input_maps),
        output_sizes=output_sizes,
        channel=channel,
    )
    pmf.validate()
    return pmf


# -- convenience constructors ----------------------------------------------------


def tabular_pmf(
    net: Network,
    aux_sizes: Mapping[MessageId, int],
    aux_probs: Mapping[Tuple[int, ...], float],
    input_maps: Sequence[Callable[..., int]],
    input_sizes: Sequence[int],
    channel: Mapping[Tuple[Tuple[int, ...], Tuple[int, ...]], float],
    output_sizes: Sequence[int],
    q_size: int = 1,
) -> JointPmf:
    """Build a :class:`JointPmf` from sparse dictionaries.

    ``aux_probs`` maps (q, u_1, ..., u_k) to probability; ``channel`` maps
    ((x_1..), (y_1..)) to probability.
    """
    order = tuple(sorted(aux_sizes, key=MessageId.sort_key))
    sizes = tuple(aux_sizes[m] for m in order)
    table = np.zeros((q_size, *sizes))
    for key, p in aux_probs.items():
        table[key] = p
    ch = np.zeros((*input_sizes, *output_sizes))
    for (xs, ys), p in channel.items():
        ch[(*xs, *ys)] = p
    pmf = JointPmf(
        net=net,
        q_size=q_size,
        aux_order=order,
        aux_sizes=sizes,
        aux_table=table,
        input_sizes=tuple(input_sizes),
        input_maps=tuple(input_maps),
        output_sizes=tuple(output_sizes),
        channel=ch,
    )
    pmf.validate()
    return pmf
