"""Rate inequalities for encoding (covering) and decoding (packing) events.

Error events are subsets of the binned / decoded codewords, closed under the
failure-propagation relation: a wrong codeword drags along everything
superposed on it, everything binned against it and, at decoding, its joint
binning partners.  Each admissible subset yields one inequality; degenerate
rows (zero right-hand side on an empty information gain) are emitted but
flagged so event tables stay complete.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .entropy import EntropyExpr, mutual_info, uref, yref
from .graph import Cgras, OrientedCgras, oriented_subgraph
from .network import MessageId, Network

# rate variable kinds
BINNING = "Rbar"   # excess (bin) rate
CODEBOOK = "L"     # codebook rate
SPLIT = "Rp"       # split-message rate
MESSAGE = "R"      # original message rate


@dataclass(frozen=True, order=True)
class RateVar:
    kind: str
    msg: MessageId

    def __str__(self):
        tag = {BINNING: "Rb", CODEBOOK: "L", SPLIT: "R'", MESSAGE: "R"}.get(
            self.kind, self.kind
        )
        return f"{tag}_{{{self.msg}}}"

    def sort_key(self):
        order = {MESSAGE: 0, SPLIT: 1, CODEBOOK: 2, BINNING: 3}
        return (order.get(self.kind, 4), self.kind, *self.msg.sort_key())


@dataclass(frozen=True)
class Provenance:
    theorem: str                      # "cl" | "mcl" | "sd" | "jd"
    subset: FrozenSet[MessageId]
    decoder: Optional[int] = None
    roots: FrozenSet[MessageId] = frozenset()

    def label(self) -> str:
        names = ",".join(str(m) for m in sorted(self.subset, key=MessageId.sort_key))
        dec = f"@{self.decoder}" if self.decoder else ""
        return f"{self.theorem}{dec}[{names}]"


@dataclass(frozen=True)
class Inequality:
    """lhs (rate combination) `sense` rhs (entropy expression)."""

    lhs: Tuple[Tuple[RateVar, Fraction], ...]
    sense: str  # ">=" or "<="
    rhs: EntropyExpr
    provenance: Optional[Provenance] = None

    @staticmethod
    def of(lhs: Dict[RateVar, Fraction], sense: str, rhs: EntropyExpr,
           provenance: Optional[Provenance] = None) -> "Inequality":
        items = tuple(sorted(((v, Fraction(c)) for v, c in lhs.items() if c != 0),
                             key=lambda vc: vc[0].sort_key()))
        return Inequality(items, sense, rhs, provenance)

    @property
    def degenerate(self) -> bool:
        return not self.lhs or self.rhs.is_zero()

    def lhs_dict(self) -> Dict[RateVar, Fraction]:
        return dict(self.lhs)

    def __str__(self):
        from .entropy import render

        lhs = " + ".join(
            (f"{c}·{v}" if c != 1 else str(v)) for v, c in self.lhs
        ) or "0"
        return f"{lhs} {self.sense} {render(self.rhs)}"


@dataclass(frozen=True)
class ErrorFamily:
    """Base index set together with its admissible error subsets."""

    base: FrozenSet[MessageId]
    admissible: Tuple[FrozenSet[MessageId], ...]


# -- failure propagation ------------------------------------------------------


def _propagate(g: Cgras, seed: Set[MessageId], mutual_drags: bool) -> FrozenSet[MessageId]:
    """Close ``seed`` under wrongness-propagation over the whole vertex set:
    a wrong codeword corrupts its superposition descendants and everything
    binned against it (at decoding also its joint-binning partners)."""
    wrong = set(seed)
    stack = list(seed)
    while stack:
        v = stack.pop()
        nxt = set(g.spc_children(v))
        if mutual_drags:
            nxt |= g.bin_children(v)
        else:
            nxt |= g.one_way_bin_children(v)
        for u in nxt:
            if u not in wrong:
                wrong.add(u)
                stack.append(u)
    return frozenset(wrong)


def _admissible_subsets(g: Cgras, base: FrozenSet[MessageId], mutual_drags: bool):
    """Non-empty subsets of ``base`` consistent with failure propagation."""
    import itertools

    members = sorted(base, key=MessageId.sort_key)
    seen = []
    for r in range(1, len(members) + 1):
        for combo in itertools.combinations(members, r):
            s = frozenset(combo)
            if _propagate(g, set(s), mutual_drags) & base == s:
                seen.append(s)
    return tuple(sorted(seen, key=lambda s: (len(s), tuple(m.sort_key() for m in sorted(s, key=MessageId.sort_key)))))


def enumerate_encoding_sets(og: OrientedCgras) -> ErrorFamily:
    g = og.base
    base = g.binned_vertices()
    return ErrorFamily(base=base, admissible=_admissible_subsets(g, base, mutual_drags=False))


def enumerate_decoding_sets(og: OrientedCgras, z: int) -> ErrorFamily:
    sub = oriented_subgraph(og, z)
    base = sub.base.vertices
    return ErrorFamily(base=base,
                       admissible=_admissible_subsets(sub.base, base, mutual_drags=True))


# -- excess-typicality cost engine --------------------------------------------


def _component_of(g: Cgras) -> Dict[MessageId, int]:
    comp_id = {}
    for i, comp in enumerate(g.components()):
        for v in comp:
            comp_id[v] = i
    return comp_id


def divergence_terms(
    og: OrientedCgras,
    fresh: Iterable[MessageId],
    in_error: FrozenSet[MessageId],
) -> List[Tuple[MessageId, FrozenSet[MessageId], EntropyExpr]]:
    """Excess-typicality cost of drawing the ``fresh`` codewords from their
    codebooks while faking the scheme's encoding joint, given that everything
    outside ``in_error`` behaves as encoded.

    Joint-binning partners outside the error set already track the realised
    codeword (their own bin index was tuned to it), so they drop out of the
    faking requirement.  Within each connected component the per-codeword
    terms chain over the component context, so the component sum equals the
    exact joint divergence of the fresh tuple against the product of its
    codebook conditionals; independent components never mix.

    Returns (vertex, faking arguments, cost expression) triples.
    """
    g = og.base
    comp = _component_of(g)
    fresh_set = set(fresh)
    order = [v for v in og.order() if v in fresh_set]
    terms: List[Tuple[MessageId, FrozenSet[MessageId], EntropyExpr]] = []
    for cid in sorted({comp[v] for v in order}):
        members = [v for v in order if comp[v] == cid]
        context: Set[MessageId] = set()
        for u in members:
            rescued = g.mutual_partners(u) - in_error
            context |= g.spc_ancestors(u) | (set(og.binp_parents(u)) - rescued)
        context -= set(members)
        earlier: Set[MessageId] = set()
        for v in members:
            anc = g.spc_ancestors(v)
            args = (context | earlier) - anc - {v}
            expr = mutual_info(
                {uref(v)}, {uref(a) for a in args}, {uref(c) for c in anc}
            )
            terms.append((v, frozenset(args), expr))
            earlier.add(v)
    return terms


def codebook_vs_encoding_divergence(
    og: OrientedCgras,
) -> List[Tuple[MessageId, FrozenSet[MessageId], EntropyExpr]]:
    """Term-by-term divergence between codebook generation and the encoding
    joint (the total over all binned codewords)."""
    binned = og.base.binned_vertices()
    return divergence_terms(og, binned, in_error=binned)


# -- encoding bounds -----------------------------------------------------------


def _encoding_roots(g: Cgras, s: FrozenSet[MessageId]) -> FrozenSet[MessageId]:
    """Members of the error set whose failure is not induced by another member."""
    return frozenset(v for v in s if not (g.spc_ancestors(v) & s))


def binning_bounds_cl(og: OrientedCgras) -> List[Inequality]:
    """Covering-lemma bounds: for every admissible error subset the root
    binning rates must exceed the cost of faking the encoding joint."""
    g = og.base
    out = []
    for s in enumerate_encoding_sets(og).admissible:
        roots = _encoding_roots(g, s)
        rhs = EntropyExpr.zero()
        for _, _, expr in divergence_terms(og, roots, in_error=s):
            rhs = rhs + expr
        lhs = {RateVar(BINNING, v): Fraction(1) for v in roots}
        out.append(Inequality.of(lhs, ">=", rhs,
                                 Provenance("cl", s, roots=roots)))
    return out


def binning_bounds_mcl(og: OrientedCgras) -> List[Inequality]:
    """Mutual-covering bounds: per admissible subset S (including the empty
    one), the rates of the complement must cover whatever part of the global
    codebook-vs-encoding divergence the subset cannot account for."""
    g = og.base
    binned = g.binned_vertices()
    if not binned:
        return []
    total = codebook_vs_encoding_divergence(og)
    subsets = (frozenset(),) + enumerate_encoding_sets(og).admissible
    out = []
    for s in subsets:
        covered = {v for v, args, _ in total if v in s or (args & s)}
        rhs = EntropyExpr.zero()
        for v, _, expr in total:
            if v not in covered:
                rhs = rhs + expr
        lhs = {RateVar(BINNING, v): Fraction(1) for v in binned - s}
        out.append(Inequality.of(lhs, ">=", rhs, Provenance("mcl", s)))
    return out


# -- decoding bounds -----------------------------------------------------------


def _decoding_roots(sub: Cgras, s: FrozenSet[MessageId]) -> FrozenSet[MessageId]:
    """Error-set members that fail on their own: no superposition base and no
    one-way binning target inside the set (joint partners fail together)."""
    out = set()
    for v in s:
        if sub.spc_ancestors(v) & s:
            continue
        if sub.one_way_bin_targets(v) & s:
            continue
        out.add(v)
    return frozenset(out)


def _bonus(og_sub: OrientedCgras, fresh: Iterable[MessageId], s: FrozenSet[MessageId]) -> EntropyExpr:
    """Extra packing exponent from binning: wrongly decoded codewords must
    also look typical the way the encoder made them."""
    binned_here = og_sub.base.binned_vertices()
    rhs = EntropyExpr.zero()
    for _, _, expr in divergence_terms(og_sub, [v for v in fresh if v in binned_here], in_error=s):
        rhs = rhs + expr
    return rhs


def decoding_bounds_sd(og: OrientedCgras, z: int) -> List[Inequality]:
    """Sequential decoding: each event bounds the codebook rates of its roots
    by the channel information given everything decoded earlier."""
    sub = oriented_subgraph(og, z)
    order = sub.order()
    pos = {v: i for i, v in enumerate(order)}
    out = []
    for s in enumerate_decoding_sets(og, z).admissible:
        roots = _decoding_roots(sub.base, s)
        if not roots:
            continue
        first = min(pos[v] for v in roots)
        known = {v for v in sub.base.vertices - s if pos[v] < first}
        channel = mutual_info(
            {yref(z)}, {uref(v) for v in roots}, {uref(u) for u in known}
        )
        rhs = channel + _bonus(sub, sorted(roots, key=lambda v: pos[v]), s)
        lhs = {RateVar(CODEBOOK, v): Fraction(1) for v in roots}
        out.append(Inequality.of(lhs, "<=", rhs, Provenance("sd", s, z, roots)))
    return out


def decoding_bounds_jd(og: OrientedCgras, z: int) -> List[Inequality]:
    """Joint decoding: every admissible event bounds the summed codebook
    rates of the whole subset by the channel information given the correctly
    decoded codewords, plus the binning bonus."""
    sub = oriented_subgraph(og, z)
    pos = {v: i for i, v in enumerate(sub.order())}
    out = []
    for s in enumerate_decoding_sets(og, z).admissible:
        known = sub.base.vertices - s
        channel = mutual_info(
            {yref(z)}, {uref(v) for v in s}, {uref(u) for u in known}
        )
        rhs = channel + _bonus(sub, sorted(s, key=lambda v: pos[v]), s)
        lhs = {RateVar(CODEBOOK, v): Fraction(1) for v in s}
        out.append(Inequality.of(lhs, "<=", rhs, Provenance("jd", s, z, _decoding_roots(sub.base, s))))
    return out


def prune_non_error_bounds(
    bounds: Sequence[Inequality], net: Network, z: int
) -> List[Inequality]:
    """Drop decoding inequalities whose error subset misses every message the
    decoder genuinely demands: mis-decoding only helper codewords while all
    intended ones are correct is not an error."""
    intended = net.intended_at(z)
    out = []
    for ineq in bounds:
        if ineq.provenance is not None and ineq.provenance.decoder == z:
            if intended and not (ineq.provenance.subset & intended):
                continue
        out.append(ineq)
    return out
