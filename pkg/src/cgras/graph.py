"""Chain-graph description of a random-coding scheme.

Vertices are auxiliary codewords; a superposition edge (child, parent) means
the child codebook is generated conditionally on the parent codeword, a
binning edge (binned, against) means the binned codeword's excess index is
chosen to mimic a joint distribution with the target.  Reciprocal binning
edges form an undirected (joint-binning) pair.

Graphs are immutable; every mutating operation returns a new graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .network import MessageId, Network, NetworkError

Edge = Tuple[MessageId, MessageId]


class GraphError(ValueError):
    """Illegal edge or violated structural precondition."""


def superposition_legal(child: MessageId, parent: MessageId) -> bool:
    """The base codeword must be encoded by at least the child's transmitters
    and decoded by at least the child's receivers."""
    return child.tx_set <= parent.tx_set and child.rx_set <= parent.rx_set


def binning_legal(binned: MessageId, against: MessageId) -> bool:
    """Encoders performing the binning must know the target codeword."""
    return binned.tx_set <= against.tx_set


@dataclass(frozen=True)
class Cgras:
    """Chain graph of a coding scheme: vertex set plus S and B edge sets."""

    net: Network
    vertices: FrozenSet[MessageId]
    s_edges: FrozenSet[Edge] = frozenset()
    b_edges: FrozenSet[Edge] = frozenset()

    def __post_init__(self):
        for v in self.vertices:
            self.net.check_message(v)
        for child, parent in self.s_edges:
            if child not in self.vertices or parent not in self.vertices:
                raise GraphError(f"superposition edge {child} ⊏ {parent} off-graph")
            if not superposition_legal(child, parent):
                raise GraphError(
                    f"illegal superposition {child} ⊏ {parent}: "
                    f"need tx ⊆ and rx ⊆ of the base"
                )
        for binned, against in self.b_edges:
            if binned not in self.vertices or against not in self.vertices:
                raise GraphError(f"binning edge {binned} ≺ {against} off-graph")
            if not binning_legal(binned, against):
                raise GraphError(
                    f"illegal binning {binned} ≺ {against}: "
                    f"{set(binned.tx)} ⊄ {set(against.tx)}"
                )
        overlap = {frozenset(e) for e in self.s_edges} & {
            frozenset(e) for e in self.b_edges if self.is_mutual(*e)
        }
        if overlap:
            raise GraphError(f"superposition edge duplicates a joint-binning pair: {overlap}")

    # -- queries ------------------------------------------------------------

    def sorted_vertices(self) -> List[MessageId]:
        return sorted(self.vertices, key=MessageId.sort_key)

    def spc_parents(self, v: MessageId) -> FrozenSet[MessageId]:
        return frozenset(p for c, p in self.s_edges if c == v)

    def spc_children(self, v: MessageId) -> FrozenSet[MessageId]:
        return frozenset(c for c, p in self.s_edges if p == v)

    def spc_ancestors(self, v: MessageId) -> FrozenSet[MessageId]:
        """Transitive closure of the superposed-on relation (bases of v)."""
        out: Set[MessageId] = set()
        stack = [v]
        while stack:
            for p in self.spc_parents(stack.pop()):
                if p not in out:
                    out.add(p)
                    stack.append(p)
        return frozenset(out)

    def spc_descendants(self, v: MessageId) -> FrozenSet[MessageId]:
        out: Set[MessageId] = set()
        stack = [v]
        while stack:
            for c in self.spc_children(stack.pop()):
                if c not in out:
                    out.add(c)
                    stack.append(c)
        return frozenset(out)

    def bin_targets(self, v: MessageId) -> FrozenSet[MessageId]:
        """Codewords v is binned against."""
        return frozenset(t for b, t in self.b_edges if b == v)

    def bin_children(self, v: MessageId) -> FrozenSet[MessageId]:
        """Codewords binned against v."""
        return frozenset(b for b, t in self.b_edges if t == v)

    def is_mutual(self, a: MessageId, b: MessageId) -> bool:
        return (a, b) in self.b_edges and (b, a) in self.b_edges

    def mutual_partners(self, v: MessageId) -> FrozenSet[MessageId]:
        return frozenset(t for t in self.bin_targets(v) if self.is_mutual(v, t))

    def one_way_bin_targets(self, v: MessageId) -> FrozenSet[MessageId]:
        return self.bin_targets(v) - self.mutual_partners(v)

    def one_way_bin_children(self, v: MessageId) -> FrozenSet[MessageId]:
        return self.bin_children(v) - self.mutual_partners(v)

    def binned_vertices(self) -> FrozenSet[MessageId]:
        """Vertices carrying a bin index (any outgoing binning edge)."""
        return frozenset(b for b, _ in self.b_edges)

    def parents(self, v: MessageId) -> FrozenSet[MessageId]:
        return self.spc_parents(v) | self.bin_targets(v)

    def components(self) -> List[FrozenSet[MessageId]]:
        """Connected components of the underlying undirected edge structure."""
        adj: Dict[MessageId, Set[MessageId]] = {v: set() for v in self.vertices}
        for a, b in list(self.s_edges) + list(self.b_edges):
            adj[a].add(b)
            adj[b].add(a)
        seen: Set[MessageId] = set()
        comps = []
        for v in self.sorted_vertices():
            if v in seen:
                continue
            comp = {v}
            stack = [v]
            while stack:
                for u in adj[stack.pop()]:
                    if u not in comp:
                        comp.add(u)
                        stack.append(u)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def chain_components(self) -> List[FrozenSet[MessageId]]:
        """Connected components of the joint-binning (undirected) edges only."""
        adj: Dict[MessageId, Set[MessageId]] = {v: set() for v in self.vertices}
        for a, b in self.b_edges:
            if self.is_mutual(a, b):
                adj[a].add(b)
        seen: Set[MessageId] = set()
        comps = []
        for v in self.sorted_vertices():
            if v in seen:
                continue
            comp = {v}
            stack = [v]
            while stack:
                for u in adj[stack.pop()]:
                    if u not in comp:
                        comp.add(u)
                        stack.append(u)
            seen |= comp
            comps.append(frozenset(comp))
        return comps


# -- construction -----------------------------------------------------------


def graph(net: Network, vertices: Iterable[MessageId]) -> Cgras:
    return Cgras(net=net, vertices=frozenset(vertices))


def add_s_edge(g: Cgras, child: MessageId, parent: MessageId) -> Cgras:
    """Superpose ``child`` on ``parent``; transitivity-implied edges are not
    stored but honoured by the ancestor queries."""
    if child == parent:
        raise GraphError("self superposition")
    if not superposition_legal(child, parent):
        raise GraphError(
            f"illegal superposition {child} ⊏ {parent}: base must be encoded by "
            f"a superset of transmitters ({set(parent.tx)} ⊇ {set(child.tx)} "
            f"required) and decoded by a superset of receivers "
            f"({set(parent.rx)} ⊇ {set(child.rx)} required)"
        )
    if parent in g.spc_ancestors(child):
        return g  # already implied
    return replace(g, s_edges=g.s_edges | {(child, parent)})


def add_b_edge(g: Cgras, binned: MessageId, against: MessageId) -> Cgras:
    """Bin ``binned`` against ``against``; a reciprocal pair is joint binning."""
    if binned == against:
        raise GraphError("self binning")
    if not binning_legal(binned, against):
        raise GraphError(
            f"illegal binning {binned} ≺ {against}: "
            f"{set(binned.tx)} ⊄ {set(against.tx)}"
        )
    return replace(g, b_edges=g.b_edges | {(binned, against)})


# -- structural assumptions ---------------------------------------------------


@dataclass
class AssumptionReport:
    joint_binning_transitive: bool
    no_directed_cycles: bool
    equal_parents: bool
    offenders: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return (
            self.joint_binning_transitive
            and self.no_directed_cycles
            and self.equal_parents
        )


def _directed_cycle(g: Cgras) -> Optional[List[MessageId]]:
    """Find a cycle using superposition and one-way binning edges."""
    succ: Dict[MessageId, Set[MessageId]] = {v: set() for v in g.vertices}
    for c, p in g.s_edges:
        succ[c].add(p)
    for b, t in g.b_edges:
        if not g.is_mutual(b, t):
            succ[b].add(t)
    color: Dict[MessageId, int] = {}
    path: List[MessageId] = []

    def visit(v) -> Optional[List[MessageId]]:
        color[v] = 1
        path.append(v)
        for u in sorted(succ[v], key=MessageId.sort_key):
            if color.get(u, 0) == 1:
                return path[path.index(u):] + [u]
            if color.get(u, 0) == 0:
                found = visit(u)
                if found:
                    return found
        color[v] = 2
        path.pop()
        return None

    for v in g.sorted_vertices():
        if color.get(v, 0) == 0:
            found = visit(v)
            if found:
                return found
    return None


def check_assumptions(g: Cgras) -> AssumptionReport:
    """Verify the three structural conditions for an ADG-equivalent graph."""
    offenders = []

    transitive = True
    for comp in g.chain_components():
        for a in comp:
            for b in comp:
                if a != b and not g.is_mutual(a, b):
                    transitive = False
                    offenders.append(f"joint binning not transitive: {a} ⋈ {b} missing")

    cycle = _directed_cycle(g)
    acyclic = cycle is None
    if cycle:
        offenders.append("directed cycle: " + " → ".join(str(v) for v in cycle))

    equal = True
    for comp in g.chain_components():
        if len(comp) < 2:
            continue
        parent_sets = {v: g.parents(v) - comp for v in comp}
        base = None
        for v in sorted(comp, key=MessageId.sort_key):
            if base is None:
                base = parent_sets[v]
            elif parent_sets[v] != base:
                equal = False
                offenders.append(
                    f"jointly binned vertices with different parents: {sorted(map(str, comp))}"
                )
                break

    return AssumptionReport(transitive, acyclic, equal, tuple(offenders))


def close_assumptions(g: Cgras) -> Cgras:
    """Minimal fixpoint augmentation with binning edges so the three
    assumptions hold.  Only edges are added; existing structure is kept."""
    for _ in range(4 * (len(g.vertices) ** 2) + 4):
        changed = False

        # complete every joint-binning component into a clique
        for comp in g.chain_components():
            for a in sorted(comp, key=MessageId.sort_key):
                for b in sorted(comp, key=MessageId.sort_key):
                    if a != b and not g.is_mutual(a, b):
                        if not (binning_legal(a, b) and binning_legal(b, a)):
                            raise GraphError(
                                f"closure impossible: joint binning {a} ⋈ {b} illegal"
                            )
                        g = replace(g, b_edges=g.b_edges | {(a, b), (b, a)})
                        changed = True

        # break directed cycles by making their binning edges reciprocal
        cycle = _directed_cycle(g)
        if cycle is not None:
            pairs = list(zip(cycle, cycle[1:]))
            for a, b in pairs:
                if (a, b) in g.b_edges and (b, a) not in g.b_edges:
                    if not binning_legal(b, a):
                        raise GraphError(
                            f"closure impossible: cannot reverse {a} ≺ {b}"
                        )
                    g = replace(g, b_edges=g.b_edges | {(b, a)})
                    changed = True
            if not changed:
                raise GraphError(
                    "closure impossible: directed cycle without reversible binning edge"
                )

        # equalise parents across each joint-binning clique
        for comp in g.chain_components():
            if len(comp) < 2:
                continue
            union_parents: Set[MessageId] = set()
            for v in comp:
                union_parents |= g.parents(v) - comp
            for v in sorted(comp, key=MessageId.sort_key):
                for p in sorted(union_parents - g.parents(v), key=MessageId.sort_key):
                    if not binning_legal(v, p):
                        raise GraphError(
                            f"closure impossible: parent {p} of a joint-binning "
                            f"partner cannot be attached to {v}"
                        )
                    g = replace(g, b_edges=g.b_edges | {(v, p)})
                    changed = True

        if not changed:
            break
    report = check_assumptions(g)
    if not report.ok:
        raise GraphError(f"closure failed: {report.offenders}")
    return g


# -- orientation and factorisation -------------------------------------------


@dataclass(frozen=True)
class OrientedCgras:
    """Chain graph plus an acyclic orientation of its joint-binning pairs."""

    base: Cgras
    b_minus: FrozenSet[Edge]

    @property
    def net(self) -> Network:
        return self.base.net

    @property
    def vertices(self) -> FrozenSet[MessageId]:
        return self.base.vertices

    def binp_parents(self, v: MessageId) -> FrozenSet[MessageId]:
        return frozenset(t for b, t in self.b_minus if b == v)

    def order(self) -> List[MessageId]:
        """Deterministic topological order of the equivalent acyclic digraph."""
        succ = {v: set() for v in self.vertices}
        indeg = {v: 0 for v in self.vertices}
        edges = set(self.base.s_edges) | set(self.b_minus)
        for c, p in edges:
            if c not in succ[p]:
                succ[p].add(c)
                indeg[c] += 1
        ready = sorted((v for v in self.vertices if indeg[v] == 0), key=MessageId.sort_key)
        out: List[MessageId] = []
        while ready:
            v = ready.pop(0)
            out.append(v)
            for u in succ[v]:
                indeg[u] -= 1
                if indeg[u] == 0:
                    ready.append(u)
            ready.sort(key=MessageId.sort_key)
        if len(out) != len(self.vertices):
            raise GraphError("orientation is not acyclic")
        return out


def _orientations_of(g: Cgras):
    """All per-component vertex orderings that induce valid orientations."""
    import itertools

    comps = [sorted(c, key=MessageId.sort_key) for c in g.chain_components() if len(c) > 1]
    if not comps:
        yield {}
        return
    for perms in itertools.product(*[itertools.permutations(c) for c in comps]):
        rank: Dict[MessageId, int] = {}
        for perm in perms:
            for i, v in enumerate(perm):
                rank[v] = i
        yield rank


def _orient(g: Cgras, rank: Dict[MessageId, int]) -> OrientedCgras:
    b_minus: Set[Edge] = set()
    for b, t in g.b_edges:
        if g.is_mutual(b, t):
            if rank[b] > rank[t]:  # later vertex binned against earlier
                b_minus.add((b, t))
        else:
            b_minus.add((b, t))
    oriented = OrientedCgras(base=g, b_minus=frozenset(b_minus))
    oriented.order()  # raises if cyclic
    return oriented


def equivalent_adg(g: Cgras) -> OrientedCgras:
    """Deterministic acyclic orientation of the joint-binning pairs.

    Within each chain component vertices are ordered by (|rx| descending,
    rx ascending, tx ascending) and each undirected pair is oriented with the
    later vertex binned against the earlier one.
    """
    report = check_assumptions(g)
    if not report.ok:
        raise GraphError(f"assumptions violated: {report.offenders}")
    rank: Dict[MessageId, int] = {}
    for comp in g.chain_components():
        for i, v in enumerate(sorted(comp, key=MessageId.sort_key)):
            rank[v] = i
    return _orient(g, rank)


def all_orientations(g: Cgras) -> List[OrientedCgras]:
    """Every acyclic orientation of the joint-binning pairs (for invariance tests)."""
    report = check_assumptions(g)
    if not report.ok:
        raise GraphError(f"assumptions violated: {report.offenders}")
    out = []
    for rank in _orientations_of(g):
        full_rank = dict(rank)
        for v in g.vertices:
            full_rank.setdefault(v, 0)
        try:
            out.append(_orient(g, full_rank))
        except GraphError:
            continue
    return out


@dataclass(frozen=True)
class Factor:
    head: MessageId
    parents: FrozenSet[MessageId]

    def __str__(self):
        if not self.parents:
            return f"P(U_{{{self.head}}})"
        ps = ", ".join(f"U_{{{p}}}" for p in sorted(self.parents, key=MessageId.sort_key))
        return f"P(U_{{{self.head}}} | {ps})"


@dataclass(frozen=True)
class Factorization:
    """Topologically ordered conditional factors, implicitly given Q."""

    factors: Tuple[Factor, ...]

    def __str__(self):
        return " ".join(str(f) for f in self.factors)


def factorization(og: OrientedCgras) -> Factorization:
    """Recursive factorisation of the joint codeword distribution: each head
    conditioned on its transitive superposition bases and oriented binning
    targets."""
    facs = []
    for v in og.order():
        parents = og.base.spc_ancestors(v) | og.binp_parents(v)
        facs.append(Factor(head=v, parents=frozenset(parents)))
    return Factorization(factors=tuple(facs))


def decoder_subgraph(g: Cgras, z: int) -> Cgras:
    """Restriction to the codewords decoded at receiver ``z`` with edges whose
    endpoints are both decoded there."""
    if not 1 <= z <= g.net.n_rx:
        raise IndexError(f"decoder {z} outside [1, {g.net.n_rx}]")
    keep = frozenset(v for v in g.vertices if z in v.rx)
    s = frozenset(e for e in g.s_edges if e[0] in keep and e[1] in keep)
    b = frozenset(e for e in g.b_edges if e[0] in keep and e[1] in keep)
    return Cgras(net=g.net, vertices=keep, s_edges=s, b_edges=b)


def oriented_subgraph(og: OrientedCgras, z: int) -> OrientedCgras:
    """Decoder restriction carrying over the parent orientation."""
    sub = decoder_subgraph(og.base, z)
    b_minus = frozenset(
        e for e in og.b_minus if e[0] in sub.vertices and e[1] in sub.vertices
    )
    return OrientedCgras(base=sub, b_minus=b_minus)
