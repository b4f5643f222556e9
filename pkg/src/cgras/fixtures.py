"""Built-in schemes for the classic three-node and four-node networks.

Each fixture bundles a network, a rate-splitting matrix, a chain graph and
default pipeline options.  The multiple-access and broadcast fixtures carry a
common message; the interference fixtures split each private message into a
private and a commonly decoded part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Tuple

from .graph import Cgras, add_b_edge, add_s_edge, close_assumptions, graph
from .network import MessageId, Network, SplitMatrix, mid


@dataclass(frozen=True)
class Fixture:
    name: str
    net: Network
    split: SplitMatrix
    scheme: Cgras
    auto_close: bool = False
    prune: bool = False

    def closed(self) -> Cgras:
        return close_assumptions(self.scheme) if self.auto_close else self.scheme


def _spc(g, child, parent):
    return add_s_edge(g, child, parent)


def _bin(g, binned, against):
    return add_b_edge(g, binned, against)


def _joint(g, a, b):
    return add_b_edge(add_b_edge(g, a, b), b, a)


# -- multiple access with a common message --------------------------------------


def _mac(kind: str) -> Fixture:
    v0, va, vb = mid((1, 2), 1), mid(1, 1), mid(2, 1)
    net = Network(2, 1, frozenset({v0, va, vb}), {1: frozenset({v0, va, vb})})
    g = graph(net, [v0, va, vb])
    if kind == "spc":
        g = _spc(g, va, v0)
        g = _spc(g, vb, v0)
    elif kind == "bin":
        g = _bin(g, va, v0)
        g = _bin(g, vb, v0)
    else:
        g = _spc(g, va, v0)
        g = _bin(g, vb, v0)
    return Fixture(f"mac_{kind}", net, SplitMatrix.identity(net.messages), g)


# -- broadcast with a common message ---------------------------------------------


def _bc(kind: str) -> Fixture:
    v0, va, vb = mid(1, (1, 2)), mid(1, 1), mid(1, 2)
    net = Network(
        1, 2, frozenset({v0, va, vb}),
        {1: frozenset({v0, va}), 2: frozenset({v0, vb})},
    )
    g = graph(net, [v0, va, vb])
    if kind == "marton":
        g = _spc(g, va, v0)
        g = _spc(g, vb, v0)
        g = _joint(g, va, vb)
        auto = False
    elif kind == "bin":
        # every pair jointly binned: the common codeword is built together
        # with both private ones instead of under them
        g = _joint(g, va, v0)
        g = _joint(g, vb, v0)
        g = _joint(g, va, vb)
        auto = False
    else:
        # common jointly binned with the first private, one-way against the
        # second; closure completes the joint-binning clique
        g = _joint(g, va, v0)
        g = _bin(g, vb, v0)
        g = _joint(g, va, vb)
        auto = True
    return Fixture(f"bc_{kind}", net, SplitMatrix.identity(net.messages), g, auto_close=auto)


# -- interference ----------------------------------------------------------------


def _ifc(kind: str) -> Fixture:
    w1, w2 = mid(1, 1), mid(2, 2)
    p1, c1 = mid(1, 1), mid(1, (1, 2))
    p2, c2 = mid(2, 2), mid(2, (1, 2))
    net = Network(
        2, 2, frozenset({w1, w2}),
        {1: frozenset({p1, c1}), 2: frozenset({p2, c2})},
    )
    half = Fraction(1, 2)
    split = SplitMatrix({
        (w1, p1): half, (w1, c1): 1 - half,
        (w2, p2): half, (w2, c2): 1 - half,
    })
    g = graph(net, [p1, c1, p2, c2])
    if kind == "hk":
        g = _spc(g, p1, c1)
        g = _spc(g, p2, c2)
    elif kind == "bin":
        g = _joint(g, p1, c1)
        g = _joint(g, p2, c2)
    else:
        g = _spc(g, p1, c1)
        g = _joint(g, p2, c2)
    return Fixture(f"ifc_{kind}", net, split, g, prune=True)


# -- cognitive interference -------------------------------------------------------


def _cifc(kind: str) -> Fixture:
    w1 = mid(1, 1)
    w2 = mid((1, 2), 2)
    v1 = mid((1, 2), (1, 2))   # fully common carrier
    v2 = mid((1, 2), 2)
    v3 = mid(1, (1, 2))
    v4 = mid(1, 1)
    v5 = mid(1, 2)
    v6 = mid(2, 2)
    net = Network(
        2, 2, frozenset({w1, w2}),
        {
            1: frozenset({v4, v3}),
            2: frozenset({v5, v6, v2, v1}),
        },
    )
    half, third = Fraction(1, 2), Fraction(1, 3)
    split = SplitMatrix({
        (w1, v4): half, (w1, v3): half,
        (w2, v5): Fraction(0), (w2, v6): third, (w2, v2): third, (w2, v1): 1 - 2 * third,
    })
    g = graph(net, [v1, v2, v3, v4, v5, v6])
    auto = False
    if kind == "spc":
        g = _spc(g, v2, v1)
        g = _spc(g, v3, v1)
        g = _spc(g, v6, v2)
        g = _spc(g, v5, v2)
        g = _spc(g, v5, v3)
        g = _spc(g, v4, v3)
    elif kind == "bin":
        g = _joint(g, v3, v4)
        g = _joint(g, v4, v5)
        g = _joint(g, v1, v2)
        auto = True  # closure completes the three-vertex clique
    else:
        g = _spc(g, v2, v1)
        g = _spc(g, v3, v1)
        g = _spc(g, v6, v2)
        g = _spc(g, v5, v2)
        g = _spc(g, v5, v3)
        g = _spc(g, v4, v3)
        g = _bin(g, v3, v2)
        g = _bin(g, v4, v2)
        g = _joint(g, v4, v5)
    name = {"spc": "cifc_spc", "bin": "cifc_bin", "full": "cifc_full"}[kind]
    return Fixture(name, net, split, g, auto_close=auto)


def _build_all() -> Dict[str, Fixture]:
    out = {}
    for kind in ("spc", "bin", "mixed"):
        f = _mac(kind)
        out[f.name] = f
    for kind in ("marton", "bin", "mixed"):
        f = _bc(kind)
        out[f.name] = f
    for kind in ("hk", "bin", "mixed"):
        f = _ifc(kind)
        out[f.name] = f
    for kind in ("spc", "bin", "full"):
        f = _cifc(kind)
        out[f.name] = f
    return out


FIXTURES: Dict[str, Fixture] = _build_all()


def fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(
            f"unknown fixture {name!r}; available: {', '.join(sorted(FIXTURES))}"
        ) from None
