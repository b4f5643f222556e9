"""JSON scheme files: parsing, validation and round-trip serialisation.

Schema (all node indices 1-based)::

    {
      "network": {"n_tx": 2, "n_rx": 1,
                  "messages": [{"tx": [1], "rx": [1]}, ...],
                  "intended": {"1": [{"tx": [1], "rx": [1]}, ...]}},
      "split":   [{"original": MSG, "split": MSG, "num": 1, "den": 2}, ...],
      "vertices": [MSG, ...],
      "edges":   [{"kind": "spc", "from": MSG, "to": MSG},
                  {"kind": "bin", "from": MSG, "to": MSG}, ...],
      "options": {"encoder_mode": "cl", "decoder_mode": "jd",
                  "prune": false, "auto_close": false}
    }

For "spc" edges ``from`` is the superposed (top) codeword and ``to`` its
base; for "bin" edges ``from`` is the binned codeword and ``to`` the target.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Tuple

from .graph import Cgras, GraphError, add_b_edge, add_s_edge, check_assumptions, close_assumptions, graph
from .network import MessageId, Network, NetworkError, SplitMatrix, validate_split_matrix


class SchemeParseError(ValueError):
    """Parse or validation failure with a located message."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


@dataclass
class Options:
    encoder_mode: str = "cl"
    decoder_mode: str = "jd"
    prune: bool = False
    auto_close: bool = False


def _msg_from_json(obj: Any, where: str) -> MessageId:
    if not isinstance(obj, dict) or "tx" not in obj or "rx" not in obj:
        raise SchemeParseError(where, f"expected {{'tx': [...], 'rx': [...]}}, got {obj!r}")
    try:
        return MessageId.of(obj["tx"], obj["rx"])
    except (NetworkError, TypeError) as exc:
        raise SchemeParseError(where, str(exc)) from None


def _msg_to_json(m: MessageId) -> Dict[str, Any]:
    return {"tx": list(m.tx), "rx": list(m.rx)}


def parse_scheme(text: str) -> Tuple[Network, Cgras, SplitMatrix, Options]:
    """Parse and fully validate a scheme file; raises on the first error."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemeParseError(f"line {exc.lineno}", exc.msg) from None

    netobj = doc.get("network")
    if not isinstance(netobj, dict):
        raise SchemeParseError("network", "missing network block")
    try:
        n_tx, n_rx = int(netobj["n_tx"]), int(netobj["n_rx"])
    except (KeyError, TypeError, ValueError):
        raise SchemeParseError("network", "n_tx and n_rx must be integers") from None
    messages = frozenset(
        _msg_from_json(m, f"network.messages[{i}]")
        for i, m in enumerate(netobj.get("messages", []))
    )
    intended = {}
    for z, ms in (netobj.get("intended") or {}).items():
        intended[int(z)] = frozenset(
            _msg_from_json(m, f"network.intended[{z}][{i}]") for i, m in enumerate(ms)
        )
    try:
        net = Network(n_tx, n_rx, messages, intended)
    except NetworkError as exc:
        raise SchemeParseError("network", str(exc)) from None

    gamma = {}
    for i, entry in enumerate(doc.get("split", [])):
        where = f"split[{i}]"
        o = _msg_from_json(entry.get("original"), where + ".original")
        s = _msg_from_json(entry.get("split"), where + ".split")
        try:
            gamma[(o, s)] = Fraction(int(entry["num"]), int(entry["den"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError):
            raise SchemeParseError(where, "num/den must form a rational") from None
    split = SplitMatrix(gamma) if gamma else SplitMatrix.identity(messages)
    report = validate_split_matrix(net, split)
    if not report.ok:
        raise SchemeParseError("split", "; ".join(report.violations))

    vertices = [
        _msg_from_json(v, f"vertices[{i}]") for i, v in enumerate(doc.get("vertices", []))
    ]
    try:
        g = graph(net, vertices)
    except (NetworkError, GraphError) as exc:
        raise SchemeParseError("vertices", str(exc)) from None
    for i, e in enumerate(doc.get("edges", [])):
        where = f"edges[{i}]"
        kind = e.get("kind")
        src = _msg_from_json(e.get("from"), where + ".from")
        dst = _msg_from_json(e.get("to"), where + ".to")
        try:
            if kind == "spc":
                g = add_s_edge(g, src, dst)
            elif kind == "bin":
                g = add_b_edge(g, src, dst)
            else:
                raise SchemeParseError(where, f"kind must be 'spc' or 'bin', got {kind!r}")
        except GraphError as exc:
            raise SchemeParseError(where, str(exc)) from None

    opts = doc.get("options", {}) or {}
    options = Options(
        encoder_mode=opts.get("encoder_mode", "cl"),
        decoder_mode=opts.get("decoder_mode", "jd"),
        prune=bool(opts.get("prune", False)),
        auto_close=bool(opts.get("auto_close", False)),
    )
    if options.encoder_mode not in ("cl", "mcl"):
        raise SchemeParseError("options.encoder_mode", options.encoder_mode)
    if options.decoder_mode not in ("sd", "jd"):
        raise SchemeParseError("options.decoder_mode", options.decoder_mode)

    if options.auto_close:
        g = close_assumptions(g)
    else:
        report = check_assumptions(g)
        if not report.ok:
            raise SchemeParseError(
                "edges",
                "structural assumptions violated (pass auto_close to repair): "
                + "; ".join(report.offenders),
            )
    return net, g, split, options


def serialize_scheme(net: Network, g: Cgras, split: SplitMatrix, options: Options) -> str:
    doc = {
        "network": {
            "n_tx": net.n_tx,
            "n_rx": net.n_rx,
            "messages": [_msg_to_json(m) for m in sorted(net.messages, key=MessageId.sort_key)],
            "intended": {
                str(z): [_msg_to_json(m) for m in sorted(ms, key=MessageId.sort_key)]
                for z, ms in sorted(net.intended.items())
            },
        },
        "split": [
            {
                "original": _msg_to_json(o),
                "split": _msg_to_json(s),
                "num": c.numerator,
                "den": c.denominator,
            }
            for (o, s), c in sorted(
                split.gamma.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key())
            )
        ],
        "vertices": [_msg_to_json(v) for v in g.sorted_vertices()],
        "edges": (
            [
                {"kind": "spc", "from": _msg_to_json(c), "to": _msg_to_json(p)}
                for c, p in sorted(g.s_edges, key=lambda e: (e[0].sort_key(), e[1].sort_key()))
            ]
            + [
                {"kind": "bin", "from": _msg_to_json(b), "to": _msg_to_json(t)}
                for b, t in sorted(g.b_edges, key=lambda e: (e[0].sort_key(), e[1].sort_key()))
            ]
        ),
        "options": {
            "encoder_mode": options.encoder_mode,
            "decoder_mode": options.decoder_mode,
            "prune": options.prune,
            "auto_close": options.auto_close,
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def fixture_scheme_text(name: str) -> str:
    """Serialise a built-in fixture to scheme-file text."""
    from .fixtures import fixture

    f = fixture(name)
    options = Options(prune=f.prune, auto_close=f.auto_close)
    return serialize_scheme(f.net, f.scheme, f.split, options)
