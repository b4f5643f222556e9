"""Error-event tables for encoding and decoding analyses.

Rows enumerate subsets of the binned / decoded codewords; columns mark each
codeword as correctly handled (check mark), dragged into the error set (x)
or driving it (boxed x for the root members).  Inadmissible subsets are shown
with the reason so tables stay complete row-for-row.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .bounds import (
    Inequality,
    _decoding_roots,
    _encoding_roots,
    binning_bounds_cl,
    binning_bounds_mcl,
    decoding_bounds_jd,
    decoding_bounds_sd,
    enumerate_decoding_sets,
    enumerate_encoding_sets,
)
from .entropy import render
from .graph import OrientedCgras, oriented_subgraph
from .network import MessageId

OK, FAIL, ROOT = "✓", "✗", "⊠"
LATEX = {OK: r"$\checkmark$", FAIL: r"$\times$", ROOT: r"$\boxtimes$"}


@dataclass
class EventTable:
    title: str
    columns: Tuple[MessageId, ...]
    rows: List[Tuple[str, Dict[MessageId, str], str]]  # label, marks, annotation

    def admissible_count(self) -> int:
        return sum(1 for _, _, note in self.rows if not note.startswith("not admissible"))

    def to_text(self) -> str:
        head = [self.title]
        widths = [max(6, len(str(c)) + 2) for c in self.columns]
        header = " | ".join(str(c).center(w) for c, w in zip(self.columns, widths))
        head.append(f"{'':6} | {header} | bound")
        head.append("-" * len(head[-1]))
        for label, marks, note in self.rows:
            cells = " | ".join(marks[c].center(w) for c, w in zip(self.columns, widths))
            head.append(f"{label:6} | {cells} | {note}")
        return "\n".join(head)

    def to_latex(self) -> str:
        cols = "|l|" + "l|" * len(self.columns) + "l|"
        lines = [r"\begin{tabular}{" + cols + "}", r"\hline"]
        header = " & ".join(
            [""] + [f"$b_{{{c}}}$" for c in self.columns] + ["bound"]
        )
        lines.append(header + r" \\ \hline")
        for label, marks, note in self.rows:
            cells = " & ".join(
                [label] + [LATEX[marks[c]] for c in self.columns] + [note]
            )
            lines.append(cells + r" \\ \hline")
        lines.append(r"\end{tabular}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(
            {
                "title": self.title,
                "columns": [str(c) for c in self.columns],
                "rows": [
                    {
                        "label": label,
                        "marks": {str(c): marks[c] for c in self.columns},
                        "note": note,
                    }
                    for label, marks, note in self.rows
                ],
            },
            sort_keys=True,
            indent=2,
        )


def _all_subsets(base: Sequence[MessageId]):
    members = sorted(base, key=MessageId.sort_key)
    for r in range(1, len(members) + 1):
        for combo in itertools.combinations(members, r):
            yield frozenset(combo)


def encoding_table(og: OrientedCgras, mode: str = "cl") -> EventTable:
    """Encoding error events; one row per subset of the binned codewords."""
    g = og.base
    base = tuple(sorted(g.binned_vertices(), key=MessageId.sort_key))
    family = set(enumerate_encoding_sets(og).admissible)
    bounds = {b.provenance.subset: b for b in
              (binning_bounds_cl(og) if mode == "cl" else binning_bounds_mcl(og))}
    rows = []
    for i, s in enumerate(_all_subsets(base), start=1):
        marks = {}
        admissible = s in family
        roots = _encoding_roots(g, s) if admissible else frozenset()
        for c in base:
            if c not in s:
                marks[c] = OK
            elif c in roots:
                marks[c] = ROOT
            else:
                marks[c] = FAIL
        if not admissible:
            note = "not admissible (induced failures missing)"
        else:
            ineq = bounds.get(s)
            note = str(ineq) if ineq is not None else ""
            if ineq is not None and ineq.degenerate:
                note += "   [degenerate]"
        rows.append((f"E{i}", marks, note))
    if mode == "mcl":
        empty = bounds.get(frozenset())
        if empty is not None:
            rows.append((f"E{len(rows) + 1}", {c: OK for c in base}, str(empty)))
    return EventTable(f"encoding error events ({mode})", base, rows)


def decoding_table(og: OrientedCgras, z: int, mode: str = "jd") -> EventTable:
    """Decoding error events at one receiver."""
    sub = oriented_subgraph(og, z)
    base = tuple(sorted(sub.base.vertices, key=MessageId.sort_key))
    family = set(enumerate_decoding_sets(og, z).admissible)
    gen = decoding_bounds_sd if mode == "sd" else decoding_bounds_jd
    bounds = {b.provenance.subset: b for b in gen(og, z)}
    rows = []
    for i, s in enumerate(_all_subsets(base), start=1):
        marks = {}
        admissible = s in family
        roots = _decoding_roots(sub.base, s) if admissible else frozenset()
        for c in base:
            if c not in s:
                marks[c] = OK
            elif c in roots:
                marks[c] = ROOT
            else:
                marks[c] = FAIL
        if not admissible:
            note = "not admissible (induced failures missing)"
        else:
            ineq = bounds.get(s)
            note = str(ineq) if ineq is not None else ""
        rows.append((f"D{i}", marks, note))
    return EventTable(f"decoding error events at receiver {z} ({mode})", base, rows)
