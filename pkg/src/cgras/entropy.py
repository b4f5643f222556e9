"""Exact symbolic algebra of joint-entropy atoms.

Expressions are rational linear combinations of atoms H(A), where A is a set
of random-variable references.  Every atom is implicitly conditioned on the
coded time-sharing variable Q, so H(A) here always reads H(A | Q); numeric
evaluation honours that convention.  Equality is syntactic after
canonicalisation (merge atoms, drop zeros); no entropic inequalities are
assumed anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .network import MessageId


class ExpressionError(ValueError):
    """Raised for ill-formed information expressions."""


@dataclass(frozen=True, order=True)
class VarRef:
    """Reference to a random variable: an auxiliary codeword or a channel output."""

    kind: str  # "u" or "y"
    msg: Optional[MessageId] = None
    decoder: Optional[int] = None

    def __post_init__(self):
        if self.kind == "u":
            if self.msg is None or self.decoder is not None:
                raise ExpressionError("auxiliary reference needs a message id")
        elif self.kind == "y":
            if self.decoder is None or self.msg is not None:
                raise ExpressionError("output reference needs a decoder index")
        else:
            raise ExpressionError(f"unknown variable kind {self.kind!r}")

    def sort_key(self):
        if self.kind == "y":
            return (0, self.decoder, (), ())
        return (1, 0, *self.msg.sort_key())

    def __str__(self):
        if self.kind == "y":
            return f"Y_{self.decoder}"
        return f"U_{{{self.msg}}}"


def uref(m: MessageId) -> VarRef:
    return VarRef("u", msg=m)


def yref(z: int) -> VarRef:
    return VarRef("y", decoder=z)


Block = FrozenSet[VarRef]


class EntropyExpr:
    """Canonical rational combination of joint-entropy atoms."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Block, Fraction]] = None):
        canon: Dict[Block, Fraction] = {}
        for block, coeff in (terms or {}).items():
            if not block:
                continue  # H(empty | Q) = 0
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            block = frozenset(block)
            canon[block] = canon.get(block, Fraction(0)) + coeff
        self.terms = {b: c for b, c in canon.items() if c != 0}

    # -- algebra ----------------------------------------------------------

    @staticmethod
    def zero() -> "EntropyExpr":
        return EntropyExpr({})

    @staticmethod
    def entropy(block: Iterable[VarRef]) -> "EntropyExpr":
        return EntropyExpr({frozenset(block): Fraction(1)})

    def __add__(self, other: "EntropyExpr") -> "EntropyExpr":
        out = dict(self.terms)
        for b, c in other.terms.items():
            out[b] = out.get(b, Fraction(0)) + c
        return EntropyExpr(out)

    def __sub__(self, other: "EntropyExpr") -> "EntropyExpr":
        return self + (other * -1)

    def __mul__(self, scalar) -> "EntropyExpr":
        s = Fraction(scalar)
        return EntropyExpr({b: c * s for b, c in self.terms.items()})

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, EntropyExpr) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> List[Tuple[Block, Fraction]]:
        return sorted(
            self.terms.items(),
            key=lambda kv: (len(kv[0]), tuple(sorted(v.sort_key() for v in kv[0]))),
        )

    def variables(self) -> FrozenSet[VarRef]:
        out = set()
        for b in self.terms:
            out |= b
        return frozenset(out)

    def __repr__(self):
        return f"EntropyExpr({render(self, 'text')})"


def canonicalize(e: EntropyExpr) -> EntropyExpr:
    """Idempotent normal form (construction already canonicalises)."""
    return EntropyExpr(dict(e.terms))


def mutual_info(a: Iterable[VarRef], b: Iterable[VarRef], c: Iterable[VarRef] = ()) -> EntropyExpr:
    """I(a ; b | c, Q) as an entropy combination.

    Overlap of either argument with the conditioning is dropped; overlap
    between the two arguments is an error.
    """
    a, b, c = frozenset(a), frozenset(b), frozenset(c)
    a, b = a - c, b - c
    if a & b:
        raise ExpressionError(f"arguments of mutual information overlap: {a & b}")
    if not a or not b:
        return EntropyExpr.zero()
    return (
        EntropyExpr.entropy(a | c)
        + EntropyExpr.entropy(b | c)
        - EntropyExpr.entropy(a | b | c)
        - EntropyExpr.entropy(c)
    )


def expr_equal(a: EntropyExpr, b: EntropyExpr) -> bool:
    """Syntactic equality of canonical forms (Shannon-identity level)."""
    return canonicalize(a).terms == canonicalize(b).terms


# -- recognising non-negative combinations ---------------------------------


def _block_key(b: Block):
    return tuple(sorted(v.sort_key() for v in b))


def as_cmi_sum(e: EntropyExpr):
    """Try to write ``e`` as a positive combination of conditional mutual
    informations I(A;B|C), conditional entropies H(A|C) and entropies.

    Returns a list of (coeff, a, b, c) witnesses (b is None for entropy
    terms) or None.  Sound but incomplete: success proves e >= 0 for every
    joint distribution, failure proves nothing.
    """

    def solve(expr: EntropyExpr, depth: int):
        if expr.is_zero():
            return []
        if depth > 80:
            return None
        negs = sorted(
            (b for b, c in expr.terms.items() if c < 0),
            key=lambda b: (-len(b), _block_key(b)),
        )
        if not negs:
            return [(c, b, None, frozenset()) for b, c in expr.sorted_terms()]
        n = negs[0]
        cap = -expr.terms[n]
        pos = sorted(
            (b for b, c in expr.terms.items() if c > 0 and b < n),
            key=lambda b: (-len(b), _block_key(b)),
        )
        # n as union block of a conditional mutual information
        for i, x in enumerate(pos):
            for y in pos[i + 1 :]:
                if x | y != n:
                    continue
                cond = x & y
                take = min(expr.terms[x], expr.terms[y], cap)
                delta = EntropyExpr({x: take, y: take, n: -take, cond: -take})
                rest = solve(expr - delta, depth + 1)
                if rest is not None:
                    return [(take, x - cond, y - cond, cond)] + rest
        # n as the conditioning of a conditional entropy H(a | n)
        for a in sorted(
            (b for b, c in expr.terms.items() if c > 0 and b > n),
            key=lambda b: (len(b), _block_key(b)),
        ):
            take = min(expr.terms[a], cap)
            delta = EntropyExpr({a: take, n: -take})
            rest = solve(expr - delta, depth + 1)
            if rest is not None:
                return [(take, a - n, None, n)] + rest
        return None

    return solve(canonicalize(e), 0)


_NONNEG_CACHE: dict = {}


def is_nonneg_combination(e: EntropyExpr) -> bool:
    """True when ``e`` is recognisably >= 0 (zero or a CMI/entropy sum)."""
    if e.is_zero():
        return True
    if len(e.terms) > 16:
        return False
    key = frozenset(e.terms.items())
    if key not in _NONNEG_CACHE:
        _NONNEG_CACHE[key] = as_cmi_sum(e) is not None
    return _NONNEG_CACHE[key]


# -- rendering --------------------------------------------------------------


def _fmt_block(block: Block, style: str) -> str:
    parts = [str(v) for v in sorted(block, key=VarRef.sort_key)]
    if style == "latex":
        parts = [
            f"Y_{{{v.decoder}}}" if v.kind == "y" else f"U_{{{_latex_msg(v.msg)}}}"
            for v in sorted(block, key=VarRef.sort_key)
        ]
    return ", ".join(parts)


def _latex_msg(m: MessageId) -> str:
    def fmt(side):
        if len(side) == 1:
            return str(side[0])
        return r"\{" + ",".join(str(x) for x in side) + r"\}"

    return f"{fmt(m.tx)} \\to {fmt(m.rx)}"


def _match_mutual_info(e: EntropyExpr):
    """Detect the 3- or 4-atom pattern of a single I(A;B|C)."""
    if not e.terms or any(c != 1 and c != -1 for c in e.terms.values()):
        return None
    pos = sorted((b for b, c in e.terms.items() if c == 1), key=len)
    neg = sorted((b for b, c in e.terms.items() if c == -1), key=len)
    if len(pos) != 2 or len(neg) not in (1, 2):
        return None
    x, y = pos
    union = neg[-1]
    cond = x & y
    if x | y != union:
        return None
    if len(neg) == 2 and neg[0] != cond:
        return None
    if len(neg) == 1 and cond:
        return None
    return (x - cond, y - cond, cond)


def render(e: EntropyExpr, style: str = "text") -> str:
    """Human-readable rendering; single-CMI patterns print as I(.;.|.,Q)."""
    e = canonicalize(e)
    if style == "json":
        import json

        atoms = [
            {
                "block": sorted(str(v) for v in block),
                "coeff": [coeff.numerator, coeff.denominator],
            }
            for block, coeff in e.sorted_terms()
        ]
        return json.dumps({"atoms": atoms}, sort_keys=True)
    if e.is_zero():
        return "0"
    m = _match_mutual_info(e)
    if m is not None:
        a, b, c = m
        cond = _fmt_block(c, style) + ", Q" if c else "Q"
        s = f"I({_fmt_block(a, style)}; {_fmt_block(b, style)} | {cond})"
        return s if style == "text" else s
    parts = []
    for block, coeff in e.sorted_terms():
        h = f"H({_fmt_block(block, style)} | Q)"
        if coeff == 1:
            parts.append(f"+ {h}")
        elif coeff == -1:
            parts.append(f"- {h}")
        else:
            sign = "+" if coeff > 0 else "-"
            parts.append(f"{sign} {abs(coeff)}·{h}")
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else out
