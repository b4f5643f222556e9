"""Network model: nodes, messages, rate vectors and rate-splitting matrices.

A message is addressed by the pair (tx, rx): the set of transmitters that
encode it and the set of receivers that must decode it.  Rate bookkeeping is
exact (``fractions.Fraction``) so that the polyhedral machinery downstream
never touches floating point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Mapping, Tuple


class NetworkError(ValueError):
    """Raised for malformed networks, messages or rate-splitting matrices."""


@dataclass(frozen=True, order=True)
class NodeSet:
    """Non-empty sorted set of 1-based node indices inside a fixed universe."""

    members: Tuple[int, ...]
    universe_size: int

    def __post_init__(self):
        if not self.members:
            raise NetworkError("node set must be non-empty")
        if tuple(sorted(set(self.members))) != self.members:
            raise NetworkError(f"node set {self.members} not sorted/unique")
        if self.members[0] < 1 or self.members[-1] > self.universe_size:
            raise NetworkError(
                f"node set {self.members} outside universe [1, {self.universe_size}]"
            )

    @staticmethod
    def of(members: Iterable[int], universe_size: int) -> "NodeSet":
        return NodeSet(tuple(sorted(set(members))), universe_size)

    def as_frozenset(self) -> FrozenSet[int]:
        return frozenset(self.members)

    def issubset(self, other: "NodeSet") -> bool:
        return set(self.members) <= set(other.members)

    def __str__(self):
        if len(self.members) == 1:
            return str(self.members[0])
        return "{" + ",".join(str(m) for m in self.members) + "}"


@dataclass(frozen=True, order=True)
class MessageId:
    """Identifier of one message / auxiliary codeword: tx set -> rx set."""

    tx: Tuple[int, ...]
    rx: Tuple[int, ...]

    def __post_init__(self):
        for side in (self.tx, self.rx):
            if not side or tuple(sorted(set(side))) != side or side[0] < 1:
                raise NetworkError(f"bad message id ({self.tx} -> {self.rx})")

    @staticmethod
    def of(tx: Iterable[int], rx: Iterable[int]) -> "MessageId":
        return MessageId(tuple(sorted(set(tx))), tuple(sorted(set(rx))))

    @property
    def tx_set(self) -> FrozenSet[int]:
        return frozenset(self.tx)

    @property
    def rx_set(self) -> FrozenSet[int]:
        return frozenset(self.rx)

    def __str__(self):
        def fmt(side):
            if len(side) == 1:
                return str(side[0])
            return "{" + ",".join(str(m) for m in side) + "}"

        return f"{fmt(self.tx)}→{fmt(self.rx)}"

    def sort_key(self):
        """Deterministic order: |rx| descending, rx ascending, tx ascending."""
        return (-len(self.rx), self.rx, self.tx)


def mid(tx, rx) -> MessageId:
    """Shorthand constructor accepting ints or iterables."""
    if isinstance(tx, int):
        tx = (tx,)
    if isinstance(rx, int):
        rx = (rx,)
    return MessageId.of(tx, rx)


@dataclass(frozen=True)
class Network:
    """Single-hop memoryless network with explicit message demands.

    ``intended`` maps each decoder to the split messages the scheme designer
    actually wants decoded there (used to drop non-error decoding events).
    """

    n_tx: int
    n_rx: int
    messages: FrozenSet[MessageId]
    intended: Mapping[int, FrozenSet[MessageId]] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_tx < 1 or self.n_rx < 1:
            raise NetworkError("need at least one transmitter and receiver")
        for m in self.messages:
            self.check_message(m)
        limit = (2 ** self.n_tx - 1) * (2 ** self.n_rx - 1)
        if len(self.messages) > limit:
            raise NetworkError(f"more than {limit} distinct messages")
        for z, demanded in self.intended.items():
            if not 1 <= z <= self.n_rx:
                raise NetworkError(f"intended map references decoder {z}")
            for m in demanded:
                if z not in m.rx:
                    raise NetworkError(f"{m} not decoded at {z} but marked intended")

    def check_message(self, m: MessageId) -> None:
        if m.tx[-1] > self.n_tx or m.rx[-1] > self.n_rx:
            raise NetworkError(f"message {m} outside {self.n_tx}x{self.n_rx} network")

    def decoders(self):
        return range(1, self.n_rx + 1)

    def intended_at(self, z: int) -> FrozenSet[MessageId]:
        return frozenset(self.intended.get(z, ()))


@dataclass(frozen=True)
class RateVector:
    """Map from message ids to non-negative exact rates (bits/channel use)."""

    entries: Mapping[MessageId, Fraction]

    def __post_init__(self):
        for m, r in self.entries.items():
            if r < 0:
                raise NetworkError(f"negative rate for {m}")

    def __getitem__(self, m: MessageId) -> Fraction:
        return self.entries.get(m, Fraction(0))

    def items(self):
        return sorted(self.entries.items(), key=lambda kv: kv[0].sort_key())


def split_legal(original: MessageId, split: MessageId) -> bool:
    """A sub-message must reach at least the original decoders while being
    encoded by no more than the original transmitters."""
    return original.rx_set <= split.rx_set and split.tx_set <= original.tx_set


@dataclass(frozen=True)
class SplitMatrix:
    """Rate-splitting coefficients gamma[(original, split)] in [0, 1].

    For every original message the coefficients over its splits sum to one,
    so total rate is conserved.  A split message may receive mass from
    several originals (columns are unconstrained).
    """

    gamma: Mapping[Tuple[MessageId, MessageId], Fraction]

    @staticmethod
    def identity(messages: Iterable[MessageId]) -> "SplitMatrix":
        return SplitMatrix({(m, m): Fraction(1) for m in messages})

    def originals(self):
        return sorted({o for o, _ in self.gamma}, key=MessageId.sort_key)

    def splits_of(self, original: MessageId):
        return sorted(
            {s for (o, s) in self.gamma if o == original}, key=MessageId.sort_key
        )

    def split_messages(self):
        return sorted({s for _, s in self.gamma}, key=MessageId.sort_key)

    def originals_of(self, split: MessageId):
        return sorted({o for (o, s) in self.gamma if s == split}, key=MessageId.sort_key)


@dataclass
class SplitReport:
    ok: bool
    violations: Tuple[str, ...]


def validate_split_matrix(net: Network, g: SplitMatrix) -> SplitReport:
    """Check legality of every (original, split) pair and row normalisation."""
    violations = []
    for (o, s), coeff in sorted(g.gamma.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key())):
        if o not in net.messages:
            violations.append(f"unknown original message {o}")
        try:
            net.check_message(s)
        except NetworkError as exc:
            violations.append(str(exc))
            continue
        if not split_legal(o, s):
            violations.append(f"illegal split {o} -> {s}")
        if not 0 <= coeff <= 1:
            violations.append(f"coefficient {coeff} for {o} -> {s} outside [0,1]")
    for o in g.originals():
        total = sum((g.gamma[(o, s)] for s in g.splits_of(o)), Fraction(0))
        if total != 1:
            violations.append(f"row sum ≠ 1 for {o}: {total}")
    return SplitReport(ok=not violations, violations=tuple(violations))


def apply_split(g: SplitMatrix, r: RateVector) -> RateVector:
    """Return the split rate vector R' with R'[s] = sum_o gamma[o,s] * R[o]."""
    for m in r.entries:
        if m not in {o for o, _ in g.gamma}:
            raise KeyError(f"rate given for message {m} not present in split matrix")
    out: Dict[MessageId, Fraction] = {}
    for (o, s), coeff in g.gamma.items():
        out[s] = out.get(s, Fraction(0)) + coeff * r[o]
    return RateVector(dict(out))


def all_message_ids(n_tx: int, n_rx: int):
    """Every possible (tx, rx) pair for a network of the given size."""
    tx_sets = [c for k in range(1, n_tx + 1) for c in itertools.combinations(range(1, n_tx + 1), k)]
    rx_sets = [c for k in range(1, n_rx + 1) for c in itertools.combinations(range(1, n_rx + 1), k)]
    return [MessageId(t, r) for t in tx_sets for r in rx_sets]
