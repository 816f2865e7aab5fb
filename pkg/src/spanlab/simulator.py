"""Deterministic round-based message passing with bit-exact cost accounting.

Four synchronous modes share one engine:

* ``CONGEST_KT1``      -- messages travel only over graph edges;
* ``CONGESTED_CLIQUE`` -- any node may message any other;
* ``NODE_CONGESTED_CLIQUE`` -- clique links, but each node may emit at most
  ceil(log2 n) messages per round;
* ``GOSSIP_PUSH_PULL`` -- each node contacts at most one partner per round
  and the pair exchanges one bounded message each way.

Every message is charged its payload length plus ceil(log2 id_space) bits
for the sender ID it implicitly carries. Per ordered link and round, the
charged bits may not exceed the link bandwidth B. A run is a pure function
of (config, graph, program, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from spanlab.seeds import node_seed

Adjacency = dict[int, set[int]]


class Mode(str, Enum):
    CONGEST_KT1 = "congest_kt1"
    CONGESTED_CLIQUE = "congested_clique"
    NODE_CONGESTED_CLIQUE = "node_congested_clique"
    GOSSIP_PUSH_PULL = "gossip_push_pull"


class ProtocolViolation(Exception):
    """A program broke a model constraint (edge use, bandwidth, budget, fan-out)."""


def id_bits(id_space: int) -> int:
    """Width of one node ID on the wire."""
    if id_space < 1:
        raise ValueError("id_space must be positive")
    return max(1, math.ceil(math.log2(id_space)))


@dataclass(frozen=True)
class ModelConfig:
    mode: Mode
    id_space: int
    max_rounds: int = 64
    bandwidth_multiplier: int = 2
    link_bandwidth_bits: int | None = None

    @property
    def bandwidth(self) -> int:
        b = self.link_bandwidth_bits
        if b is None:
            b = self.bandwidth_multiplier * id_bits(self.id_space)
        if b < id_bits(self.id_space):
            raise ValueError("link bandwidth below the width of a bare sender ID")
        return b

    def __post_init__(self):
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        _ = self.bandwidth  # validate eagerly


@dataclass(frozen=True)
class Message:
    sender: int
    receiver: int
    payload: str  # bit string, possibly empty
    round: int  # round in which it was sent


@dataclass(frozen=True)
class InitialKnowledge:
    """What a node sees before round one under the KT1 assumption."""

    own_id: int
    neighbor_ids: frozenset[int]
    roster: tuple[int, ...]
    private_seed: int


def kt1_init(adj: Adjacency, id_space: int | None = None, master_seed: int = 0) -> dict[int, InitialKnowledge]:
    """Initial knowledge per node: own ID, neighbor IDs, full roster, private seed.

    Edge colors or any other structure are not revealed; only IDs are.
    """
    roster = tuple(sorted(adj))
    if id_space is None:
        id_space = max(roster)
    if any(not 1 <= v <= id_space for v in roster):
        raise ValueError("node ids must lie in [1, id_space]")
    return {
        v: InitialKnowledge(
            own_id=v,
            neighbor_ids=frozenset(adj[v]),
            roster=roster,
            private_seed=node_seed(master_seed, v),
        )
        for v in roster
    }


class NodeProgram:
    """Deterministic per-node state machine; subclass and override the hooks.

    ``round_start`` is called once per round on every node that has not yet
    finished, with the messages delivered this round, and returns the
    (receiver_id, payload_bits) messages to send. Call :meth:`finish` to
    declare the node's output and stop participating. In gossip mode a node
    may return at most one message per round, and ``on_gossip`` produces the
    reply payload of the contacted partner.
    """

    def __init__(self):
        self.done = False
        self.output: frozenset = frozenset()

    def setup(self, knowledge: InitialKnowledge, rng) -> None:
        self.knowledge = knowledge
        self.rng = rng

    def round_start(self, round_no: int, inbox: list[Message]) -> list[tuple[int, str]]:
        self.finish()
        return []

    def on_gossip(self, round_no: int, sender: int, payload: str) -> str | None:
        return None

    def finish(self, edges=()) -> None:
        self.output = frozenset(tuple(sorted(e)) for e in edges)
        self.done = True


@dataclass
class RunResult:
    rounds_used: int
    status: str  # "terminated" or "max_rounds"
    transcripts: dict[int, tuple[Message, ...]]
    sent_bits: dict[int, int]
    received_bits: dict[int, int]
    total_bits: int
    outputs: dict[int, frozenset]
    mode: Mode
    n: int
    per_message_overhead: int = field(default=0)


def _check_payload(payload: str, limit: int, sender: int) -> None:
    if not isinstance(payload, str) or any(c not in "01" for c in payload):
        raise ProtocolViolation(f"node {sender}: payload must be a bit string")
    if len(payload) > limit:
        raise ProtocolViolation(
            f"node {sender}: payload of {len(payload)} bits exceeds the {limit}-bit limit"
        )


def run(
    config: ModelConfig,
    adj: Adjacency,
    program,
    init: dict[int, InitialKnowledge] | None = None,
    seed: int = 0,
) -> RunResult:
    """Execute one synchronous run and return transcripts plus the bit ledger.

    ``program`` is a zero-argument factory (usually the NodeProgram subclass
    itself); every node runs a fresh instance. Messages sent in round r are
    delivered at the start of round r+1. The run ends when every node has
    finished (any in-flight messages are still delivered and charged) or when
    ``max_rounds`` elapse.
    """
    import random as _random

    if init is None:
        init = kt1_init(adj, config.id_space, seed)
    ids = sorted(adj)
    n = len(ids)
    idbits = id_bits(config.id_space)
    bandwidth = config.bandwidth
    payload_limit = bandwidth - idbits
    budget = max(1, math.ceil(math.log2(n))) if n > 1 else 1

    programs = {}
    for v in ids:
        p = program()
        p.setup(init[v], _random.Random(init[v].private_seed))
        programs[v] = p

    transcripts: dict[int, list[Message]] = {v: [] for v in ids}
    sent_bits = {v: 0 for v in ids}
    received_bits = {v: 0 for v in ids}
    pending: list[Message] = []  # sent this round, delivered next round
    rounds_used = 0
    status = "max_rounds"

    for rnd in range(1, config.max_rounds + 1):
        inbox: dict[int, list[Message]] = {v: [] for v in ids}
        for msg in sorted(pending, key=lambda m: (m.receiver, m.sender)):
            inbox[msg.receiver].append(msg)
            transcripts[msg.receiver].append(msg)
            received_bits[msg.receiver] += len(msg.payload) + idbits
        pending = []

        if all(programs[v].done for v in ids):
            status = "terminated"
            break
        rounds_used = rnd

        link_bits: dict[tuple[int, int], int] = {}
        for v in ids:
            prog = programs[v]
            if prog.done:
                continue
            outgoing = prog.round_start(rnd, inbox[v])
            if config.mode is Mode.GOSSIP_PUSH_PULL and len(outgoing) > 1:
                raise ProtocolViolation(f"node {v}: contacted {len(outgoing)} partners in one round")
            if config.mode is Mode.NODE_CONGESTED_CLIQUE and len(outgoing) > budget:
                raise ProtocolViolation(
                    f"node {v}: sent {len(outgoing)} messages, budget is {budget} per round"
                )
            for receiver, payload in outgoing:
                if receiver == v or receiver not in programs:
                    raise ProtocolViolation(f"node {v}: invalid receiver {receiver}")
                if config.mode in (Mode.CONGEST_KT1, Mode.GOSSIP_PUSH_PULL) and receiver not in adj[v]:
                    raise ProtocolViolation(f"node {v}: ({v}, {receiver}) is not a graph edge")
                _check_payload(payload, payload_limit, v)
                cost = len(payload) + idbits
                if config.mode in (Mode.CONGEST_KT1, Mode.CONGESTED_CLIQUE):
                    used = link_bits.get((v, receiver), 0) + cost
                    if used > bandwidth:
                        raise ProtocolViolation(
                            f"link ({v}, {receiver}): {used} bits in round {rnd} exceed bandwidth {bandwidth}"
                        )
                    link_bits[(v, receiver)] = used
                pending.append(Message(sender=v, receiver=receiver, payload=payload, round=rnd))
                sent_bits[v] += cost
                if config.mode is Mode.GOSSIP_PUSH_PULL:
                    reply = programs[receiver].on_gossip(rnd, v, payload)
                    if reply is not None:
                        _check_payload(reply, payload_limit, receiver)
                        pending.append(Message(sender=receiver, receiver=v, payload=reply, round=rnd))
                        sent_bits[receiver] += len(reply) + idbits

    # Drain: anything still in flight is delivered so the ledger balances.
    for msg in sorted(pending, key=lambda m: (m.receiver, m.sender)):
        transcripts[msg.receiver].append(msg)
        received_bits[msg.receiver] += len(msg.payload) + idbits
    if all(programs[v].done for v in ids):
        status = "terminated"

    total = sum(sent_bits.values())
    if total != sum(received_bits.values()):
        raise AssertionError("ledger imbalance: sent and received totals differ")
    _audit_bandwidth(config, transcripts, idbits, bandwidth)

    return RunResult(
        rounds_used=rounds_used,
        status=status,
        transcripts={v: tuple(msgs) for v, msgs in transcripts.items()},
        sent_bits=sent_bits,
        received_bits=received_bits,
        total_bits=total,
        outputs={v: programs[v].output for v in ids},
        mode=config.mode,
        n=n,
        per_message_overhead=idbits,
    )


def _audit_bandwidth(config: ModelConfig, transcripts, idbits: int, bandwidth: int) -> None:
    """Re-check per-link per-round totals from the delivered record."""
    if config.mode not in (Mode.CONGEST_KT1, Mode.CONGESTED_CLIQUE):
        return
    totals: dict[tuple[int, int, int], int] = {}
    for msgs in transcripts.values():
        for m in msgs:
            key = (m.sender, m.receiver, m.round)
            totals[key] = totals.get(key, 0) + len(m.payload) + idbits
    over = {k: v for k, v in totals.items() if v > bandwidth}
    if over:
        raise AssertionError(f"post-run audit found over-bandwidth links: {over}")


def collect_transcript_key(result: RunResult, node: int) -> str:
    """Canonical, order-stable serialization of one node's received messages."""
    return "|".join(f"{m.round}:{m.sender}:{m.payload}" for m in result.transcripts[node])
