"""Deterministic derivation of independent random substreams.

Everything random in this package is keyed by a 64-bit master seed plus a
purpose label. Children are derived by hashing ``"<master>/<label>"`` with
SHA-256 and taking the first 8 bytes, so substreams are stable across runs,
platforms and Python versions, and varying one substream (say, the ID
assignment) never perturbs another (say, the edge sampling).
"""

import hashlib


def subseed(master: int, label: str) -> int:
    """Derive a 64-bit child seed from ``master`` for the given purpose."""
    digest = hashlib.sha256(f"{master}/{label}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def node_seed(master: int, node_id: int) -> int:
    """Private-randomness seed for a single node, shared across entry points.

    The centralized, two-party and simulator-hosted algorithms all draw a
    node's coins from this same stream, which is what makes their outputs
    comparable run-for-run.
    """
    return subseed(master, f"node/{node_id}")
