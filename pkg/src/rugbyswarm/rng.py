"""Deterministic named random streams derived from one master seed.

Each subsystem draws from its own stream so that, e.g., drone behaviour can
never perturb the match evolution: swapping strategies leaves the game
bit-identical for a given seed.
"""

from __future__ import annotations

import hashlib
import random


def stream_seed(master: int, label: str) -> int:
    """Derive a child seed from (master, label); stable across processes."""
    digest = hashlib.sha256(f"{master}:{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def make_stream(master: int, label: str) -> random.Random:
    return random.Random(stream_seed(master, label))


class MatchStreams:
    """The match model's private streams: player noise and ball decisions."""

    def __init__(self, seed: int):
        self.seed = seed
        self.players = make_stream(seed, "players")
        self.ball = make_stream(seed, "ball")

    def state(self) -> tuple:
        return (self.seed, self.players.getstate(), self.ball.getstate())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatchStreams):
            return NotImplemented
        return self.state() == other.state()

    def __repr__(self) -> str:
        return f"MatchStreams(seed={self.seed})"
