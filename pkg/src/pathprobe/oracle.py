"""Lazily revealed G(n, p) behind an adjacency-query interface.

Edges are decided one unordered pair at a time: the first query of {u, v}
draws Bernoulli(p) from a pair-keyed hash of (seed, min(u, v), max(u, v)),
so the answer depends only on the pair and the seed, never on when the
pair is first asked.  The oracle keeps an exact ledger of distinct pairs
queried and of positive answers; repeat queries are free.

The oracle is a single-owner mutable object.  Parallel experiments should
give each trial its own oracle with an independently derived seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, InvalidQueryError
from .rng import GOLDEN64, MASK64, mix64, mix64_np

_K1 = 0xD1B54A32D192ED03
_K2 = 0x8CB92BA72F3D8DD7


@dataclass(frozen=True)
class OracleConfig:
    """Static description of a lazily revealed G(n, p) instance.

    Two oracles built from equal configs answer identical query sequences
    identically.  Vertices are the integers 0 .. n-1.
    """

    n: int
    p: float
    seed: int

    def validate(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ConfigurationError(f"vertex count must be a positive integer, got {self.n!r}")
        if not (isinstance(self.p, (int, float)) and 0.0 <= self.p <= 1.0):
            raise ConfigurationError(f"edge probability must lie in [0, 1], got {self.p!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed <= MASK64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")


@dataclass
class RevealedGraph:
    """Snapshot of the interaction so far.

    ``queried_pairs`` is every pair ever asked; ``positive_edges`` is the
    subset answered true.  Both are sorted lists of (min, max) tuples.
    """

    n: int
    positive_edges: list[tuple[int, int]]
    queried_pairs: list[tuple[int, int]]


class LazyOracle:
    """Adaptive adjacency oracle over a seeded G(n, p).

    The Bernoulli threshold is precomputed as ceil(p * 2^53) and compared
    against the top 53 bits of the pair hash, which makes the scalar and
    the vectorised probe paths decide identically.
    """

    __slots__ = ("config", "n", "_thr53", "_base", "_asked", "_asked_order", "_pos")

    def __init__(self, config: OracleConfig):
        config.validate()
        self.config = config
        self.n = config.n
        self._thr53 = math.ceil(config.p * 2.0**53)
        self._base = mix64(config.seed ^ GOLDEN64)
        self._asked: set[int] = set()
        self._asked_order: list[int] = []
        self._pos: set[int] = set()

    @property
    def queries(self) -> int:
        """Number of distinct pairs queried so far."""
        return len(self._asked)

    @property
    def positives(self) -> int:
        """Number of distinct pairs answered positively so far."""
        return len(self._pos)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise InvalidQueryError(f"vertex {v} outside [0, {self.n})")

    def _check_pair(self, u: int, v: int) -> None:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise InvalidQueryError(f"self-pair ({u}, {v}) is not queryable")

    def _h53(self, lo: int, hi: int) -> int:
        h = mix64(self._base ^ ((lo + 1) * _K1 & MASK64))
        h = mix64(h ^ ((hi + 1) * _K2 & MASK64))
        return h >> 11

    def _decide(self, lo: int, hi: int) -> bool:
        return self._h53(lo, hi) < self._thr53

    def query(self, u: int, v: int) -> bool:
        """Answer "is {u, v} an edge?", drawing the pair on first ask."""
        self._check_pair(u, v)
        lo, hi = (u, v) if u < v else (v, u)
        key = lo * self.n + hi
        present = self._decide(lo, hi)
        if key not in self._asked:
            self._asked.add(key)
            self._asked_order.append(key)
            if present:
                self._pos.add(key)
        return present

    def is_revealed(self, u: int, v: int) -> bool:
        """True when the pair {u, v} has already been queried."""
        self._check_pair(u, v)
        lo, hi = (u, v) if u < v else (v, u)
        return lo * self.n + hi in self._asked

    def revealed_edge(self, u: int, v: int) -> bool | None:
        """The cached answer for {u, v}, or None if never queried."""
        if self.is_revealed(u, v):
            lo, hi = (u, v) if u < v else (v, u)
            return self._decide(lo, hi)
        return None

    def probe_first(self, u: int, candidates: np.ndarray) -> tuple[int, int]:
        """Query pairs {u, c} along ``candidates``, stopping at the first
        positive answer.

        Returns (index of the hit within candidates, or -1 if none) and the
        number of previously unqueried pairs consumed.  Pairs after the hit
        are not queried.  Vectorised; equivalent to a loop of `query` calls.
        """
        cand = np.asarray(candidates, dtype=np.int64)
        if cand.size == 0:
            return -1, 0
        if int(cand.min()) < 0 or int(cand.max()) >= self.n:
            raise InvalidQueryError("candidate vertex outside [0, n)")
        if bool((cand == u).any()):
            raise InvalidQueryError("candidate list contains the probe vertex itself")
        self._check_vertex(u)

        uu = np.uint64(u)
        cand_u = cand.astype(np.uint64)
        lo = np.minimum(cand_u, uu)
        hi = np.maximum(cand_u, uu)
        h = mix64_np(np.uint64(self._base) ^ ((lo + np.uint64(1)) * np.uint64(_K1)))
        h = mix64_np(h ^ ((hi + np.uint64(1)) * np.uint64(_K2)))
        h53 = h >> np.uint64(11)
        pos = h53 < np.uint64(self._thr53)

        if bool(pos.any()):
            hit = int(np.argmax(pos))
            m = hit + 1
        else:
            hit = -1
            m = int(cand.size)

        keys = (lo[:m] * np.uint64(self.n) + hi[:m]).astype(np.int64).tolist()
        asked = self._asked
        order = self._asked_order
        fresh = 0
        for k in keys:
            if k not in asked:
                asked.add(k)
                order.append(k)
                fresh += 1
        if hit >= 0:
            self._pos.add(keys[-1])
        return hit, fresh

    def snapshot(self) -> RevealedGraph:
        """Current (positive edges, queried pairs) ledger, sorted."""
        n = self.n
        return RevealedGraph(
            n=n,
            positive_edges=sorted(divmod(k, n) for k in self._pos),
            queried_pairs=sorted(divmod(k, n) for k in self._asked),
        )

    def revealed_in_order(self) -> list[tuple[int, int]]:
        """All queried pairs in first-query order."""
        n = self.n
        return [divmod(k, n) for k in self._asked_order]


def new_oracle(config: OracleConfig) -> LazyOracle:
    """Build a fresh oracle with an empty ledger from a validated config."""
    return LazyOracle(config)
