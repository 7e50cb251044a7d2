"""One-pass online play: the algorithm interface and the stream driver.

An algorithm only ever sees the current item. The driver hands items over
one at a time, records each decision before revealing the next item and
rejects any decision that would overfill a bin or name a bad bin.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .core import REJECT, Instance, Packing, Weight

#: Slot labels used in transcripts besides an integer class index.
SMALL = "SMALL"
NONE = "NONE"


class SimulationError(RuntimeError):
    """The online algorithm broke the one-pass contract."""


class OnlineAlgorithm:
    """Base class for online dual bin packing algorithms.

    Subclasses implement :meth:`decide`. ``label`` can be set during
    :meth:`decide` to annotate the transcript (for example with the slot
    class that was used).
    """

    name = "online"

    def reset(self, m: int, n: int) -> None:
        self.m = m
        self.n = n
        self.label = NONE

    def decide(self, w: Weight) -> Optional[int]:
        raise NotImplementedError

    def finish(self) -> None:
        """Called once after the last item."""


@dataclass
class Transcript:
    """Decisions in arrival order: ``(item, bin or None, label)``."""

    m: int
    entries: list[tuple[int, Optional[int], object]] = field(default_factory=list)
    advice_bits_used: int = 0

    @property
    def packing(self) -> Packing:
        return Packing(tuple(d for _, d, _ in self.entries), self.m)

    @property
    def packed_count(self) -> int:
        return sum(1 for _, d, _ in self.entries if d is not REJECT)

    def to_text(self) -> str:
        lines = ["# item decision class"]
        for i, d, lab in self.entries:
            lines.append(f"{i} {'REJECT' if d is REJECT else d} {lab}")
        return "\n".join(lines) + "\n"


class OnlineRun:
    """Drive ``alg`` over a stream, one item per :meth:`feed` call."""

    def __init__(self, alg: OnlineAlgorithm, m: int, n: int):
        self.alg = alg
        self.m = m
        self.n = n
        self.loads = [Weight(0)] * m
        self.contents: list[list[int]] = [[] for _ in range(m)]
        self.transcript = Transcript(m)
        alg.reset(m, n)

    def feed(self, w: Weight) -> Optional[int]:
        i = len(self.transcript.entries)
        if i >= self.n:
            raise SimulationError(f"stream announced {self.n} items but more arrived")
        self.alg.label = NONE
        d = self.alg.decide(w)
        if d is not REJECT:
            if not (isinstance(d, int) and 0 <= d < self.m):
                raise SimulationError(f"item {i}: invalid bin {d!r}")
            load = self.loads[d] + w
            if load > 1:
                raise SimulationError(f"item {i}: bin {d} would overflow")
            self.loads[d] = load
            self.contents[d].append(i)
        self.transcript.entries.append((i, d, self.alg.label))
        return d

    def close(self) -> Transcript:
        if len(self.transcript.entries) != self.n:
            raise SimulationError(
                f"stream ended after {len(self.transcript.entries)} of {self.n} items"
            )
        self.alg.finish()
        return self.transcript


def run_online(alg: OnlineAlgorithm, inst: Instance) -> Transcript:
    run = OnlineRun(alg, inst.m, inst.n)
    for w in inst.weights:
        run.feed(w)
    return run.close()


def replay(inst: Instance, transcript: Transcript) -> Packing:
    """Apply the recorded decisions to ``inst`` through a fresh driver."""
    return run_online(Replay(transcript.packing.assignment), inst).packing


class FirstFitOnline(OnlineAlgorithm):
    name = "ff"

    def reset(self, m, n):
        super().reset(m, n)
        self.loads: list[Weight] = [Weight(0)] * m

    def decide(self, w):
        for b, load in enumerate(self.loads):
            if load + w <= 1:
                self.loads[b] = load + w
                return b
        return REJECT


class RandomPlacement(OnlineAlgorithm):
    """Uniform choice among the bins that fit plus the option to reject."""

    name = "random"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def reset(self, m, n):
        super().reset(m, n)
        self.rng = random.Random(self.seed)
        self.loads: list[Weight] = [Weight(0)] * m

    def decide(self, w):
        options: list[Optional[int]] = [b for b, load in enumerate(self.loads) if load + w <= 1]
        options.append(REJECT)
        d = self.rng.choice(options)
        if d is not REJECT:
            self.loads[d] = self.loads[d] + w
        return d


class Replay(OnlineAlgorithm):
    """Replays a precomputed assignment; the assignment acts as full advice."""

    name = "replay"

    def __init__(self, assignment: Sequence[Optional[int]]):
        self.assignment = tuple(assignment)

    def reset(self, m, n):
        super().reset(m, n)
        self.pos = 0

    def decide(self, w):
        d = self.assignment[self.pos]
        self.pos += 1
        return d


def prefix_consistent(make_alg, inst: Instance, transcript: Transcript, prefixes: Iterable[int]) -> bool:
    """Check that decisions do not depend on items not yet revealed.

    A fresh algorithm from ``make_alg()`` is fed only the first ``p`` items
    of the stream (the announced length stays ``n``); its decisions must
    equal the first ``p`` decisions of ``transcript``.
    """
    full = [(i, d) for i, d, _ in transcript.entries]
    for p in prefixes:
        run = OnlineRun(make_alg(), inst.m, inst.n)
        for w in inst.weights[:p]:
            run.feed(w)
        got = [(i, d) for i, d, _ in run.transcript.entries]
        if got != full[:p]:
            return False
    return True
