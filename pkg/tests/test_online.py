import pytest

from dualpack.core import Instance, Weight
from dualpack.greedy import first_fit
from dualpack.online import (
    FirstFitOnline,
    OnlineAlgorithm,
    OnlineRun,
    RandomPlacement,
    Replay,
    SimulationError,
    prefix_consistent,
    replay,
    run_online,
)

INST = Instance((Weight(3, 2), Weight(1, 1), Weight(1, 1), Weight(1, 2)), 2)


class Peeker(OnlineAlgorithm):
    """Counts items and rejects all of them."""

    def reset(self, m, n):
        super().reset(m, n)
        self.seen = 0

    def decide(self, w):
        self.seen += 1
        return None


class Overfiller(OnlineAlgorithm):
    def decide(self, w):
        return 0


def test_online_ff_matches_offline_ff():
    t = run_online(FirstFitOnline(), INST)
    assert t.packing == first_fit(INST)
    assert replay(INST, t) == t.packing


def test_driver_rejects_overflow_and_bad_bins():
    with pytest.raises(SimulationError):
        run_online(Overfiller(), INST)
    with pytest.raises(SimulationError):
        run_online(Replay([5, 0, 0, 0]), INST)


def test_driver_counts_items():
    run = OnlineRun(FirstFitOnline(), 1, 1)
    run.feed(Weight(1, 1))
    with pytest.raises(SimulationError):
        run.feed(Weight(1, 1))
    short = OnlineRun(FirstFitOnline(), 1, 2)
    short.feed(Weight(1, 1))
    with pytest.raises(SimulationError):
        short.close()


def test_random_placement_is_feasible_and_seeded():
    a = run_online(RandomPlacement(4), INST).packing
    b = run_online(RandomPlacement(4), INST).packing
    assert a == b


def test_prefix_check():
    t = run_online(FirstFitOnline(), INST)
    assert prefix_consistent(FirstFitOnline, INST, t, range(INST.n + 1))
    assert not prefix_consistent(lambda: Replay([None] * 4), INST, t, [2])
    assert prefix_consistent(Peeker, INST, run_online(Peeker(), INST), range(5))


def test_transcript_text():
    text = run_online(FirstFitOnline(), Instance((Weight(1), Weight(1)), 1)).to_text()
    assert text.splitlines()[1:] == ["0 0 NONE", "1 REJECT NONE"]
