import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import recurwalk.montecarlo as mc
from recurwalk.alias import AliasTable
from recurwalk.engine import return_series
from recurwalk.errors import AsymmetricLaw
from recurwalk.lattice import LatticePoint, dirac, validate_law
from recurwalk.laws import lazy_walk, simple_walk
from recurwalk.montecarlo import (
    SimConfig,
    binomial_sigma,
    first_return_histogram,
    meeting_count_moments,
    sample_step,
    simulate_meetings,
    simulate_returns,
)
from recurwalk.rng import SplitMix64, stream_key, stream_keys, stream_outputs
from test_lattice import step_laws


class TestGenerator:
    def test_splitmix64_reference_outputs(self):
        # Published SplitMix64 outputs for state 0.
        g = SplitMix64(0)
        assert [g.next_u64() for _ in range(3)] == [
            0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]

    def test_golden_keys(self):
        assert stream_key(42, 0, 0) == 0xBD2C3E83662D3FAB
        assert stream_key(42, 1, 0) == 0x3165819285DF2854
        assert stream_key(42, 0, 1) == 0x801231A36150F7D5

    def test_vector_matches_scalar(self):
        trials = np.arange(0, 50, dtype=np.uint64)
        keys = stream_keys(2024, trials, walker=1)
        for t in (0, 7, 49):
            assert int(keys[t]) == stream_key(2024, t, 1)
            g = SplitMix64(int(keys[t]))
            assert [g.next_u64() for _ in range(5)] == [int(stream_outputs(keys, k)[t]) for k in range(5)]


class TestAliasTable:
    @settings(max_examples=100)
    @given(step_laws(max_atoms=8, max_weight=50))
    def test_exact_atom_probabilities(self, law):
        table = AliasTable(law)
        got = table.atom_probabilities()
        assert got == [Fraction(w, law.denominator) for _, w in law.atoms]

    def test_golden_lazy_table(self):
        table = AliasTable(lazy_walk())
        assert table.accept == [5, 5, 6, 5, 5]
        assert table.alias == [2, 2, 2, 2, 2]

    def test_vector_matches_scalar(self):
        table = AliasTable(lazy_walk())
        u = stream_outputs(stream_keys(5, np.arange(1000, dtype=np.uint64)), 0)
        idx = table.indices(u)
        assert [table.index(int(v)) for v in u] == idx.tolist()


class TestSampleStep:
    def test_dirac(self):
        g = SplitMix64(1)
        assert all(sample_step(dirac(), g) == (0, 0) for _ in range(20))

    def test_golden_sequence(self, simple):
        g = SplitMix64.for_trial(42, 0)
        table = AliasTable(simple)
        draws = [tuple(sample_step(table, g)) for _ in range(8)]
        assert draws == [(-1, 0), (1, 0), (-1, 0), (0, -1), (-1, 0), (1, 0), (-1, 0), (-1, 0)]

    def test_same_seed_same_sequence(self, simple):
        a, b = SplitMix64.for_trial(9, 3), SplitMix64.for_trial(9, 3)
        assert [sample_step(simple, a) for _ in range(50)] == [sample_step(simple, b) for _ in range(50)]

    def test_frequencies(self, simple):
        N = 10 ** 6
        table = AliasTable(simple)
        u = stream_outputs(stream_keys(77, np.arange(N, dtype=np.uint64)), 0)
        counts = Counter(table.indices(u).tolist())
        sigma = math.sqrt(0.25 * 0.75 / N)
        for i in range(4):
            assert abs(counts[i] / N - 0.25) <= 4 * sigma


def test_config_validation(simple):
    with pytest.raises(ValueError):
        SimConfig(-1, 10, 5, simple)
    with pytest.raises(ValueError):
        SimConfig(0, 0, 5, simple)
    with pytest.raises(ValueError):
        SimConfig(0, 10, -1, simple)


class TestReturns:
    def test_horizon_zero(self, simple):
        stats = simulate_returns(SimConfig(1, 100, 0, simple))
        assert stats.frequencies == [1.0]

    def test_dirac(self):
        stats = simulate_returns(SimConfig(1, 100, 6, dirac()))
        assert stats.frequencies == [1.0] * 7
        assert stats.mean_returns == 6

    def test_matches_exact(self, laws):
        trials = 200_000
        for law in laws.values():
            stats = simulate_returns(SimConfig(11, trials, 12, law))
            exact = [float(r.p_return) for r in return_series(law, 12)]
            inside = sum(abs(f - p) <= 4 * binomial_sigma(p, trials) or p in (0, 1) and f == p
                         for f, p in zip(stats.frequencies, exact))
            assert inside == 13

    def test_batching_does_not_change_results(self, simple, monkeypatch):
        cfg = SimConfig(3, 1000, 10, simple)
        full = simulate_returns(cfg)
        monkeypatch.setattr(mc, "BATCH", 37)
        assert simulate_returns(cfg) == full


class TestMeetings:
    def test_dirac(self):
        stats = simulate_meetings(SimConfig(1, 50, 9, dirac()))
        assert stats.mean_meetings == 10
        assert stats.meeting_counts == [10] * 50

    def test_against_difference_walk(self, simple):
        trials, horizon = 100_000, 32
        stats = simulate_meetings(SimConfig(5, trials, horizon, simple))
        mean, var = meeting_count_moments(simple, horizon)
        assert abs(stats.mean_meetings - float(mean)) <= 4 * math.sqrt(float(var) / trials)
        assert 0 <= stats.fraction_met_at_least_once <= 1
        assert stats.mean_meetings >= stats.fraction_met_at_least_once

    def test_horizon_doubling_increases_mean(self, simple):
        short = simulate_meetings(SimConfig(8, 5000, 20, simple))
        long = simulate_meetings(SimConfig(8, 5000, 40, simple))
        assert long.mean_meetings > short.mean_meetings
        # same streams: each trial's count can only grow with the horizon
        assert all(b >= a for a, b in zip(short.meeting_counts, long.meeting_counts))

    def test_moments_small_case(self, simple):
        # horizon 2: M = 1 + 1{D_1=0} + 1{D_2=0}; D_1 = 0 w.p. 1/4, D_2 = 0 w.p. 9/64.
        mean, var = meeting_count_moments(simple, 2)
        p1, p2 = Fraction(1, 4), Fraction(9, 64)
        second = 1 + 3 * p1 + 3 * p2 + 2 * p1 * p1
        assert mean == 1 + p1 + p2
        assert var == second - mean ** 2


class TestFirstReturn:
    def test_first_return_at_two(self, simple):
        trials = 200_000
        hist = first_return_histogram(SimConfig(21, trials, 2, simple))
        assert abs(hist.counts[2] / trials - 0.25) <= 4 * binomial_sigma(0.25, trials)
        assert 1 not in hist.counts

    def test_dirac(self):
        hist = first_return_histogram(SimConfig(1, 40, 5, dirac()))
        assert hist.counts == {1: 40}
        assert hist.overflow == 0

    def test_overflow_nonempty(self, simple):
        hist = first_return_histogram(SimConfig(4, 10_000, 100, simple))
        assert hist.overflow > 0
        assert sum(hist.counts.values()) + hist.overflow == 10_000

    def test_rejects_asymmetric(self):
        with pytest.raises(AsymmetricLaw):
            first_return_histogram(SimConfig(1, 10, 5, validate_law({(1, 0): 1}, 1)))
