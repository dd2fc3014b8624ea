import io
import math

import numpy as np
import pytest

from ontosim import fastslow, ontodyn, quantize
from ontosim.fixtures import fixture_path

from conftest import make_rng, random_model, two_state_model


class TestSpecialPoint:
    def test_canonical_order(self):
        sp = fastslow.SpecialPoint(pair=(3, 1), trigger=(5, 2))
        assert sp.pair == (1, 3)
        assert sp.trigger == (2, 5)

    def test_self_pair_rejected(self):
        with pytest.raises(fastslow.ModelValidationError):
            fastslow.SpecialPoint(pair=(2, 2), trigger=(0, 0))


class TestModelValidation:
    def test_period_count_mismatch(self):
        with pytest.raises(fastslow.ModelValidationError):
            fastslow.OntologicalModel(slow_count=2, periods=(5,))

    def test_unknown_state_in_point(self):
        with pytest.raises(fastslow.ModelValidationError):
            fastslow.OntologicalModel(
                slow_count=2, periods=(5, 5),
                special_points=(fastslow.SpecialPoint(pair=(0, 2), trigger=(0, 0)),))

    def test_trigger_out_of_range(self):
        with pytest.raises(fastslow.ModelValidationError):
            fastslow.OntologicalModel(
                slow_count=2, periods=(5, 5),
                special_points=(fastslow.SpecialPoint(pair=(0, 1), trigger=(0, 5)),))

    def test_duplicate_point_rejected(self):
        sp = fastslow.SpecialPoint(pair=(0, 1), trigger=(0, 0))
        with pytest.raises(fastslow.ConflictingSwapError):
            fastslow.OntologicalModel(slow_count=2, periods=(4, 4),
                                      special_points=(sp, sp))

    def test_shared_clock_collision_rejected(self):
        # both points would fire when clock 1 reads 2: state 1 gets two swaps
        points = (fastslow.SpecialPoint(pair=(0, 1), trigger=(0, 2)),
                  fastslow.SpecialPoint(pair=(1, 2), trigger=(2, 3)))
        with pytest.raises(fastslow.ConflictingSwapError):
            fastslow.OntologicalModel(slow_count=3, periods=(5, 5, 5),
                                      special_points=points)

    def test_same_pair_distinct_triggers_allowed(self):
        points = (fastslow.SpecialPoint(pair=(0, 1), trigger=(0, 0)),
                  fastslow.SpecialPoint(pair=(0, 1), trigger=(0, 1)))
        m = fastslow.OntologicalModel(slow_count=2, periods=(12, 12),
                                      special_points=points)
        assert len(m.special_points) == 2

    def test_small_period_warns(self):
        with pytest.warns(fastslow.FastPeriodWarning):
            fastslow.OntologicalModel(slow_count=1, periods=(3,))


class TestStep:
    def test_free_rotation(self):
        m = fastslow.OntologicalModel(slow_count=1, periods=(10,))
        out = fastslow.step(m, fastslow.ClassicalConfig(slow=0, phases=(3,)))
        assert out == fastslow.ClassicalConfig(slow=0, phases=(4,))

    def test_hand_traced_swap(self):
        m = two_state_model(2, 3)
        out = fastslow.step(m, fastslow.ClassicalConfig(slow=0, phases=(1, 2)))
        assert out == fastslow.ClassicalConfig(slow=1, phases=(0, 0))

    def test_poincare_recursion(self):
        m = fastslow.OntologicalModel(
            slow_count=2, periods=(3, 5),
            special_points=(fastslow.SpecialPoint(pair=(0, 1), trigger=(1, 2)),))
        order = math.lcm(*fastslow.check_bijectivity(m).ranks)
        start = fastslow.ClassicalConfig(slow=0, phases=(2, 4))
        cfg = start
        for _ in range(order):
            cfg = fastslow.step(m, cfg)
        assert cfg == start
        assert (m.ontic_space_size * order) % order == 0  # N * prod(periods) * L form

    def test_bad_config_rejected(self):
        m = two_state_model(4, 4)
        with pytest.raises(fastslow.ConfigError):
            fastslow.step(m, fastslow.ClassicalConfig(slow=2, phases=(0, 0)))
        with pytest.raises(fastslow.ConfigError):
            fastslow.step(m, fastslow.ClassicalConfig(slow=0, phases=(0, 4)))
        with pytest.raises(fastslow.ConfigError):
            fastslow.step(m, fastslow.ClassicalConfig(slow=0, phases=(0,)))


class TestCheckBijectivity:
    def test_free_single_state(self):
        m = fastslow.OntologicalModel(slow_count=1, periods=(7,))
        assert fastslow.check_bijectivity(m).ranks == (7,)

    def test_two_state_point(self):
        m = fastslow.OntologicalModel(
            slow_count=2, periods=(3, 5),
            special_points=(fastslow.SpecialPoint(pair=(0, 1), trigger=(0, 0)),))
        d = fastslow.check_bijectivity(m)
        assert sum(d.ranks) == 2 * 15

    def test_conflicting_table_detected(self):
        sp = fastslow.SpecialPoint(pair=(0, 1), trigger=(0, 0))
        bad = fastslow.OntologicalModel(slow_count=2, periods=(2, 2),
                                        special_points=(sp, sp), validate=False)
        with pytest.raises(fastslow.ConflictingSwapError):
            fastslow.check_bijectivity(bad)

    def test_reversibility_property(self):
        rng = make_rng(11)
        for _ in range(25):
            m = random_model(rng)
            d = fastslow.check_bijectivity(m)
            assert sum(d.ranks) == m.ontic_space_size

    def test_size_cap(self):
        m = fastslow.OntologicalModel(slow_count=1, periods=(fastslow.ENUMERATION_CAP + 1,))
        with pytest.raises(ontodyn.SizeCapError):
            fastslow.check_bijectivity(m)


class TestFreeSpectrumStructure:
    def test_cycles_have_joint_period(self):
        rng = make_rng(12)
        for _ in range(8):
            n = int(rng.integers(1, 3))
            periods = tuple(int(rng.integers(2, 9)) for _ in range(n))
            if np.prod(periods) > 512:
                continue
            m = fastslow.OntologicalModel(slow_count=n, periods=periods)
            d = fastslow.check_bijectivity(m)
            joint = math.lcm(*periods)
            assert set(d.ranks) == {joint}

    def test_enumerated_phases_match_direct_sum(self):
        # eigenphase multiset of the step map == exp(-1j * direct-sum levels)
        for n, periods in [(1, (4, 6)), (2, (2, 3)), (1, (5, 5)), (2, (8, 12))]:
            if n != len(periods):
                periods = periods[:n] if n < len(periods) else periods + (3,) * (n - len(periods))
            m = fastslow.OntologicalModel(slow_count=len(periods), periods=periods)
            d = fastslow.check_bijectivity(m)
            enumerated = np.concatenate([
                ontodyn.cycle_spectrum(r).eigenphases for r in
                [len(c) for c in d.cycles]])
            direct = np.exp(-1j * quantize.free_energy_levels(m))
            enumerated = np.sort_complex(np.round(enumerated, 10))
            direct = np.sort_complex(np.round(direct, 10))
            assert np.abs(enumerated - direct).max() < 1e-10

    def test_ground_level_unique_per_slow_state(self):
        for periods in [(4, 6), (5, 7, 2), (9,)]:
            m = fastslow.OntologicalModel(slow_count=len(periods), periods=periods)
            levels = quantize.free_energy_levels(m)
            zeros = np.sum(np.abs(levels) < 1e-12)
            assert zeros == m.slow_count
            positive = levels[levels > 1e-12]
            assert positive.min() >= 2 * np.pi / max(periods) - 1e-12


class TestEnsembles:
    def test_free_model_stays_put(self):
        m = fastslow.OntologicalModel(slow_count=2, periods=(11, 13))
        freq = fastslow.run_ensemble(m, 0, 20, 50, seed=1)
        assert np.array_equal(freq[:, 0], np.ones(21))

    def test_seed_determinism(self):
        m = two_state_model(10, 7)
        a = fastslow.run_ensemble(m, 0, 30, 500, seed=99)
        b = fastslow.run_ensemble(m, 0, 30, 500, seed=99)
        assert np.array_equal(a, b)
        c = fastslow.run_ensemble(m, 0, 30, 500, seed=100)
        assert not np.array_equal(a, c)

    def test_matches_exact_enumeration_within_binomial_error(self):
        m = two_state_model(10, 7)
        samples = 10_000
        freq = fastslow.run_ensemble(m, 0, 35, samples, seed=5)
        exact = fastslow.enumerate_exact(m, 0, 35).fractions
        sigma = np.sqrt(np.maximum(exact * (1 - exact), 1e-12) / samples)
        assert np.all(np.abs(freq - exact) <= 4 * sigma + 1e-12)

    def test_full_flip_after_joint_period(self):
        m = two_state_model(5, 4)  # coprime
        freq = fastslow.run_ensemble(m, 0, 20, 200, seed=3)
        assert freq[20, 1] == 1.0


class TestEnumerateExact:
    def test_free_model(self):
        m = fastslow.OntologicalModel(slow_count=3, periods=(4, 3, 2))
        occ = fastslow.enumerate_exact(m, 1, 10)
        assert np.array_equal(occ.counts[:, 1], np.full(11, occ.total))

    def test_two_state_linear_flip_counts(self):
        # coprime clocks hit the trigger exactly once per joint period, and
        # the hit times sweep every residue: the flipped count is exactly t.
        m = two_state_model(10, 7)
        occ = fastslow.enumerate_exact(m, 0, 70)
        assert occ.total == 70
        assert np.array_equal(occ.counts[:, 1], np.arange(71))
        half = (10 * 7) // 2
        assert occ.counts[half, 1] * 1 == half  # exact fraction half/(N0*N1)

    def test_two_points_flip_twice_per_period(self):
        m = fastslow.OntologicalModel(
            slow_count=2, periods=(5, 3),
            special_points=(fastslow.SpecialPoint(pair=(0, 1), trigger=(0, 0)),
                            fastslow.SpecialPoint(pair=(0, 1), trigger=(2, 1)),))
        joint = 15
        phases = np.stack(np.meshgrid(np.arange(5), np.arange(3), indexing="ij"),
                          axis=-1).reshape(-1, 2).astype(np.int64)
        slow = np.zeros(15, dtype=np.int64)
        flips = np.zeros(15, dtype=np.int64)
        for _ in range(joint):
            before = slow.copy()
            fastslow._advance_and_swap(m, slow, phases)
            flips += before != slow
        assert np.all(flips == 2)

    def test_size_cap(self):
        m = fastslow.OntologicalModel(slow_count=1, periods=(fastslow.ENUMERATION_CAP + 1,))
        with pytest.raises(ontodyn.SizeCapError):
            fastslow.enumerate_exact(m, 0, 1)


class TestSerialization:
    def test_fixture_roundtrip(self):
        m = fastslow.load_model(fixture_path("two_state_10_7.json"))
        assert m.slow_count == 2 and m.periods == (10, 7)
        again = fastslow.model_from_json(fastslow.model_to_json(m))
        assert again == m

    def test_missing_field(self):
        with pytest.raises(ValueError):
            fastslow.model_from_json('{"periods": [3]}')

    def test_ensemble_csv_header(self):
        buf = io.StringIO()
        fastslow.write_ensemble_csv(np.array([[1.0, 0.0], [0.5, 0.5]]), buf)
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == "t,state_0_freq,state_1_freq"
        assert lines[1] == "0,1.0,0.0"


class TestFlatIndexing:
    def test_documented_order(self):
        m = fastslow.OntologicalModel(slow_count=2, periods=(3, 4))
        # slow major, then clock 0, then clock 1
        assert fastslow.flat_config(m, 1, (2, 3)) == 1 * 12 + 2 * 4 + 3
        cfg = fastslow.unflatten_config(m, 23)
        assert cfg == fastslow.ClassicalConfig(slow=1, phases=(2, 3))
        for flat in range(m.ontic_space_size):
            c = fastslow.unflatten_config(m, flat)
            assert fastslow.flat_config(m, c.slow, c.phases) == flat
