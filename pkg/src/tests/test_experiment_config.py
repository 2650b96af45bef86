"""Tests for the experiment config model and the key = value reader."""
import math
import os
import sys
import tempfile

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import unittest  # noqa: E402

from modules.channel import TapDistribution  # noqa: E402
from modules.errors import InvalidConfigError  # noqa: E402
from modules.experiment_config import (  # noqa: E402
    Arm,
    ExperimentConfig,
    load_experiment_config,
    parse_config_text,
)
from modules.sensing import NoiseMode  # noqa: E402

CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "configs")

SAMPLE = """
# equal-magnitude taps at 20 dB
n = 96
m = 32
p = 8
k_list = 4
me_list = 8, 16, 24   # extracted lengths
snr_db_list = 20
dist = uniform, gaussian
trials = 10
master_seed = 42
noise_mode = Independent
arms = Proposed, BoundLong
"""


class TestExperimentConfig(unittest.TestCase):

    def test_defaults(self) -> None:
        config = ExperimentConfig.create()

        self.assertEqual((config.n, config.m, config.p), (96, 32, 8))
        self.assertEqual(config.me_list, [0, 8, 16, 24, 32, 40, 48, 56])
        self.assertEqual(config.noise_mode, NoiseMode.SUBSAMPLE)
        self.assertEqual(config.training_rows, 88)

    def test_branch_count_must_divide_length(self) -> None:
        with self.assertRaises(InvalidConfigError) as ctx:
            ExperimentConfig.create(p=7)
        self.assertEqual(ctx.exception.key, "p")

    def test_sparsity_range(self) -> None:
        with self.assertRaises(InvalidConfigError) as ctx:
            ExperimentConfig.create(k_list=[4, 97])
        self.assertEqual(ctx.exception.key, "k_list")

    def test_extracted_length_capacity(self) -> None:
        ExperimentConfig.create(m=3, n=6, p=2, k_list=[1], me_list=[6])
        with self.assertRaises(InvalidConfigError) as ctx:
            ExperimentConfig.create(m=3, n=6, p=2, k_list=[1], me_list=[7])
        self.assertEqual(ctx.exception.key, "me_list")

    def test_single_branch_allows_no_extraction(self) -> None:
        ExperimentConfig.create(p=1, me_list=[0])
        with self.assertRaises(InvalidConfigError):
            ExperimentConfig.create(p=1, me_list=[0, 8])

    def test_field_errors_name_the_key(self) -> None:
        cases = {
            "trials": {"trials": 0},
            "me_list": {"me_list": [-1]},
            "snr_db_list": {"snr_db_list": [math.nan]},
            "k_list": {"k_list": []},
            "master_seed": {"master_seed": -1},
            "dist": {"dist": ["laplace"]},
        }
        for key, fields in cases.items():
            with self.subTest(key=key):
                with self.assertRaises(InvalidConfigError) as ctx:
                    ExperimentConfig.create(**fields)
                self.assertEqual(ctx.exception.key, key)
                self.assertIn(key, str(ctx.exception))

    def test_duplicates_rejected(self) -> None:
        with self.assertRaises(InvalidConfigError):
            ExperimentConfig.create(me_list=[8, 8])

    def test_infinite_snr_allowed(self) -> None:
        config = ExperimentConfig.create(snr_db_list=["inf"])
        self.assertEqual(config.snr_db_list, [math.inf])

    def test_negative_infinite_snr_rejected(self) -> None:
        for value in (-math.inf, "-inf"):
            with self.subTest(value=value):
                with self.assertRaises(InvalidConfigError) as ctx:
                    ExperimentConfig.create(snr_db_list=[20.0, value])
                self.assertEqual(ctx.exception.key, "snr_db_list")

    def test_overrides(self) -> None:
        config = ExperimentConfig.create(trials=10)
        updated = config.with_overrides(trials=3, master_seed=None)

        self.assertEqual(updated.trials, 3)
        self.assertEqual(updated.master_seed, config.master_seed)
        self.assertIs(config.with_overrides(trials=None), config)
        with self.assertRaises(InvalidConfigError):
            config.with_overrides(trials=0)


class TestParseConfigText(unittest.TestCase):

    def test_sample(self) -> None:
        fields = parse_config_text(SAMPLE)
        self.assertEqual(fields["me_list"], ["8", "16", "24"])
        self.assertEqual(fields["n"], "96")

        config = ExperimentConfig.create(**fields)
        self.assertEqual(config.dist, [TapDistribution.EQUAL_MAGNITUDE_UNIFORM,
                                       TapDistribution.GAUSSIAN])
        self.assertEqual(config.arms, [Arm.PROPOSED, Arm.BOUND_LONG])
        self.assertEqual(config.noise_mode, NoiseMode.INDEPENDENT)
        self.assertEqual(config.snr_db_list, [20.0])

    def test_unknown_key(self) -> None:
        with self.assertRaises(InvalidConfigError) as ctx:
            parse_config_text("n = 96\nbranches = 8\n")
        self.assertEqual(ctx.exception.key, "branches")

    def test_duplicate_key(self) -> None:
        with self.assertRaises(InvalidConfigError) as ctx:
            parse_config_text("n = 96\nn = 48\n")
        self.assertIn("line 2", str(ctx.exception))

    def test_malformed_line(self) -> None:
        with self.assertRaises(InvalidConfigError) as ctx:
            parse_config_text("n = 96\nm 32\n")
        self.assertIn("line 2", str(ctx.exception))

    def test_empty_value(self) -> None:
        with self.assertRaises(InvalidConfigError):
            parse_config_text("trials =\n")


class TestLoadExperimentConfig(unittest.TestCase):

    def test_round_trip_through_file(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "sweep.conf")
            with open(path, "w", encoding="utf-8") as f:
                f.write(SAMPLE)
            config = load_experiment_config(path)
        self.assertEqual(config.trials, 10)
        self.assertEqual(config.master_seed, 42)

    def test_missing_file(self) -> None:
        with self.assertRaises(InvalidConfigError):
            load_experiment_config("/nonexistent/sweep.conf")

    def test_shipped_presets_load(self) -> None:
        for name in ("default", "uniform_taps", "gaussian_taps", "sparsity"):
            with self.subTest(name=name):
                config = load_experiment_config(os.path.join(CONFIG_DIR, f"{name}.conf"))
                self.assertEqual(config.training_rows, 88)


if __name__ == "__main__":
    unittest.main()
