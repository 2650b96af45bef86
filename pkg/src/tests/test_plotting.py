"""Tests for SVG rendering of result tables and channels."""
import os
import re
import sys
import tempfile

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import unittest  # noqa: E402

import numpy as np  # noqa: E402

from modules.channel import TapDistribution, generate_sparse_channel  # noqa: E402
from modules.errors import ResultFormatError  # noqa: E402
from modules.experiment_config import Arm  # noqa: E402
from modules.plotting import group_series, plot_channel, plot_results  # noqa: E402
from modules.results_io import ResultRow  # noqa: E402

UNIFORM = TapDistribution.EQUAL_MAGNITUDE_UNIFORM


def example_rows():
    """Three arms over M_e = 8..56 at one (dist, K, SNR): 21 rows."""
    rows = []
    for arm_index, arm in enumerate((Arm.TRADITIONAL_SHORT, Arm.PROPOSED, Arm.BOUND_LONG)):
        for me in range(8, 57, 8):
            prob = 0.2 if arm is Arm.TRADITIONAL_SHORT else min(1.0, 0.2 + arm_index * me / 80)
            rows.append(ResultRow(arm=arm, dist=UNIFORM, n=96, m=32, p=8, k=4, me=me,
                                  snr_db=20.0, trials=500, recovery_prob=prob,
                                  avg_mse=0.01 / (1 + arm_index * me), recovery_stderr=0.01,
                                  mse_stderr=0.001, seed=42))
    return rows


class TestPlotResults(unittest.TestCase):

    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def path(self, name: str) -> str:
        return os.path.join(self.tmp.name, name)

    def test_one_series_per_arm(self) -> None:
        rows = example_rows()
        self.assertEqual(len(rows), 21)

        count = plot_results(rows, self.path("recovery.svg"), "recovery_prob")
        with open(self.path("recovery.svg"), encoding="utf-8") as f:
            svg = f.read()

        self.assertEqual(count, 3)
        self.assertEqual(sorted(set(re.findall(r'id="(series-\d+)"', svg))),
                         ["series-0", "series-1", "series-2"])

    def test_series_sorted_by_extracted_length(self) -> None:
        rows = list(reversed(example_rows()))
        series = group_series(rows, "avg_mse")
        for xs, _ in series.values():
            np.testing.assert_array_equal(xs, np.arange(8, 57, 8))

    def test_output_is_byte_identical(self) -> None:
        for metric in ("recovery_prob", "avg_mse"):
            plot_results(example_rows(), self.path("a.svg"), metric)
            plot_results(example_rows(), self.path("b.svg"), metric)
            with open(self.path("a.svg"), "rb") as a, open(self.path("b.svg"), "rb") as b:
                self.assertEqual(a.read(), b.read())

    def test_empty_rows_write_nothing(self) -> None:
        with self.assertRaises(ResultFormatError):
            plot_results([], self.path("empty.svg"), "recovery_prob")
        self.assertFalse(os.path.exists(self.path("empty.svg")))

    def test_unknown_metric(self) -> None:
        with self.assertRaises(ValueError):
            group_series(example_rows(), "iterations")

    def test_channel_plot(self) -> None:
        h = generate_sparse_channel(100, 5, UNIFORM, np.random.default_rng(0))
        plot_channel(h, self.path("channel.svg"))
        with open(self.path("channel.svg"), encoding="utf-8") as f:
            self.assertTrue(f.read().lstrip().startswith("<?xml"))


if __name__ == "__main__":
    unittest.main()
