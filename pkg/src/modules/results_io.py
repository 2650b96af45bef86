"""Result table CSV: one row per (arm, dist, k, m_e, snr_db) cell."""
import csv
import io
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Union

from modules.channel import TapDistribution
from modules.errors import ResultFormatError
from modules.evaluation import AggregateStats, CellKey, SweepResult
from modules.experiment_config import Arm

logger = logging.getLogger(__name__)

COLUMNS = ("arm", "dist", "n", "m", "p", "k", "me", "snr_db", "trials",
           "recovery_prob", "avg_mse", "recovery_stderr", "mse_stderr", "seed")


@dataclass(frozen=True)
class ResultRow:
    arm: Arm
    dist: TapDistribution
    n: int
    m: int
    p: int
    k: int
    me: int
    snr_db: float
    trials: int
    recovery_prob: float
    avg_mse: float
    recovery_stderr: float
    mse_stderr: float
    seed: int

    @property
    def key(self) -> CellKey:
        return CellKey(self.arm, self.dist, self.k, self.me, self.snr_db)

    @property
    def stats(self) -> AggregateStats:
        return AggregateStats(recovery_probability=self.recovery_prob,
                              average_mse=self.avg_mse,
                              recovery_stderr=self.recovery_stderr,
                              mse_stderr=self.mse_stderr,
                              trials=self.trials)

    def sort_key(self):
        return (self.arm.value, self.dist.value, self.k, self.snr_db, self.me)


def _format(value) -> str:
    # repr is the shortest string that parses back to the same float
    if isinstance(value, (Arm, TapDistribution)):
        return value.value
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_from_sweep(result: SweepResult) -> List[ResultRow]:
    config = result.config
    rows = [
        ResultRow(arm=key.arm, dist=key.dist, n=config.n, m=config.m, p=config.p,
                  k=key.k, me=key.m_e, snr_db=float(key.snr_db), trials=stats.trials,
                  recovery_prob=float(stats.recovery_probability),
                  avg_mse=float(stats.average_mse),
                  recovery_stderr=float(stats.recovery_stderr),
                  mse_stderr=float(stats.mse_stderr),
                  seed=config.master_seed)
        for key, stats in result.cells.items()
    ]
    return sorted(rows, key=ResultRow.sort_key)


def format_results_csv(rows: List[ResultRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in sorted(rows, key=ResultRow.sort_key):
        writer.writerow([_format(getattr(row, column)) for column in COLUMNS])
    return buffer.getvalue()


def write_results_csv(result: SweepResult, path: Union[str, Path]) -> int:
    rows = rows_from_sweep(result)
    Path(path).write_text(format_results_csv(rows), encoding="utf-8")
    logger.info(f"Wrote {len(rows)} result rows to {path}")
    return len(rows)


_PARSERS = {
    "arm": Arm, "dist": TapDistribution,
    "n": int, "m": int, "p": int, "k": int, "me": int, "trials": int, "seed": int,
    "snr_db": float, "recovery_prob": float, "avg_mse": float,
    "recovery_stderr": float, "mse_stderr": float,
}


def parse_results_csv(text: str) -> List[ResultRow]:
    lines = text.splitlines()
    if not lines:
        raise ResultFormatError("line 1: missing header", line_number=1)
    header = next(csv.reader([lines[0]]))
    if tuple(header) != COLUMNS:
        raise ResultFormatError(f"line 1: expected header {','.join(COLUMNS)}", line_number=1)

    rows = []
    for line_number, fields in enumerate(csv.reader(lines[1:]), start=2):
        if not fields:
            continue
        if len(fields) != len(COLUMNS):
            raise ResultFormatError(
                f"line {line_number}: expected {len(COLUMNS)} fields, got {len(fields)}",
                line_number=line_number)
        try:
            values = {column: _PARSERS[column](field) for column, field in zip(COLUMNS, fields)}
        except ValueError as e:
            raise ResultFormatError(f"line {line_number}: {e}", line_number=line_number) from e
        rows.append(ResultRow(**values))
    return rows


def read_results_csv(path: Union[str, Path]) -> List[ResultRow]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ResultFormatError(f"cannot read {path}: {e}") from e
    return parse_results_csv(text)


def table_from_rows(rows: List[ResultRow]) -> Dict[CellKey, AggregateStats]:
    return {row.key: row.stats for row in rows}
