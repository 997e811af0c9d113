# prover/services/bench.py
"""벤치마크 하네스: 문제마다 한 행, CSV `problem,status,steps,millis`."""
from __future__ import annotations

import csv
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, List, Optional, TextIO, Tuple

from prover.log_utils import log_error, log_success
from prover.services.config_runtime import get_conf_float, get_conf_int
from prover.services.errors import ProverError
from prover.services.problem_gen import gen_church_eq
from prover.services.strategy import (
    Schedule,
    default_schedule,
    resolve_mode,
    run_mode,
    run_schedule,
)
from prover.services.tableau_engine import SearchResult
from prover.services.tptp_front import Problem, parse_file

log = logging.getLogger(__name__)

CSV_HEADER = ["problem", "status", "steps", "millis"]

BenchItem = Tuple[str, Callable[[], Problem]]


@dataclass
class BenchRow:
    problem: str
    status: str
    steps: int
    millis: int

    def as_list(self) -> List[str]:
        return [self.problem, self.status, str(self.steps), str(self.millis)]


def items_from_files(paths: Iterable, *, tptp_root: Optional[str] = None) -> List[BenchItem]:
    out: List[BenchItem] = []
    for p in paths:
        path = str(p)
        out.append((Path(path).name, lambda path=path: parse_file(path, tptp_root=tptp_root)))
    return out


def items_from_church(lo: int, hi: int) -> List[BenchItem]:
    return [(f"C^{n}", lambda n=n: gen_church_eq(n)) for n in range(lo, hi + 1)]


def _attempt(loader: Callable[[], Problem], mode: Optional[str],
             sched: Optional[Schedule], timeout: Optional[float]) -> Tuple[SearchResult, int]:
    # 파싱(정규화 포함) 시간까지 잰다
    t0 = time.monotonic()
    problem = loader()
    if mode:
        flags = resolve_mode(mode)[1]
        res = run_mode(problem, flags, timeout, mode_name=mode)
    else:
        res = run_schedule(problem, sched, timeout)
    return res, int(round((time.monotonic() - t0) * 1000))


def run_bench(
    items: List[BenchItem],
    *,
    mode: Optional[str] = None,
    schedule: Optional[Schedule] = None,
    timeout: Optional[float] = None,
    repeat: Optional[int] = None,
) -> List[BenchRow]:
    """
    문제마다 repeat 번 돌려 가장 짧은 millis 를 쓴다(상태/스텝은 결정적).
    에러 난 문제는 status=Error 로 남기고 다음으로 진행.
    """
    if timeout is None:
        timeout = get_conf_float("PROVER_DEFAULT_TIMEOUT", 10.0)
    if repeat is None:
        repeat = get_conf_int("PROVER_BENCH_REPEAT", 3)
    repeat = max(1, repeat)
    sched = None if mode else (schedule or default_schedule())

    rows: List[BenchRow] = []
    for label, loader in items:
        best: Optional[int] = None
        res: Optional[SearchResult] = None
        try:
            for _ in range(repeat):
                res, millis = _attempt(loader, mode, sched, timeout)
                best = millis if best is None else min(best, millis)
        except (ProverError, OSError, RecursionError) as e:
            log.warning("bench %s failed: %s", label, e)
            log_error("bench", label, mode or "schedule", str(e))
            rows.append(BenchRow(label, "Error", 0, 0))
            continue
        rows.append(BenchRow(label, res.status.value, res.steps, best or 0))
        log_success("bench", label, mode or res.mode, res.status.value, steps=res.steps, millis=best or 0)
    return rows


def write_csv(rows: Iterable[BenchRow], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.as_list())
