# prover/services/strategy.py
"""
모드(flag map) 파일과 시간 분할 스케줄.

모드 파일:      `flag_name value` 한 줄에 하나, `%` 이후는 주석
스케줄 파일:    `mode_name seconds` 한 줄에 하나
"""
from __future__ import annotations

import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from prover.flag_defaults import BOOL_FLAGS, DEFAULT_FLAGS, FlagValue
from prover.services.config_runtime import get_conf_int, get_conf_str
from prover.services.errors import ModeParseError, UnknownFlag
from prover.services.tableau_engine import SearchResult, Status, TableauEngine, TraceEvent
from prover.services.tptp_front import Problem, negate_conjecture

log = logging.getLogger(__name__)

FlagMap = Dict[str, FlagValue]
EngineHook = Callable[[str, TableauEngine], None]

BUNDLED_MODES_DIR = Path(__file__).resolve().parent.parent / "modes"

_TRUE = {"true", "1", "yes", "on"}
_FALSE = {"false", "0", "no", "off"}


# ─────────────────────────────────────────────────────────────────────────────
# 모드
# ─────────────────────────────────────────────────────────────────────────────
def _strip_comment(line: str) -> str:
    return line.split("%", 1)[0].strip()


def parse_flag_value(name: str, raw: str, line: int = 0) -> FlagValue:
    if name not in DEFAULT_FLAGS:
        raise UnknownFlag(name, line)
    v = raw.strip().lower()
    if name in BOOL_FLAGS:
        if v in _TRUE:
            return True
        if v in _FALSE:
            return False
        raise ModeParseError(f"flag '{name}' expects a boolean, got '{raw}'", line)
    try:
        n = int(v)
    except ValueError:
        raise ModeParseError(f"flag '{name}' expects an integer, got '{raw}'", line) from None
    if n < 0:
        raise ModeParseError(f"flag '{name}' must be nonnegative", line)
    return n


def parse_mode_text(text: str) -> FlagMap:
    flags: FlagMap = dict(DEFAULT_FLAGS)
    for lineno, line in enumerate(text.splitlines(), 1):
        body = _strip_comment(line)
        if not body:
            continue
        parts = body.split()
        if len(parts) != 2:
            raise ModeParseError(f"expected 'flag value', got '{body}'", lineno)
        name, raw = parts
        flags[name] = parse_flag_value(name, raw, lineno)
    return flags


def load_mode(path) -> FlagMap:
    return parse_mode_text(Path(path).read_text(encoding="utf-8"))


def modes_dir() -> Path:
    configured = get_conf_str("PROVER_MODES_DIR", "")
    return Path(configured) if configured else BUNDLED_MODES_DIR


def available_modes() -> List[str]:
    d = modes_dir()
    if not d.is_dir():
        return []
    return sorted(p.stem for p in d.glob("*.mode"))


def resolve_mode(name: str) -> Tuple[str, FlagMap]:
    """경로 그대로, 아니면 모드 디렉터리의 `<name>.mode`."""
    p = Path(name)
    if p.is_file():
        return p.stem, load_mode(p)
    cand = modes_dir() / f"{name}.mode"
    if cand.is_file():
        return name, load_mode(cand)
    raise FileNotFoundError(f"unknown mode: {name}")


# ─────────────────────────────────────────────────────────────────────────────
# 스케줄
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class Slice:
    mode: str
    seconds: Fraction


@dataclass
class Schedule:
    slices: List[Slice] = field(default_factory=list)

    @property
    def total(self) -> Fraction:
        return sum((s.seconds for s in self.slices), Fraction(0))

    def scaled(self, wall: float) -> "Schedule":
        """슬라이스 비율은 그대로, 합계만 wall 로 맞춘다."""
        total = self.total
        if not self.slices or total == 0:
            return Schedule(list(self.slices))
        factor = Fraction(wall).limit_denominator(10**6) / total
        return Schedule([Slice(s.mode, s.seconds * factor) for s in self.slices])


def parse_schedule_text(text: str) -> Schedule:
    slices: List[Slice] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        body = _strip_comment(line)
        if not body:
            continue
        parts = body.split()
        if len(parts) != 2:
            raise ModeParseError(f"expected 'mode seconds', got '{body}'", lineno)
        try:
            secs = Fraction(parts[1])
        except (ValueError, ZeroDivisionError):
            raise ModeParseError(f"bad slice length '{parts[1]}'", lineno) from None
        if secs <= 0:
            raise ModeParseError("slice length must be positive", lineno)
        slices.append(Slice(parts[0], secs))
    return Schedule(slices)


def load_schedule(path) -> Schedule:
    return parse_schedule_text(Path(path).read_text(encoding="utf-8"))


def default_schedule() -> Schedule:
    name = get_conf_str("PROVER_DEFAULT_SCHEDULE", "default.sched")
    p = Path(name)
    if not p.is_file():
        p = modes_dir() / name
    return load_schedule(p)


def single_mode_schedule(mode: str, seconds: float) -> Schedule:
    return Schedule([Slice(mode, Fraction(seconds).limit_denominator(10**6))])


# ─────────────────────────────────────────────────────────────────────────────
# 실행
# ─────────────────────────────────────────────────────────────────────────────
def run_mode(
    problem: Problem,
    flags: FlagMap,
    timeout: Optional[float],
    *,
    trace: Optional[Callable[[TraceEvent], None]] = None,
    cancel: Optional[threading.Event] = None,
    engine_hook: Optional[EngineHook] = None,
    mode_name: str = "",
) -> SearchResult:
    engine = TableauEngine(problem.store, flags, trace=trace, cancel=cancel)
    if engine_hook is not None:
        engine_hook(mode_name, engine)
    return engine.search(negate_conjecture(problem), timeout)


def _grace_seconds(grace_ms: Optional[int]) -> float:
    if grace_ms is None:
        grace_ms = get_conf_int("PROVER_SLICE_GRACE_MS", 50)
    return max(0, grace_ms) / 1000.0


def _load_slice_flags(sched: Schedule) -> Dict[str, FlagMap]:
    loaded: Dict[str, FlagMap] = {}
    for s in sched.slices:
        if s.mode not in loaded:
            loaded[s.mode] = resolve_mode(s.mode)[1]
    return loaded


def run_schedule(
    problem: Problem,
    sched: Schedule,
    wall: Optional[float],
    *,
    grace_ms: Optional[int] = None,
    trace: Optional[Callable[[TraceEvent], None]] = None,
    engine_hook: Optional[EngineHook] = None,
) -> SearchResult:
    """
    슬라이스마다 원문을 새 TermStore 로 다시 읽고 새 엔진으로 돌린다.
    첫 Theorem 을 반환하고, 없으면 마지막 슬라이스 결과(경과 시간은 합계).
    """
    flag_maps = _load_slice_flags(sched)
    plan = sched.scaled(wall) if wall is not None else sched
    grace = _grace_seconds(grace_ms)
    start = time.monotonic()
    last: Optional[SearchResult] = None

    for i, s in enumerate(plan.slices, 1):
        budget = float(s.seconds)
        if wall is not None:
            budget = min(budget, wall - (time.monotonic() - start))
        if budget <= 0:
            break
        fresh = problem.reload()
        res = run_mode(
            fresh, flag_maps[s.mode], max(0.0, budget - grace),
            trace=trace, engine_hook=engine_hook, mode_name=s.mode,
        )
        res.mode = s.mode
        log.info(
            "slice %d/%d %s (%.2fs): %s steps=%d %dms",
            i, len(plan.slices), s.mode, budget, res.status.value, res.steps, res.millis,
        )
        last = res
        if res.status is Status.THEOREM:
            break

    elapsed = time.monotonic() - start
    if last is None:
        return SearchResult(Status.GAVE_UP if not plan.slices else Status.TIMEOUT, 0, elapsed)
    return SearchResult(last.status, last.steps, elapsed, last.stats, mode=last.mode)


def run_schedule_parallel(
    problem: Problem,
    sched: Schedule,
    wall: Optional[float],
    *,
    max_workers: Optional[int] = None,
    grace_ms: Optional[int] = None,
) -> SearchResult:
    """모든 슬라이스를 독립 엔진으로 동시에 돌리고 첫 Theorem 이 나오면 나머지를 멈춘다."""
    flag_maps = _load_slice_flags(sched)
    if not sched.slices:
        return SearchResult(Status.GAVE_UP, 0, 0.0)
    budget = max(0.0, wall - _grace_seconds(grace_ms)) if wall is not None else None
    cancel = threading.Event()
    # lark 파싱은 메인 스레드에서 끝낸다
    jobs = [(s.mode, problem.reload()) for s in sched.slices]
    start = time.monotonic()

    def job(mode: str, fresh: Problem) -> SearchResult:
        res = run_mode(fresh, flag_maps[mode], budget, cancel=cancel, mode_name=mode)
        res.mode = mode
        if res.status is Status.THEOREM:
            cancel.set()
        return res

    results: List[Optional[SearchResult]] = [None] * len(jobs)
    with ThreadPoolExecutor(max_workers=max_workers or len(jobs)) as ex:
        futs = {ex.submit(job, mode, fresh): i for i, (mode, fresh) in enumerate(jobs)}
        for f in as_completed(futs):
            i = futs[f]
            try:
                results[i] = f.result()
            except Exception as e:
                log.warning("parallel slice %s failed: %s", jobs[i][0], e)

    elapsed = time.monotonic() - start
    done = [r for r in results if r is not None]
    if not done:
        return SearchResult(Status.GAVE_UP, 0, elapsed)
    winner = next((r for r in done if r.status is Status.THEOREM), done[-1])
    return SearchResult(winner.status, winner.steps, elapsed, winner.stats, mode=winner.mode)
