from __future__ import annotations

from pathlib import Path
from typing import Optional

from django.core.management.base import BaseCommand, CommandError, CommandParser

from prover.log_utils import log_error, log_success
from prover.services.config_runtime import get_conf_float
from prover.services.errors import ProverError
from prover.services.strategy import (
    default_schedule,
    load_schedule,
    resolve_mode,
    run_mode,
    run_schedule,
    run_schedule_parallel,
)
from prover.services.tableau_engine import Status, TableauEngine, TraceEvent
from prover.services.tptp_front import parse_file

EXIT_CODES = {Status.THEOREM: 0, Status.GAVE_UP: 1, Status.TIMEOUT: 1}


class Command(BaseCommand):
    help = "THF 문제를 증명하고 SZS 상태 한 줄을 출력합니다. (exit 0=Theorem, 1=GaveUp/Timeout, 2=Error)"

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("file", type=str, help="THF 문제 파일")
        parser.add_argument("-t", "--timeout", type=float, default=None,
                            help="전체 시간 제한(초). 기본: PROVER_DEFAULT_TIMEOUT")
        parser.add_argument("--mode", type=str, default=None, help="단일 모드 이름 또는 .mode 경로")
        parser.add_argument("--schedule", type=str, default=None, help="스케줄 파일 경로")
        parser.add_argument("--tptp-root", dest="tptp_root", type=str, default=None,
                            help="include 경로 기준 디렉터리")
        parser.add_argument("--trace", action="store_true", help="명령 하나당 한 줄 trace 출력")
        parser.add_argument("--dump-dimacs", dest="dump_dimacs", type=str, default=None,
                            help="마지막 엔진의 절 집합을 DIMACS 로 저장")
        parser.add_argument("--steps", action="store_true", help="스텝 수/시간 출력")
        parser.add_argument("--parallel", action="store_true", help="스케줄 슬라이스를 동시에 실행")

    def _write_trace(self, ev: TraceEvent) -> None:
        self.stdout.write(f"% trace {ev.format()}")

    def handle(self, *args, **opts):
        path = opts["file"]
        if opts["parallel"] and (opts["trace"] or opts["dump_dimacs"]):
            raise CommandError("--parallel 은 --trace, --dump-dimacs 와 함께 쓸 수 없습니다")
        timeout = opts["timeout"]
        if timeout is None:
            timeout = get_conf_float("PROVER_DEFAULT_TIMEOUT", 10.0)
        mode_label = opts["mode"] or Path(opts["schedule"] or "default.sched").name
        trace = self._write_trace if opts["trace"] else None

        last_engine: list[Optional[TableauEngine]] = [None]

        def keep_engine(_mode: str, engine: TableauEngine) -> None:
            last_engine[0] = engine

        try:
            problem = parse_file(path, tptp_root=opts["tptp_root"])
            if opts["mode"]:
                name, flags = resolve_mode(opts["mode"])
                res = run_mode(problem, flags, timeout, trace=trace,
                               engine_hook=keep_engine, mode_name=name)
            else:
                sched = load_schedule(opts["schedule"]) if opts["schedule"] else default_schedule()
                if opts["parallel"]:
                    res = run_schedule_parallel(problem, sched, timeout)
                else:
                    res = run_schedule(problem, sched, timeout, trace=trace, engine_hook=keep_engine)
            if opts["dump_dimacs"] and last_engine[0] is not None:
                eng = last_engine[0]
                Path(opts["dump_dimacs"]).write_text(
                    eng.sat.to_dimacs(eng.lits.num_vars), encoding="utf-8"
                )
        except (ProverError, OSError, RecursionError) as e:
            self.stdout.write(f"% SZS status Error for {path}")
            self.stderr.write(f"{type(e).__name__}: {e}")
            log_error("cli", path, mode_label, str(e))
            raise SystemExit(2)

        self.stdout.write(f"% SZS status {res.status.value} for {path}")
        if opts["steps"]:
            self.stdout.write(f"% steps {res.steps} millis {res.millis} mode {res.mode or mode_label}")
        log_success("cli", path, res.mode or mode_label, res.status.value,
                    steps=res.steps, millis=res.millis, extra=res.stats)
        raise SystemExit(EXIT_CODES[res.status])
