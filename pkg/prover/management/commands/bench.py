from __future__ import annotations

from django.core.management.base import BaseCommand, CommandError, CommandParser

from prover.services.bench import items_from_church, items_from_files, run_bench, write_csv
from prover.services.corpus import bundled_problems


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, _, hi = text.partition("-")
        a, b = int(lo), int(hi or lo)
    except ValueError:
        raise CommandError(f"--church 는 A-B 형식이어야 합니다: {text}") from None
    if a < 1 or b < a:
        raise CommandError(f"잘못된 범위: {text}")
    return a, b


class Command(BaseCommand):
    help = "문제 목록을 돌려 CSV(problem,status,steps,millis)로 출력합니다."

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("files", nargs="*", help="THF 파일들")
        parser.add_argument("--corpus", action="store_true", help="번들 문제 전체 포함")
        parser.add_argument("--church", type=str, default=None, help="C^n 범위, 예: 20-24")
        parser.add_argument("--mode", type=str, default=None, help="단일 모드(기본: 기본 스케줄)")
        parser.add_argument("-t", "--timeout", type=float, default=None, help="문제당 시간 제한(초). 기본: PROVER_DEFAULT_TIMEOUT")
        parser.add_argument("--repeat", type=int, default=None, help="반복 횟수(최소 millis 채택)")
        parser.add_argument("--out", type=str, default=None, help="CSV 저장 경로(기본: stdout)")

    def handle(self, *args, **opts):
        items = items_from_files(opts["files"])
        if opts["corpus"]:
            items += items_from_files(bundled_problems())
        if opts["church"]:
            items += items_from_church(*_parse_range(opts["church"]))

        rows = run_bench(items, mode=opts["mode"], timeout=opts["timeout"], repeat=opts["repeat"])

        if opts["out"]:
            with open(opts["out"], "w", encoding="utf-8", newline="") as f:
                write_csv(rows, f)
            solved = sum(1 for r in rows if r.status == "Theorem")
            self.stderr.write(self.style.SUCCESS(f"벤치 완료: {solved}/{len(rows)} Theorem → {opts['out']}"))
        else:
            write_csv(rows, self.stdout)
