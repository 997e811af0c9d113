from __future__ import annotations

from pathlib import Path

from django.core.management.base import BaseCommand, CommandError, CommandParser

from prover.services.problem_gen import church_eq_text, ramsey_text

ARITY = {"church": 1, "ramsey": 3}


class Command(BaseCommand):
    help = "생성형 문제 출력: church N | ramsey K L N"

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("kind", choices=sorted(ARITY), help="문제 종류")
        parser.add_argument("params", nargs="+", type=int, help="church: N / ramsey: K L N")
        parser.add_argument("--out", type=str, default=None, help="저장 경로(기본: stdout)")

    def handle(self, *args, **opts):
        kind, params = opts["kind"], opts["params"]
        if len(params) != ARITY[kind]:
            raise CommandError(f"{kind} 는 정수 {ARITY[kind]} 개가 필요합니다")
        try:
            text = church_eq_text(*params) if kind == "church" else ramsey_text(*params)
        except ValueError as e:
            raise CommandError(str(e)) from None

        if opts["out"]:
            Path(opts["out"]).write_text(text, encoding="utf-8")
            self.stderr.write(self.style.SUCCESS(f"저장: {opts['out']}"))
        else:
            self.stdout.write(text, ending="")
