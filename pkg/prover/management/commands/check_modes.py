from __future__ import annotations

from django.core.management.base import BaseCommand, CommandError, CommandParser

from prover.services.config_runtime import effective_settings
from prover.services.errors import ProverError
from prover.services.strategy import available_modes, default_schedule, modes_dir, resolve_mode


class Command(BaseCommand):
    help = "모드 디렉터리의 .mode 파일과 기본 스케줄을 검사합니다."

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--show-config", dest="show_config", action="store_true",
                            help="적용 중인 PROVER_* 값과 출처(db/settings/default) 출력")

    def _show_config(self) -> None:
        self.stdout.write(self.style.NOTICE("설정값:"))
        for key, cv in effective_settings().items():
            self.stdout.write(f"  {key} = {cv.value!r} [{cv.source}]")

    def handle(self, *args, **opts):
        if opts["show_config"]:
            self._show_config()

        errors = 0
        names = available_modes()
        self.stdout.write(self.style.NOTICE(f"모드 디렉터리: {modes_dir()} ({len(names)}개)"))
        for name in names:
            try:
                resolve_mode(name)
                self.stdout.write(f"  OK    {name}")
            except ProverError as e:
                errors += 1
                self.stdout.write(self.style.ERROR(f"  FAIL  {name}: {e}"))

        try:
            sched = default_schedule()
            missing = [s.mode for s in sched.slices if s.mode not in names]
            if missing:
                errors += 1
                self.stdout.write(self.style.ERROR(f"  스케줄에 없는 모드: {', '.join(missing)}"))
            else:
                self.stdout.write(f"  OK    schedule ({len(sched.slices)} slices, {float(sched.total):g}s)")
        except (ProverError, OSError) as e:
            errors += 1
            self.stdout.write(self.style.ERROR(f"  FAIL  schedule: {e}"))

        if errors:
            raise CommandError(f"{errors}개 오류")
        self.stdout.write(self.style.SUCCESS("모든 모드 정상"))
