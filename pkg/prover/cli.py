# prover/cli.py
"""
`python -m prover.cli FILE [-t S] [--mode M] ...`

Django 설정을 올린 뒤 `prove` 명령을 그대로 돌리고 종료 코드를 돌려준다.
"""
from __future__ import annotations

import os
import sys
from typing import List, Optional


def main(argv: Optional[List[str]] = None) -> int:
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "proversite.settings")
    import django
    from django.core.management import call_command
    from django.core.management.base import CommandError

    django.setup()
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        call_command("prove", *args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    except CommandError as e:
        # 사용법 오류
        sys.stderr.write(f"{e}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
