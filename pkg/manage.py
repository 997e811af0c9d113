#!/usr/bin/env python
"""증명기 관리 명령 진입점: prove / bench / gen_problem / check_modes / test."""
import os
import sys


def main():
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "proversite.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Django 를 불러올 수 없습니다. `pip install -r requirements.txt` 후 다시 실행하세요."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
