# prover/services/corpus.py
from __future__ import annotations

from pathlib import Path
from typing import List

from prover.services.config_runtime import get_conf_str

BUNDLED_PROBLEMS_DIR = Path(__file__).resolve().parent.parent / "problems"

# 번들 문제 중 기본 스케줄로 몇 초 안에 끝나는 것들
FAST_PROBLEMS = [
    "sev241_5.p",
    "num638_1.p",
    "syo506_1.p",
    "church_20.p",
    "choice_witness.p",
    "eta_fun_ext.p",
    "fun_ext.p",
    "bool_ext.p",
    "leibniz.p",
    "fun_inst.p",
    "drinker.p",
]


def problems_dir() -> Path:
    configured = get_conf_str("PROVER_PROBLEMS_DIR", "")
    return Path(configured) if configured else BUNDLED_PROBLEMS_DIR


def bundled_problems() -> List[Path]:
    d = problems_dir()
    return sorted(d.glob("*.p")) if d.is_dir() else []


def bundled(name: str) -> Path:
    p = problems_dir() / name
    if not p.is_file():
        raise FileNotFoundError(f"no bundled problem {name}")
    return p


def fast_problems() -> List[Path]:
    return [bundled(n) for n in FAST_PROBLEMS]
