# prover/flag_defaults.py
from __future__ import annotations

from typing import Dict, Union

FlagValue = Union[int, bool]

# 규칙별 기본 우선순위 (작을수록 먼저)
DEFAULT_PRIORITIES: Dict[str, int] = {
    "process_priority": 0,
    "instantiate_priority": 2,
    "mate_priority": 3,
    "confront_priority": 3,
    "choice_priority": 4,
    "default_inst_priority": 5,
}

# 선택 규칙 on/off
DEFAULT_RULE_TOGGLES: Dict[str, bool] = {
    "enable_neg_implication": True,
    "enable_decompose": True,
    "enable_choice": True,
    "enable_neq_fun": True,
    "enable_fun_harvest": True,
}

# SAT 호출 방식
DEFAULT_SAT_FLAGS: Dict[str, FlagValue] = {
    "sat_search_delay": False,
    "sat_search_period": 64,
    "sat_backjump": True,
}

# 큐 공정성: 실효 우선순위 = 기본값 + (seq >> age_shift)
DEFAULT_AGE_SHIFT: int = 8

DEFAULT_FLAGS: Dict[str, FlagValue] = {
    **DEFAULT_PRIORITIES,
    **DEFAULT_RULE_TOGGLES,
    **DEFAULT_SAT_FLAGS,
    "age_shift": DEFAULT_AGE_SHIFT,
}

FLAG_DOCS: Dict[str, str] = {
    "process_priority": "명제 처리(ProcessProp) 우선순위",
    "instantiate_priority": "∀ 인스턴스화(Instantiate) 우선순위",
    "mate_priority": "양/음 원자 짝짓기(Mate) 우선순위",
    "confront_priority": "정렬 등식 vs 부등식 대면(Confront) 우선순위",
    "choice_priority": "선택(ε) 규칙 우선순위",
    "default_inst_priority": "기본 상수 인스턴스화(DefaultInst) 우선순위",
    "enable_neg_implication": "¬(s⇒t) 규칙 사용",
    "enable_decompose": "같은 머리 상수 부등식 분해 규칙 사용",
    "enable_choice": "ε 선택 규칙 사용",
    "enable_neq_fun": "함수 타입 부등식의 외연성 증인 규칙 사용",
    "enable_fun_harvest": "함수 타입 ∀ 이후 새 명제에서 인스턴스 후보 계속 수집",
    "sat_search_delay": "true 면 스텝마다 전파만, 전체 탐색은 주기/큐 비었을 때",
    "sat_search_period": "sat_search_delay 일 때 전체 SAT 탐색 주기(스텝 수)",
    "sat_backjump": "전체 탐색에서 충돌 기반 backjump 사용(false 면 연대기적 백트래킹)",
    "age_shift": "큐 공정성 노화 폭. 큰 값일수록 기본 우선순위가 오래 지배",
}

BOOL_FLAGS = {k for k, v in DEFAULT_FLAGS.items() if isinstance(v, bool)}
