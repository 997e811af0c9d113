# prover/log_utils.py
from __future__ import annotations

from prover.services.config_runtime import get_conf_bool


def _record(source: str, problem: str, mode: str, status: str, ok: bool,
            steps: int, millis: int, extra: dict | None) -> None:
    from prover.models import ProofRunLog

    if not get_conf_bool("PROVER_LOG_RUNS", default_true=True):
        return
    ProofRunLog.objects.create(
        source_text=(source or "")[:32],
        problem=(problem or "")[:512],
        mode_text=(mode or "")[:128],
        status=status or "",
        ok_flag=ok,
        steps=int(steps or 0),
        millis=int(millis or 0),
        extra_json=extra or {},
    )


def log_success(source: str, problem: str, mode: str, status: str,
                steps: int = 0, millis: int = 0, extra: dict | None = None):
    """
    증명 시도가 끝까지 돌았을 때 기록 (Theorem / GaveUp / Timeout).

    source  : "cli", "api", "bench"
    problem : 문제 파일 경로나 라벨
    mode    : 모드 이름, 스케줄이면 "schedule"
    """
    try:
        _record(source, problem, mode, status, status == "Theorem", steps, millis, extra)
    except Exception:
        # 로깅하다가 터지면 증명 결과 출력이 죽으면 안 되니까 그냥 무시
        pass


def log_error(source: str, problem: str, mode: str, err_msg: str, extra: dict | None = None):
    """
    파싱 실패/입출력 에러 등 status=Error 기록
    """
    try:
        payload = dict(extra or {})
        payload["error"] = (err_msg or "")[:500]
        _record(source, problem, mode, "Error", False, 0, 0, payload)
    except Exception:
        pass
