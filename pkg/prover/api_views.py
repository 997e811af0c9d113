# prover/api_views.py
from __future__ import annotations

import json
import logging
from typing import Any, Dict

from django.http import HttpRequest, JsonResponse
from django.views.decorators.csrf import csrf_exempt
from django.views.decorators.http import require_GET, require_POST

from prover.log_utils import log_error, log_success
from prover.services.config_runtime import get_conf_float
from prover.services.errors import ProverError
from prover.services.strategy import (
    available_modes,
    default_schedule,
    resolve_mode,
    run_mode,
    run_schedule,
)
from prover.services.tptp_front import parse_problem

log = logging.getLogger(__name__)


def _ok(d: Dict[str, Any]) -> JsonResponse:
    d.setdefault("ok", True)
    return JsonResponse(d, status=200, json_dumps_params={"ensure_ascii": False})


def _fail(msg: str, status: int = 400) -> JsonResponse:
    return JsonResponse({"ok": False, "error": msg}, status=status,
                        json_dumps_params={"ensure_ascii": False})


@require_GET
def api_ping(request: HttpRequest) -> JsonResponse:
    return JsonResponse({"status": "ok"})


@require_GET
def api_modes(request: HttpRequest) -> JsonResponse:
    modes: Dict[str, Any] = {}
    for name in available_modes():
        try:
            modes[name] = resolve_mode(name)[1]
        except ProverError as e:
            modes[name] = {"error": str(e)}
    try:
        sched = [[s.mode, float(s.seconds)] for s in default_schedule().slices]
    except (ProverError, OSError) as e:
        log.warning("default schedule 읽기 실패: %s", e)
        sched = []
    return _ok({"modes": modes, "schedule": sched})


# 외부 클라이언트용 JSON 엔드포인트: CSRF 제외
@csrf_exempt
@require_POST
def api_prove(request: HttpRequest) -> JsonResponse:
    try:
        payload = json.loads(request.body.decode("utf-8") or "{}")
    except (UnicodeDecodeError, json.JSONDecodeError):
        return _fail("JSON 본문이 필요합니다. 예: {'problem': 'thf(...).'}")
    if not isinstance(payload, dict):
        return _fail("JSON 객체여야 합니다")

    text = payload.get("problem")
    if not isinstance(text, str) or not text.strip():
        return _fail("problem(THF 텍스트)이 비었습니다")
    mode = payload.get("mode") or None
    try:
        timeout = float(payload.get("timeout") or get_conf_float("PROVER_DEFAULT_TIMEOUT", 10.0))
    except (TypeError, ValueError):
        return _fail("timeout 은 숫자(초)여야 합니다")

    if mode and mode not in available_modes():
        return _fail(f"알 수 없는 모드: {mode}")

    try:
        problem = parse_problem(text, allow_include=False)
        if mode:
            name, flags = resolve_mode(str(mode))
            res = run_mode(problem, flags, timeout, mode_name=name)
        else:
            res = run_schedule(problem, default_schedule(), timeout)
    except (ProverError, OSError, RecursionError) as e:
        log_error("api", "<request>", mode or "schedule", str(e))
        return _fail(f"{type(e).__name__}: {e}")

    log_success("api", "<request>", res.mode or mode or "schedule", res.status.value,
                steps=res.steps, millis=res.millis)
    return _ok({"status": res.status.value, "steps": res.steps, "millis": res.millis})
