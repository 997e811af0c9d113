# prover/services/config_runtime.py
"""
런타임 설정 조회: ProverSetting(DB) → settings.PROVER_* → 호출부 기본값.

값은 프로세스 안에서 캐시된다. 관리자 화면에서 값을 바꾸면 admin 이 bust_cache 를 부른다.
"""
from __future__ import annotations

from typing import Dict, List, NamedTuple, Optional

from django.conf import settings

# 관리자/점검 명령에 보여 줄 키 (settings.py 의 PROVER_* 와 같은 목록)
PROVER_KEYS = (
    "PROVER_DEFAULT_TIMEOUT",
    "PROVER_TPTP_ROOT",
    "PROVER_MODES_DIR",
    "PROVER_PROBLEMS_DIR",
    "PROVER_DEFAULT_SCHEDULE",
    "PROVER_SLICE_GRACE_MS",
    "PROVER_BENCH_REPEAT",
    "PROVER_LOG_RUNS",
    "PROVER_LOG_LEVEL",
)

_TRUE = frozenset({"1", "true", "t", "yes", "y", "on"})
_FALSE = frozenset({"0", "false", "f", "no", "n", "off", ""})


class ConfValue(NamedTuple):
    value: Optional[object]
    source: str  # "db" | "settings" | "default"


_cache: Dict[str, ConfValue] = {}


def _from_db(key: str) -> Optional[str]:
    # 마이그레이션 전이거나 DB 접근이 막힌 환경(SimpleTestCase)이면 None
    try:
        from prover.models import ProverSetting

        row = ProverSetting.objects.filter(key=key).only("value").first()
    except Exception:
        return None
    if row is None or row.value in (None, ""):
        return None
    return row.value


def lookup(key: str, default: Optional[object] = None) -> ConfValue:
    hit = _cache.get(key)
    if hit is not None:
        return hit
    db_val = _from_db(key)
    if db_val is not None:
        found = ConfValue(db_val, "db")
    elif getattr(settings, key, None) is not None:
        found = ConfValue(getattr(settings, key), "settings")
    else:
        # 기본값은 캐시하지 않는다
        return ConfValue(default, "default")
    _cache[key] = found
    return found


def get_conf_raw(key: str, default: Optional[object] = None) -> Optional[object]:
    return lookup(key, default).value


def get_conf_bool(key: str, default_true: bool = True) -> bool:
    raw = get_conf_raw(key, default_true)
    if isinstance(raw, bool):
        return raw
    s = str(raw).strip().lower()
    if s in _TRUE:
        return True
    if s in _FALSE:
        return False
    return default_true


def get_conf_int(key: str, default_val: int) -> int:
    try:
        return int(str(get_conf_raw(key, default_val)).strip())
    except ValueError:
        return default_val


def get_conf_float(key: str, default_val: float) -> float:
    try:
        return float(str(get_conf_raw(key, default_val)).strip())
    except ValueError:
        return default_val


def get_conf_str(key: str, default_val: str = "") -> str:
    raw = get_conf_raw(key, default_val)
    return "" if raw is None else str(raw)


def effective_settings(keys: Optional[List[str]] = None) -> Dict[str, ConfValue]:
    """현재 적용 중인 값과 출처. check_modes --show-config 에서 씀."""
    return {k: lookup(k) for k in (keys or PROVER_KEYS)}


def bust_cache(keys: Optional[List[str]] = None) -> None:
    """관리자에서 값 바꾼 직후 강제 반영하고 싶을 때 호출."""
    if not keys:
        _cache.clear()
        return
    for k in keys:
        _cache.pop(k, None)
