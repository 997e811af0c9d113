from __future__ import annotations
from django.db import models


# -----------------------------------------------------------------------------
# 런타임 설정 / 실행 기록
# -----------------------------------------------------------------------------
class ProverSetting(models.Model):
    """
    증명기 런타임 설정 오버라이드.
    settings.py 의 PROVER_* 값을 관리자 화면에서 덮어쓸 때 사용한다.
    (config_runtime.get_conf_* 가 DB → settings → 기본값 순으로 읽음)
    """

    key = models.CharField(
        max_length=100,
        unique=True,
        help_text="설정 항목 이름. 예: PROVER_DEFAULT_TIMEOUT",
    )
    value = models.TextField(
        blank=True,
        help_text="설정 값 (문자열로 저장. true/false/숫자도 문자열로 저장)",
    )
    description = models.CharField(
        max_length=255,
        blank=True,
        help_text="사람이 읽는 설명",
    )
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        verbose_name = "증명기 설정값"
        verbose_name_plural = "증명기 설정값들"

    def __str__(self) -> str:
        return f"{self.key}={self.value}"


class ProofRunLog(models.Model):
    """
    증명 시도 1건 기록 (CLI / API / bench 공통).
    실패해도 본 작업에는 영향 없음 (log_utils 참고).
    """

    created_at = models.DateTimeField(
        auto_now_add=True,
        help_text="로그 생성 시각",
    )
    source_text = models.CharField(
        max_length=32,
        blank=True,
        default="",
        help_text="어디서 실행했는지. 예: 'cli', 'api', 'bench'",
    )
    problem = models.CharField(
        max_length=512,
        blank=True,
        default="",
        help_text="문제 파일 경로 또는 라벨",
    )
    mode_text = models.CharField(
        max_length=128,
        blank=True,
        default="",
        help_text="사용한 모드 이름 또는 'schedule'",
    )
    status = models.CharField(
        max_length=32,
        blank=True,
        default="",
        help_text="SZS 상태: Theorem / GaveUp / Timeout / Error",
    )
    ok_flag = models.BooleanField(
        default=True,
        help_text="Theorem 이면 True",
    )
    steps = models.IntegerField(default=0, help_text="디스패치된 커맨드 수")
    millis = models.IntegerField(default=0, help_text="경과 시간(ms)")
    extra_json = models.JSONField(
        blank=True,
        default=dict,
        help_text="에러 메시지, 슬라이스별 결과 등 자유롭게",
    )

    class Meta:
        ordering = ["-created_at"]
        verbose_name = "증명 실행 기록"
        verbose_name_plural = "증명 실행 기록들"

    def __str__(self) -> str:
        return f"[{self.status}] {self.problem}"
