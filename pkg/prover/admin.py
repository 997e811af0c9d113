# prover/admin.py
from __future__ import annotations

from django.contrib import admin

from prover.models import ProofRunLog, ProverSetting
from prover.services.config_runtime import bust_cache


# ─────────────────────────────
# ProofRunLog
# ─────────────────────────────
@admin.register(ProofRunLog)
class ProofRunLogAdmin(admin.ModelAdmin):
    list_display = ("id", "created_at", "source_text", "problem", "mode_text", "status", "steps", "millis")
    list_filter = ("source_text", "status", "ok_flag")
    search_fields = ("problem", "mode_text", "extra_json")
    readonly_fields = (
        "created_at", "source_text", "problem", "mode_text",
        "status", "ok_flag", "steps", "millis", "extra_json",
    )
    fieldsets = (
        (None, {"fields": ("created_at", "source_text", "problem", "mode_text", "status", "ok_flag")}),
        ("통계", {"fields": ("steps", "millis")}),
        ("추가 정보(JSON)", {"fields": ("extra_json",)}),
    )


# ─────────────────────────────
# ProverSetting
# ─────────────────────────────
@admin.register(ProverSetting)
class ProverSettingAdmin(admin.ModelAdmin):
    list_display = ("key", "value", "description", "updated_at")
    search_fields = ("key", "description")

    def save_model(self, request, obj, form, change):
        super().save_model(request, obj, form, change)
        # 저장 직후 캐시 비워서 바로 반영
        bust_cache([obj.key])

    def delete_model(self, request, obj):
        key = obj.key
        super().delete_model(request, obj)
        bust_cache([key])
