# proversite/settings.py
from pathlib import Path
import os

# ─── BASE ────────────────────────────────────────────────────────────────────
BASE_DIR = Path(__file__).resolve().parent.parent

# ─── .env 로드 ───────────────────────────────────────────────────────────────
try:
    from dotenv import load_dotenv
    load_dotenv(BASE_DIR / ".env")
except Exception:
    pass

# ─── 유틸: 환경변수 로딩 ────────────────────────────────────────────────────
def _dequote(v: str | None) -> str | None:
    if v is None:
        return None
    s = str(v).strip()
    if (s.startswith('"') and s.endswith('"')) or (s.startswith("'") and s.endswith("'")):
        return s[1:-1].strip()
    return s

def _env_first(keys: list[str], *, default: str | None = None) -> str | None:
    for k in keys:
        v = _dequote(os.environ.get(k))
        if v is not None and v != "":
            return v
    return default

def _env_path(keys: list[str], default: Path | str) -> str:
    v = _env_first(keys) or str(default)
    return str(Path(os.path.expandvars(os.path.expanduser(v))).resolve())

def _env_bool(keys: list[str], default: bool) -> bool:
    v = _env_first(keys, default="1" if default else "0") or ""
    return v.strip().lower() not in ("0", "false", "no", "off", "")

# ─── Django 기본 ─────────────────────────────────────────────────────────────
# 로컬 증명기 용도라 시크릿이 없으면 개발용 키로 뜬다(.env 에서 덮어쓰기)
SECRET_KEY = _env_first(["SECRET_KEY", "DJANGO_SECRET_KEY"], default="dev-only-prover-secret")
DEBUG = _env_bool(["DJANGO_DEBUG"], True)
ALLOWED_HOSTS = [
    x.strip()
    for x in (_env_first(["ALLOWED_HOSTS"], default="*") or "*").split(",")
    if x.strip()
]

INSTALLED_APPS = [
    "django.contrib.admin",
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "django.contrib.sessions",
    "django.contrib.messages",
    "django.contrib.staticfiles",
    "prover",
]

MIDDLEWARE = [
    "django.middleware.security.SecurityMiddleware",
    "django.contrib.sessions.middleware.SessionMiddleware",
    "django.middleware.common.CommonMiddleware",
    "django.middleware.csrf.CsrfViewMiddleware",
    "django.contrib.auth.middleware.AuthenticationMiddleware",
    "django.contrib.messages.middleware.MessageMiddleware",
    "django.middleware.clickjacking.XFrameOptionsMiddleware",
]

ROOT_URLCONF = "proversite.urls"

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "context_processors": [
                "django.template.context_processors.debug",
                "django.template.context_processors.request",
                "django.contrib.auth.context_processors.auth",
                "django.contrib.messages.context_processors.messages",
            ],
        },
    },
]

WSGI_APPLICATION = "proversite.wsgi.application"

# ─── DB ──────────────────────────────────────────────────────────────────────
DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": _env_path(["PROVER_DB_PATH"], BASE_DIR / "db.sqlite3"),
    }
}

# ─── 국제화/시간대 ────────────────────────────────────────────────────────────
LANGUAGE_CODE = "ko-kr"
TIME_ZONE = "Asia/Seoul"
USE_I18N = True
USE_TZ = True

STATIC_URL = "/static/"
DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# ─── 증명기 기본값 ───────────────────────────────────────────────────────────
# 런타임에는 prover.services.config_runtime 이 DB(ProverSetting) → 여기 → 기본값 순으로 읽는다.
PROVER_DEFAULT_TIMEOUT = float(_env_first(["PROVER_DEFAULT_TIMEOUT"], default="10") or "10")
PROVER_TPTP_ROOT = _env_first(["PROVER_TPTP_ROOT", "TPTP"], default="") or ""
PROVER_MODES_DIR = _env_path(["PROVER_MODES_DIR"], BASE_DIR / "prover" / "modes")
PROVER_PROBLEMS_DIR = _env_path(["PROVER_PROBLEMS_DIR"], BASE_DIR / "prover" / "problems")
PROVER_DEFAULT_SCHEDULE = _env_first(["PROVER_DEFAULT_SCHEDULE"], default="default.sched")
PROVER_SLICE_GRACE_MS = int(_env_first(["PROVER_SLICE_GRACE_MS"], default="50") or "50")
PROVER_BENCH_REPEAT = int(_env_first(["PROVER_BENCH_REPEAT"], default="3") or "3")
PROVER_LOG_RUNS = _env_bool(["PROVER_LOG_RUNS"], True)
PROVER_LOG_LEVEL = (_env_first(["PROVER_LOG_LEVEL"], default="WARNING") or "WARNING").upper()

# ─── LOGGING ────────────────────────────────────────────────────────────────
# console 핸들러는 stderr 로 나간다. stdout 은 SZS 줄 전용.
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {"format": "[{levelname}] {asctime} {name} :: {message}", "style": "{"},
        "simple": {"format": "{levelname} {name}: {message}", "style": "{"},
    },
    "handlers": {"console": {"class": "logging.StreamHandler", "formatter": "verbose"}},
    "loggers": {
        "prover": {"handlers": ["console"], "level": PROVER_LOG_LEVEL, "propagate": False},
        "django": {"handlers": ["console"], "level": "WARNING"},
    },
}
