# prover/services/errors.py
"""증명기 도메인 예외. 모두 ProverError 를 상속한다."""
from __future__ import annotations


class ProverError(Exception):
    """CLI 에서 '% SZS status Error' 로 바뀌는 예외들의 공통 부모."""


# ─── term store ─────────────────────────────────────────────────────────────
class DepthLimitExceeded(ProverError):
    """de Bruijn 인덱스가 255 를 넘는 항을 만들려고 할 때."""


class TypeMismatch(ProverError):
    """적용(application)의 함수/인자 타입이 맞지 않을 때."""


# ─── THF front ──────────────────────────────────────────────────────────────
class THFSyntaxError(ProverError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        super().__init__(f"{message} (line {line}, col {col})")


class UnknownSymbol(ProverError):
    def __init__(self, name: str, location: str = ""):
        self.name = name
        self.location = location
        suffix = f" at {location}" if location else ""
        super().__init__(f"unknown symbol '{name}'{suffix}")


class THFTypeError(ProverError):
    def __init__(self, message: str, location: str = ""):
        self.location = location
        suffix = f" at {location}" if location else ""
        super().__init__(f"{message}{suffix}")


class UnsupportedFeature(ProverError):
    pass


# ─── strategy ───────────────────────────────────────────────────────────────
class UnknownFlag(ProverError):
    def __init__(self, name: str, line: int = 0):
        self.name = name
        self.line = line
        super().__init__(f"unknown flag '{name}' (line {line})")


class ModeParseError(ProverError):
    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"{message} (line {line})")
