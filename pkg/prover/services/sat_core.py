# prover/services/sat_core.py
"""
명제 ↔ 정수 리터럴 매핑(음수 = 부정)과 내장 DPLL SAT 코어.

- 절(clause)은 항상 결정 레벨 0 에서만 추가된다. 추가 즉시 단위 전파.
- solve(False) 는 전파만으로 드러난 모순만 본다.
- solve(True) 는 두-감시-리터럴 DPLL. 결정은 "가장 작은 미할당 변수, 참 먼저".
  backjump=True 면 충돌 집합을 따라 비연대기적으로 되돌아간다(절 학습 없음).
"""
from __future__ import annotations

import logging
import time
from enum import Enum
from typing import Dict, Iterable, List, Optional

from prover.services.term_store import TermStore

log = logging.getLogger(__name__)


class PropagationOutcome(Enum):
    NO_CONFLICT = "NoConflict"
    CONFLICT = "Conflict"


class SatStatus(Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"


# ─────────────────────────────────────────────────────────────────────────────
# 명제 → 리터럴
# ─────────────────────────────────────────────────────────────────────────────
class PropLiterals:
    """lit(¬s) = -lit(s). 양의 번호는 처음 본 순서대로 1 부터."""

    def __init__(self, store: TermStore):
        self.store = store
        self.var_of: Dict[int, int] = {}
        self.prop_of: List[int] = [-1]

    def lit_of(self, p: int) -> int:
        st = self.store
        sign = 1
        while st.is_neg(p):
            sign = -sign
            p = st.left(p)
        v = self.var_of.get(p)
        if v is None:
            v = len(self.prop_of)
            self.prop_of.append(p)
            self.var_of[p] = v
        return sign * v

    def prop_of_lit(self, lit: int) -> int:
        p = self.prop_of[abs(lit)]
        return p if lit > 0 else self.store.mk_neg(p)

    @property
    def num_vars(self) -> int:
        return len(self.prop_of) - 1


# ─────────────────────────────────────────────────────────────────────────────
# SAT 코어
# ─────────────────────────────────────────────────────────────────────────────
class SatCore:
    def __init__(self, backjump: bool = True):
        self.backjump = backjump
        self.unsat = False
        self.clauses: List[List[int]] = []       # 덤프용 원본(중복 제거 후)

        self._db: List[List[int]] = []           # 감시 대상 절
        self._watches: Dict[int, List[int]] = {}
        self._value: List[int] = [0]             # var → 1 / -1 / 0
        self._level: List[int] = [0]
        self._reason: List[int] = [-1]           # var → 절 번호, 결정/레벨0 단위는 -1
        self._occurs: List[bool] = [False]

        self._trail: List[int] = []
        self._trail_lim: List[int] = []
        self._decision: List[int] = []           # 레벨별 결정 리터럴
        self._flipped: List[bool] = []
        self._flip_deps: List[int] = []          # 뒤집힌 결정의 의존 레벨 비트마스크
        self._qhead = 0
        self._hint = 1
        self.max_var = 0

        self.stats = {"decisions": 0, "conflicts": 0, "propagations": 0, "solves": 0}

    # ─── 기본 ───
    def _ensure(self, v: int) -> None:
        while len(self._value) <= v:
            self._value.append(0)
            self._level.append(0)
            self._reason.append(-1)
            self._occurs.append(False)
        if v > self.max_var:
            self.max_var = v

    def value(self, lit: int) -> int:
        x = self._value[abs(lit)] if abs(lit) < len(self._value) else 0
        return x if lit > 0 else -x

    @property
    def decision_level(self) -> int:
        return len(self._trail_lim)

    def _assign(self, lit: int, reason: int) -> None:
        v = abs(lit)
        self._value[v] = 1 if lit > 0 else -1
        self._level[v] = len(self._trail_lim)
        self._reason[v] = reason
        self._trail.append(lit)

    def _undo_to(self, level: int) -> None:
        while len(self._trail_lim) > level:
            start = self._trail_lim.pop()
            for lit in self._trail[start:]:
                v = abs(lit)
                self._value[v] = 0
                self._reason[v] = -1
                if v < self._hint:
                    self._hint = v
            del self._trail[start:]
            self._decision.pop()
            self._flipped.pop()
            self._flip_deps.pop()
        self._qhead = len(self._trail)

    def _new_level(self, lit: int, flipped: bool, deps: int) -> None:
        self._trail_lim.append(len(self._trail))
        self._decision.append(lit)
        self._flipped.append(flipped)
        self._flip_deps.append(deps)
        self._assign(lit, -1)

    # ─── 절 추가 ───
    def add_clause(self, lits: Iterable[int]) -> PropagationOutcome:
        if self.decision_level:
            raise RuntimeError("clauses can only be added at decision level 0")
        seen: Dict[int, None] = {}
        for lit in lits:
            if lit == 0:
                raise ValueError("literal 0 is not allowed")
            if -lit in seen:
                return PropagationOutcome.CONFLICT if self.unsat else PropagationOutcome.NO_CONFLICT
            seen[lit] = None
        clause = list(seen)
        self.clauses.append(clause)
        if self.unsat:
            return PropagationOutcome.CONFLICT
        for lit in clause:
            self._ensure(abs(lit))
            self._occurs[abs(lit)] = True

        if any(self.value(l) == 1 for l in clause):
            return PropagationOutcome.NO_CONFLICT
        rest = [l for l in clause if self.value(l) == 0]
        if not rest:
            self.unsat = True
            return PropagationOutcome.CONFLICT
        if len(rest) == 1:
            self._assign(rest[0], -1)
            if self._propagate() is not None:
                self.unsat = True
                return PropagationOutcome.CONFLICT
            return PropagationOutcome.NO_CONFLICT
        ci = len(self._db)
        self._db.append(rest)
        self._watches.setdefault(rest[0], []).append(ci)
        self._watches.setdefault(rest[1], []).append(ci)
        return PropagationOutcome.NO_CONFLICT

    # ─── 전파 ───
    def _propagate(self) -> Optional[int]:
        value = self._value
        db = self._db
        watches = self._watches
        trail = self._trail
        while self._qhead < len(trail):
            lit = trail[self._qhead]
            self._qhead += 1
            false_lit = -lit
            ws = watches.get(false_lit)
            if not ws:
                continue
            kept: List[int] = []
            i, n = 0, len(ws)
            while i < n:
                ci = ws[i]
                i += 1
                c = db[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                fv = value[abs(first)]
                if (fv if first > 0 else -fv) == 1:
                    kept.append(ci)
                    continue
                moved = False
                for k in range(2, len(c)):
                    x = c[k]
                    xv = value[abs(x)]
                    if (xv if x > 0 else -xv) != -1:
                        c[1], c[k] = x, c[1]
                        watches.setdefault(x, []).append(ci)
                        moved = True
                        break
                if moved:
                    continue
                kept.append(ci)
                if (fv if first > 0 else -fv) == -1:
                    kept.extend(ws[i:])
                    watches[false_lit] = kept
                    return ci
                self._assign(first, ci)
                self.stats["propagations"] += 1
            watches[false_lit] = kept
        return None

    # ─── 탐색 ───
    def solve(self, search_allowed: bool = True, deadline: Optional[float] = None) -> SatStatus:
        if self.unsat:
            return SatStatus.UNSAT
        if not search_allowed:
            return SatStatus.SAT
        self.stats["solves"] += 1
        try:
            status = self._search(deadline)
        finally:
            self._undo_to(0)
        if status is SatStatus.UNSAT:
            self.unsat = True
        return status

    def _pick(self) -> int:
        value, occurs = self._value, self._occurs
        v, n = self._hint, len(value)
        while v < n:
            if value[v] == 0 and occurs[v]:
                self._hint = v
                return v
            v += 1
        self._hint = n
        return 0

    def _search(self, deadline: Optional[float]) -> SatStatus:
        conflict = self._propagate()
        if conflict is not None:
            return SatStatus.UNSAT
        count = 0
        while True:
            if conflict is not None:
                self.stats["conflicts"] += 1
                ok = self._backjump(conflict) if self.backjump else self._backtrack()
                if not ok:
                    return SatStatus.UNSAT
                conflict = self._propagate()
                continue
            v = self._pick()
            if not v:
                return SatStatus.SAT
            count += 1
            self.stats["decisions"] += 1
            if deadline is not None and (count & 255) == 0 and time.monotonic() > deadline:
                return SatStatus.UNKNOWN
            self._new_level(v, False, 0)
            conflict = self._propagate()

    def _backtrack(self) -> bool:
        # 연대기적: 아직 안 뒤집힌 가장 최근 결정을 뒤집는다
        while self._trail_lim:
            level = len(self._trail_lim)
            d, was = self._decision[level - 1], self._flipped[level - 1]
            self._undo_to(level - 1)
            if not was:
                self._new_level(-d, True, 0)
                return True
        return False

    def _backjump(self, ci: int) -> bool:
        mask = self._clause_deps(self._db[ci])
        while mask:
            level = mask.bit_length() - 1
            d, was, fd = self._decision[level - 1], self._flipped[level - 1], self._flip_deps[level - 1]
            self._undo_to(level - 1)
            mask &= ~(1 << level)
            if not was:
                self._new_level(-d, True, mask)
                return True
            mask |= fd
        return False

    def _clause_deps(self, lits: List[int]) -> int:
        """충돌 절이 의존하는 결정 레벨들의 비트마스크(레벨 0 제외)."""
        level, reason, db = self._level, self._reason, self._db
        memo: Dict[int, int] = {}
        out = 0
        for lit in lits:
            root = abs(lit)
            stack = [root]
            while stack:
                u = stack[-1]
                if u in memo:
                    stack.pop()
                    continue
                lv = level[u]
                if lv == 0:
                    memo[u] = 0
                    stack.pop()
                    continue
                r = reason[u]
                if r < 0:
                    memo[u] = self._flip_deps[lv - 1] if self._flipped[lv - 1] else (1 << lv)
                    stack.pop()
                    continue
                pending = [abs(x) for x in db[r] if abs(x) != u and abs(x) not in memo]
                if pending:
                    stack.extend(pending)
                    continue
                m = 0
                for x in db[r]:
                    w = abs(x)
                    if w != u:
                        m |= memo[w]
                memo[u] = m
                stack.pop()
            out |= memo[root]
        return out

    # ─── 덤프 ───
    def to_dimacs(self, num_vars: int = 0) -> str:
        n = max(num_vars, self.max_var)
        lines = [f"p cnf {n} {len(self.clauses)}"]
        lines.extend(" ".join(str(l) for l in c) + (" 0" if c else "0") for c in self.clauses)
        return "\n".join(lines) + "\n"
