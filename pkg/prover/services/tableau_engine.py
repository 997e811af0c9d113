# prover/services/tableau_engine.py
"""
ground tableau 탐색기.

가지(branch) 분기는 자료구조로 들고 있지 않다. 규칙 하나가 적용될 때마다
명제 리터럴 위의 절(clause)을 SAT 코어에 넣고, 절 집합이 UNSAT 이 되면
모든 가지가 닫힌 것이다. 작업 단위(Command)는 우선순위 큐로 돌린다.
"""
from __future__ import annotations

import heapq
import logging
import time
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Callable, Dict, List, Optional, Set, Tuple

from prover.flag_defaults import DEFAULT_FLAGS, FlagValue
from prover.services.errors import TypeMismatch
from prover.services.sat_core import PropagationOutcome, PropLiterals, SatCore, SatStatus
from prover.services.term_store import Tag, TermStore

log = logging.getLogger(__name__)

FlagMap = Dict[str, FlagValue]


class CmdKind(IntEnum):
    PROCESS = 0
    INSTANTIATE = 1
    MATE = 2
    CONFRONT = 3
    DEFAULT_INST = 4
    CHOICE = 5


_PRIORITY_FLAG = {
    CmdKind.PROCESS: "process_priority",
    CmdKind.INSTANTIATE: "instantiate_priority",
    CmdKind.MATE: "mate_priority",
    CmdKind.CONFRONT: "confront_priority",
    CmdKind.DEFAULT_INST: "default_inst_priority",
    CmdKind.CHOICE: "choice_priority",
}


class Progress(Enum):
    PROGRESS = "Progress"
    QUEUE_EMPTY = "QueueEmpty"
    REFUTED = "Refuted"


class Status(str, Enum):
    THEOREM = "Theorem"
    GAVE_UP = "GaveUp"
    TIMEOUT = "Timeout"


@dataclass
class SearchResult:
    status: Status
    steps: int
    elapsed: float
    stats: Dict[str, int] = field(default_factory=dict)
    mode: str = ""

    @property
    def millis(self) -> int:
        return int(round(self.elapsed * 1000))


@dataclass
class TraceEvent:
    seq: int
    priority: int
    kind: CmdKind
    principal: int
    other: int = -1

    def format(self) -> str:
        tail = f" {self.other}" if self.other >= 0 else ""
        return f"{self.seq} {self.priority} {self.kind.name} {self.principal}{tail}"


def _oset() -> Dict[int, None]:
    return {}


@dataclass
class BranchState:
    processed: Set[int] = field(default_factory=set)
    instantiations: Dict[int, Dict[int, None]] = field(default_factory=dict)
    processed_foralls: Dict[int, Dict[int, None]] = field(default_factory=dict)
    diseq_sides: Dict[int, Dict[int, None]] = field(default_factory=dict)
    pos_atoms: Dict[int, Dict[int, None]] = field(default_factory=dict)   # 머리 TermId → 원자
    neg_atoms: Dict[int, Dict[int, None]] = field(default_factory=dict)   # 머리 TermId → ¬원자
    pos_eqns: Dict[int, Dict[int, None]] = field(default_factory=dict)
    diseqs: Dict[int, Dict[int, None]] = field(default_factory=dict)
    defaults: Dict[int, int] = field(default_factory=dict)
    fun_terms: Dict[int, Dict[int, None]] = field(default_factory=dict)
    fun_seeded: Set[int] = field(default_factory=set)
    executed_insts: Set[Tuple[int, int]] = field(default_factory=set)
    harvested: Set[int] = field(default_factory=set)
    choice_scanned: Set[int] = field(default_factory=set)
    fresh_counter: int = 0
    steps: int = 0

    @staticmethod
    def bucket(table: Dict[int, Dict[int, None]], key: int) -> Dict[int, None]:
        b = table.get(key)
        if b is None:
            b = table[key] = _oset()
        return b


class TableauEngine:
    def __init__(
        self,
        store: TermStore,
        flags: Optional[FlagMap] = None,
        *,
        trace: Optional[Callable[[TraceEvent], None]] = None,
        record_clauses: bool = False,
        cancel=None,
    ):
        self.store = store
        self.flags: FlagMap = {**DEFAULT_FLAGS, **(flags or {})}
        self.lits = PropLiterals(store)
        self.sat = SatCore(backjump=bool(self.flags["sat_backjump"]))
        self.state = BranchState()
        self.trace = trace
        self.cancel = cancel
        self.emitted: Optional[List[Tuple[str, List[int]]]] = [] if record_clauses else None

        self._queue: List[Tuple[int, int, int, int, int]] = []
        self._seq = 0
        self._enqueued: Set[Tuple[int, int, int]] = set()
        self._reflexive_done: Set[int] = set()
        self._dirty = False
        self._deadline: Optional[float] = None

        self._add("closure", [-self.lit(store.bot)])

    # ─────────────────────────────────────────────────────────────────────
    # 기본 도구
    # ─────────────────────────────────────────────────────────────────────
    def lit(self, p: int) -> int:
        return self.lits.lit_of(p)

    def _add(self, rule: str, clause: List[int]) -> PropagationOutcome:
        if self.emitted is not None:
            self.emitted.append((rule, list(clause)))
        self._dirty = True
        return self.sat.add_clause(clause)

    def _enqueue(self, kind: CmdKind, a: int, b: int = -1) -> None:
        key = (int(kind), a, b)
        if key in self._enqueued:
            return
        self._enqueued.add(key)
        self._seq += 1
        prio = int(self.flags[_PRIORITY_FLAG[kind]]) + (self._seq >> int(self.flags["age_shift"]))
        heapq.heappush(self._queue, (prio, self._seq, int(kind), a, b))

    def _fresh_const(self, ty: int) -> int:
        st = self.store
        # 이미 쓰인 이름은 건너뛴다
        while True:
            self.state.fresh_counter += 1
            name = f"#{self.state.fresh_counter}"
            if not st.has_name(name):
                return st.mk_const(st.intern_name(name), ty)

    def _reflexive_unit(self, p: int) -> None:
        st = self.store
        q = p
        while st.is_neg(q):
            q = st.left(q)
        if st.tag(q) == Tag.EQ and st.left(q) == st.right(q) and q not in self._reflexive_done:
            self._reflexive_done.add(q)
            self._add("reflexive", [self.lit(q)])

    @property
    def queue_size(self) -> int:
        return len(self._queue)

    # ─────────────────────────────────────────────────────────────────────
    # 가지에 명제 올리기
    # ─────────────────────────────────────────────────────────────────────
    def assert_prop(self, p: int) -> None:
        """초기 가지용: 단위 절 {lit(p)} 을 넣고 처리 대기열에 올린다."""
        self._add("assert", [self.lit(p)])
        self.consider(p)

    def consider(self, p: int) -> None:
        """규칙이 만든 명제: 리터럴 배정 + ProcessProp. 참 여부는 규칙 절이 정한다."""
        self.lit(p)
        self._reflexive_unit(p)
        if p not in self.state.processed:
            self._enqueue(CmdKind.PROCESS, p)

    # ─────────────────────────────────────────────────────────────────────
    # 메인 루프
    # ─────────────────────────────────────────────────────────────────────
    def _full_solve(self) -> SatStatus:
        status = self.sat.solve(True, self._deadline)
        if status is SatStatus.SAT:
            self._dirty = False
        return status

    def step(self) -> Progress:
        if self.sat.unsat:
            return Progress.REFUTED
        if not self._queue:
            if self._dirty:
                status = self._full_solve()
                if status is SatStatus.UNSAT:
                    return Progress.REFUTED
                if status is SatStatus.UNKNOWN:
                    return Progress.PROGRESS
            return Progress.QUEUE_EMPTY

        prio, seq, kind, a, b = heapq.heappop(self._queue)
        kind = CmdKind(kind)
        self.state.steps += 1
        if self.trace is not None:
            self.trace(TraceEvent(seq, prio, kind, a, b))

        if kind == CmdKind.PROCESS:
            self._process(a)
        elif kind == CmdKind.INSTANTIATE:
            self.rule_instantiate(a, b)
        elif kind == CmdKind.MATE:
            self.rule_mate(a, b)
        elif kind == CmdKind.CONFRONT:
            self.rule_confront(a, b)
        elif kind == CmdKind.DEFAULT_INST:
            self.rule_default_inst(a)
        elif kind == CmdKind.CHOICE:
            self.rule_choice(a)

        if self.sat.unsat:
            return Progress.REFUTED
        if self._dirty:
            if not self.flags["sat_search_delay"]:
                self._full_solve()
            elif self.state.steps % max(1, int(self.flags["sat_search_period"])) == 0:
                self._full_solve()
        return Progress.REFUTED if self.sat.unsat else Progress.PROGRESS

    def search(self, props: List[int], timeout: Optional[float] = None) -> SearchResult:
        start = time.monotonic()
        self._deadline = (start + timeout) if timeout is not None else None
        log.debug("search start: %d props, flags=%s", len(props), self.flags)
        for p in props:
            self.assert_prop(p)

        status = None
        while status is None:
            if self.sat.unsat:
                status = Status.THEOREM
                break
            if self._deadline is not None and time.monotonic() > self._deadline:
                status = Status.TIMEOUT
                break
            if self.cancel is not None and self.cancel.is_set():
                status = Status.TIMEOUT
                break
            r = self.step()
            if r is Progress.REFUTED:
                status = Status.THEOREM
            elif r is Progress.QUEUE_EMPTY:
                status = Status.GAVE_UP

        elapsed = time.monotonic() - start
        stats = {
            "nodes": self.store.node_count,
            "vars": self.lits.num_vars,
            "clauses": len(self.sat.clauses),
            "queue": len(self._queue),
            **self.sat.stats,
        }
        log.debug("search end: %s after %d steps (%.3fs)", status.value, self.state.steps, elapsed)
        return SearchResult(status, self.state.steps, elapsed, stats)

    # ─────────────────────────────────────────────────────────────────────
    # ProcessProp 분기
    # ─────────────────────────────────────────────────────────────────────
    def _process(self, p: int) -> None:
        st, S = self.store, self.state
        if p in S.processed:
            return
        S.processed.add(p)
        if self.flags["enable_choice"]:
            self._scan_choice(p)
        self._harvest(p)

        tag = st.tag(p)
        if tag == Tag.BOT:
            return
        if tag == Tag.IMP:
            s, t = st.left(p), st.right(p)
            if t == st.bot:
                self._process_neg(p, s)
            else:
                self.rule_implication(p, s, t)
            return
        if tag == Tag.ALL:
            self.rule_forall(p)
            return
        if tag == Tag.EQ:
            ty, a, b = st.num(p), st.left(p), st.right(p)
            if ty == st.prop:
                self.rule_eq_o(p, a, b)
            elif st.is_arrow(ty):
                self.rule_eq_fun(p)
            else:
                S.bucket(S.pos_eqns, ty)[p] = None
                for d in list(S.bucket(S.diseqs, ty)):
                    self._enqueue(CmdKind.CONFRONT, p, d)
            return
        self._atom(p, p, positive=True)

    def _process_neg(self, p: int, s: int) -> None:
        st = self.store
        tag = st.tag(s)
        if tag == Tag.BOT:
            return
        if tag == Tag.IMP:
            if st.right(s) == st.bot:
                # ¬¬q 는 q 와 같은 리터럴
                self.consider(st.left(s))
            elif self.flags["enable_neg_implication"]:
                self.rule_neg_implication(p, st.left(s), st.right(s))
            return
        if tag == Tag.ALL:
            self.rule_neg_forall(p, s)
            return
        if tag == Tag.EQ:
            ty, a, b = st.num(s), st.left(s), st.right(s)
            if ty == st.prop:
                self.rule_neq_o(p, a, b)
            elif st.is_arrow(ty):
                if self.flags["enable_neq_fun"]:
                    self.rule_neq_fun(p, ty, a, b)
            else:
                self.register_discriminating(p, ty, a, b)
                if self.flags["enable_decompose"]:
                    self.rule_decompose(p, ty, a, b)
            return
        self._atom(s, p, positive=False)

    def _atom(self, atom: int, prop: int, positive: bool) -> None:
        st, S = self.store, self.state
        head, args = st.head_spine(atom)
        if not args:
            return
        if positive:
            S.bucket(S.pos_atoms, head)[prop] = None
            for neg in list(S.bucket(S.neg_atoms, head)):
                self._enqueue(CmdKind.MATE, prop, neg)
        else:
            S.bucket(S.neg_atoms, head)[prop] = None
            for pos in list(S.bucket(S.pos_atoms, head)):
                self._enqueue(CmdKind.MATE, pos, prop)

    # ─────────────────────────────────────────────────────────────────────
    # 명제 규칙
    # ─────────────────────────────────────────────────────────────────────
    def rule_implication(self, p: int, s: int, t: int) -> None:
        st = self.store
        self._add("implication", [-self.lit(p), -self.lit(s), self.lit(t)])
        self.consider(st.mk_neg(s))
        self.consider(t)

    def rule_neg_implication(self, p: int, s: int, t: int) -> None:
        st = self.store
        self._add("neg_implication", [-self.lit(p), self.lit(s)])
        self._add("neg_implication", [-self.lit(p), -self.lit(t)])
        self.consider(s)
        self.consider(st.mk_neg(t))

    def rule_eq_o(self, p: int, a: int, b: int) -> None:
        st = self.store
        self._add("eq_o", [-self.lit(p), self.lit(a), -self.lit(b)])
        self._add("eq_o", [-self.lit(p), -self.lit(a), self.lit(b)])
        for q in (a, b, st.mk_neg(a), st.mk_neg(b)):
            self.consider(q)

    def rule_neq_o(self, p: int, a: int, b: int) -> None:
        st = self.store
        self._add("neq_o", [-self.lit(p), self.lit(a), self.lit(b)])
        self._add("neq_o", [-self.lit(p), -self.lit(a), -self.lit(b)])
        for q in (a, b, st.mk_neg(a), st.mk_neg(b)):
            self.consider(q)

    # ─────────────────────────────────────────────────────────────────────
    # 양화사 규칙
    # ─────────────────────────────────────────────────────────────────────
    def rule_forall(self, p: int) -> None:
        st, S = self.store, self.state
        ty = st.num(p)
        S.bucket(S.processed_foralls, ty)[p] = None
        if ty == st.prop:
            for w in (st.bot, st.top):
                self._add_instantiation(ty, w)
        elif st.is_arrow(ty):
            self.enumerate_fun_insts(ty)
        insts = S.bucket(S.instantiations, ty)
        for w in list(insts):
            self._enqueue(CmdKind.INSTANTIATE, p, w)
        if st.is_sort(ty) and not insts:
            self._enqueue(CmdKind.DEFAULT_INST, ty)

    def rule_instantiate(self, forall: int, w: int) -> None:
        st = self.store
        ty = st.num(forall)
        if st.type_of(w) != ty:
            raise TypeMismatch(
                f"instantiating a quantifier over {st.format_ty(ty)} with {st.format_ty(st.type_of(w))}"
            )
        self.state.executed_insts.add((forall, w))
        inst = st.subst_norm(st.left(forall), 0, w)
        self._add("instantiate", [-self.lit(forall), self.lit(inst)])
        self.consider(inst)

    def rule_neg_forall(self, p: int, s: int) -> None:
        st = self.store
        w = self._fresh_const(st.num(s))
        neg = st.mk_neg(st.subst_norm(st.left(s), 0, w))
        self._add("neg_forall", [-self.lit(p), self.lit(neg)])
        self.consider(neg)

    def _add_instantiation(self, ty: int, w: int) -> None:
        S = self.state
        insts = S.bucket(S.instantiations, ty)
        if w in insts:
            return
        insts[w] = None
        for f in list(S.bucket(S.processed_foralls, ty)):
            self._enqueue(CmdKind.INSTANTIATE, f, w)

    def _default_const(self, ty: int) -> int:
        d = self.state.defaults.get(ty)
        if d is None:
            d = self.state.defaults[ty] = self._fresh_const(ty)
        return d

    def rule_default_inst(self, ty: int) -> None:
        if self.state.instantiations.get(ty):
            return
        self._add_instantiation(ty, self._default_const(ty))

    def enumerate_fun_insts(self, ty: int) -> None:
        S = self.state
        if ty not in S.fun_seeded:
            S.fun_seeded.add(ty)
            for w in list(S.fun_terms.get(ty, ())):
                self._add_instantiation(ty, w)
        if not S.instantiations.get(ty):
            self._add_instantiation(ty, self._default_const(ty))

    def _harvest(self, p: int) -> None:
        """닫힌 함수 타입 부분항 수집 (부분항은 검색 전체에서 한 번만 훑는다)"""
        st, S = self.store, self.state
        stack = [p]
        while stack:
            u = stack.pop()
            if u in S.harvested:
                continue
            S.harvested.add(u)
            tag = st.tag(u)
            if st.fdbv(u) == 0 and tag in (Tag.CONST, Tag.AP, Tag.LAM):
                ty = st.type_of(u)
                if st.is_arrow(ty):
                    bucket = S.bucket(S.fun_terms, ty)
                    if u not in bucket:
                        bucket[u] = None
                        if ty in S.fun_seeded and self.flags["enable_fun_harvest"]:
                            self._add_instantiation(ty, u)
            if tag in (Tag.AP, Tag.IMP, Tag.EQ):
                stack.append(st.right(u))
                stack.append(st.left(u))
            elif tag in (Tag.LAM, Tag.ALL):
                stack.append(st.left(u))

    # ─────────────────────────────────────────────────────────────────────
    # 등식 규칙
    # ─────────────────────────────────────────────────────────────────────
    def rule_eq_fun(self, p: int) -> None:
        st = self.store
        sigma, tau = st.arrow_parts(st.num(p))
        db0 = st.mk_db(0)
        lhs = st.mk_norm_ap(st.shift(st.left(p), 0, 1), db0)
        rhs = st.mk_norm_ap(st.shift(st.right(p), 0, 1), db0)
        ext = st.mk_all(sigma, st.mk_eq(tau, lhs, rhs))
        self._add("eq_fun", [-self.lit(p), self.lit(ext)])
        self.consider(ext)

    def rule_neq_fun(self, p: int, ty: int, a: int, b: int) -> None:
        st = self.store
        sigma, tau = st.arrow_parts(ty)
        w = self._fresh_const(sigma)
        d = st.mk_neq(tau, st.mk_norm_ap(a, w), st.mk_norm_ap(b, w))
        self._add("neq_fun", [-self.lit(p), self.lit(d)])
        self.consider(d)

    def register_discriminating(self, p: int, ty: int, a: int, b: int) -> None:
        S = self.state
        S.bucket(S.diseqs, ty)[p] = None
        sides = S.bucket(S.diseq_sides, ty)
        for w in (a, b):
            if w not in sides:
                sides[w] = None
                self._add_instantiation(ty, w)
        for e in list(S.bucket(S.pos_eqns, ty)):
            self._enqueue(CmdKind.CONFRONT, e, p)

    def rule_confront(self, eqn: int, diseq: int) -> None:
        st = self.store
        ty, s, t = st.num(eqn), st.left(eqn), st.right(eqn)
        inner = st.left(diseq)
        u, v = st.left(inner), st.right(inner)
        su, sv = st.mk_neq(ty, s, u), st.mk_neq(ty, s, v)
        tu, tv = st.mk_neq(ty, t, u), st.mk_neq(ty, t, v)
        head = [-self.lit(eqn), -self.lit(diseq)]
        self._add("confront", head + [self.lit(su), self.lit(sv)])
        self._add("confront", head + [self.lit(tu), self.lit(tv)])
        for q in (su, sv, tu, tv):
            self.consider(q)

    def _arg_diseqs(self, head: int, sargs: List[int], targs: List[int]) -> List[int]:
        st = self.store
        tys = st.arg_types(st.type_of(head), len(sargs))
        return [st.mk_neq(ty, s, t) for ty, s, t in zip(tys, sargs, targs)]

    def rule_mate(self, pos: int, neg: int) -> None:
        st = self.store
        hp, sargs = st.head_spine(pos)
        hn, targs = st.head_spine(st.left(neg))
        if hp != hn or not sargs or len(sargs) != len(targs):
            return
        diseqs = self._arg_diseqs(hp, sargs, targs)
        self._add("mate", [-self.lit(pos), -self.lit(neg)] + [self.lit(d) for d in diseqs])
        for d in diseqs:
            self.consider(d)

    def rule_decompose(self, p: int, ty: int, a: int, b: int) -> None:
        st = self.store
        ha, sargs = st.head_spine(a)
        hb, targs = st.head_spine(b)
        if ha != hb or not sargs or len(sargs) != len(targs):
            return
        if st.tag(ha) not in (Tag.CONST, Tag.CHOICE):
            return
        diseqs = self._arg_diseqs(ha, sargs, targs)
        self._add("decompose", [-self.lit(p)] + [self.lit(d) for d in diseqs])
        for d in diseqs:
            self.consider(d)

    # ─────────────────────────────────────────────────────────────────────
    # 선택(ε)
    # ─────────────────────────────────────────────────────────────────────
    def _scan_choice(self, p: int) -> None:
        st, S = self.store, self.state
        stack = [p]
        while stack:
            u = stack.pop()
            if u in S.choice_scanned:
                continue
            S.choice_scanned.add(u)
            tag = st.tag(u)
            if tag == Tag.AP and st.fdbv(u) == 0 and st.tag(st.left(u)) == Tag.CHOICE:
                self._enqueue(CmdKind.CHOICE, u)
            if tag in (Tag.AP, Tag.IMP, Tag.EQ):
                stack.append(st.right(u))
                stack.append(st.left(u))
            elif tag in (Tag.LAM, Tag.ALL):
                stack.append(st.left(u))

    def rule_choice(self, occ: int) -> None:
        st = self.store
        sigma = st.num(st.left(occ))
        pred = st.right(occ)
        empty = st.mk_all(sigma, st.mk_neg(st.mk_norm_ap(st.shift(pred, 0, 1), st.mk_db(0))))
        chosen = st.mk_norm_ap(pred, occ)
        self._add("choice", [self.lit(empty), self.lit(chosen)])
        self.consider(empty)
        self.consider(chosen)


def search(
    store: TermStore,
    props: List[int],
    flags: Optional[FlagMap] = None,
    deadline: Optional[float] = None,
    **kwargs,
) -> SearchResult:
    """deadline 은 이번 탐색에 허용된 초(duration)."""
    return TableauEngine(store, flags, **kwargs).search(props, deadline)
