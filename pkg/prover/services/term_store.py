# prover/services/term_store.py
"""
β/η 정규형 항(term)만 저장하는 완전 공유(hash-consing) 저장소.

- 타입/이름/항 모두 정수 id 로 intern 된다. 같은 구조 ↔ 같은 id.
- 각 노드는 자유 de Bruijn 인덱스 마스크(fdbv, 0..255 비트)를 들고 있다.
- shift / 정규화 치환(subst_norm)은 (항, 파라미터) 키로 캐시된다.
- 저장소 인스턴스 하나는 한 스레드에서만 쓴다(락 없음).
"""
from __future__ import annotations

import logging
from enum import IntEnum
from typing import Dict, Iterator, List, Tuple

from prover.services.errors import DepthLimitExceeded, TypeMismatch

log = logging.getLogger(__name__)

MAX_DB_INDEX = 255
NONE = -1


class Tag(IntEnum):
    DB = 0
    CONST = 1
    AP = 2
    LAM = 3
    BOT = 4
    IMP = 5
    ALL = 6
    EQ = 7
    CHOICE = 8


# 타입 모양: ("o",) | ("base", NameId) | ("arrow", TyId, TyId)
TyShape = Tuple


class TermStore:
    def __init__(self) -> None:
        # ─── 이름 테이블 ───
        self._names: List[str] = []
        self._name_index: Dict[str, int] = {}

        # ─── 타입 테이블 ───
        self._ty_shapes: List[TyShape] = []
        self._ty_index: Dict[TyShape, int] = {}
        self.prop = self.intern_ty(("o",))

        # 상수 시그니처 NameId → TyId
        self.const_types: Dict[int, int] = {}

        # ─── 노드 테이블 (append-only, id = 생성 순서) ───
        self._tag: List[int] = []
        self._num: List[int] = []
        self._left: List[int] = []
        self._right: List[int] = []
        self._fdbv: List[int] = []
        self._node_index: Dict[Tuple[int, int, int, int], int] = {}

        # ─── 연산 캐시 ───
        self._shift_cache: Dict[Tuple[int, int, int], int] = {}
        self._subst_cache: Dict[Tuple[int, int, int], int] = {}
        self._type_cache: Dict[int, int] = {}
        self.cache_hits = 0

        self.bot = self._intern(Tag.BOT, NONE, NONE, NONE, 0)
        self._db0 = self.mk_db(0)

    # ─────────────────────────────────────────────────────────────────────
    # 이름 / 타입
    # ─────────────────────────────────────────────────────────────────────
    def intern_name(self, s: str) -> int:
        nid = self._name_index.get(s)
        if nid is None:
            nid = len(self._names)
            self._names.append(s)
            self._name_index[s] = nid
        return nid

    def has_name(self, s: str) -> bool:
        return s in self._name_index

    def name_of(self, nid: int) -> str:
        return self._names[nid]

    def intern_ty(self, shape: TyShape) -> int:
        kind = shape[0]
        if kind == "o":
            key: TyShape = ("o",)
        elif kind == "base":
            key = ("base", int(shape[1]))
        elif kind == "arrow":
            a, b = int(shape[1]), int(shape[2])
            if not (0 <= a < len(self._ty_shapes) and 0 <= b < len(self._ty_shapes)):
                raise ValueError(f"arrow over unknown TyId ({a}, {b})")
            key = ("arrow", a, b)
        else:
            raise ValueError(f"bad type shape: {shape!r}")
        ty = self._ty_index.get(key)
        if ty is None:
            ty = len(self._ty_shapes)
            self._ty_shapes.append(key)
            self._ty_index[key] = ty
        return ty

    def base_ty(self, name: str) -> int:
        return self.intern_ty(("base", self.intern_name(name)))

    def arrow_ty(self, *tys: int) -> int:
        """arrow_ty(a, b, c) == a → (b → c)"""
        if not tys:
            raise ValueError("arrow_ty needs at least one type")
        out = tys[-1]
        for t in reversed(tys[:-1]):
            out = self.intern_ty(("arrow", t, out))
        return out

    def ty_shape(self, ty: int) -> TyShape:
        return self._ty_shapes[ty]

    def is_arrow(self, ty: int) -> bool:
        return self._ty_shapes[ty][0] == "arrow"

    def is_sort(self, ty: int) -> bool:
        return self._ty_shapes[ty][0] == "base"

    def arrow_parts(self, ty: int) -> Tuple[int, int]:
        shape = self._ty_shapes[ty]
        if shape[0] != "arrow":
            raise TypeMismatch(f"not a function type: {self.format_ty(ty)}")
        return shape[1], shape[2]

    def arg_types(self, ty: int, n: int) -> List[int]:
        out = []
        for _ in range(n):
            a, ty = self.arrow_parts(ty)
            out.append(a)
        return out

    def format_ty(self, ty: int) -> str:
        shape = self._ty_shapes[ty]
        if shape[0] == "o":
            return "$o"
        if shape[0] == "base":
            return self._names[shape[1]]
        dom = self.format_ty(shape[1])
        if self.is_arrow(shape[1]):
            dom = f"({dom})"
        return f"{dom} > {self.format_ty(shape[2])}"

    # ─────────────────────────────────────────────────────────────────────
    # 노드 접근자
    # ─────────────────────────────────────────────────────────────────────
    def tag(self, t: int) -> Tag:
        return Tag(self._tag[t])

    def num(self, t: int) -> int:
        return self._num[t]

    def left(self, t: int) -> int:
        return self._left[t]

    def right(self, t: int) -> int:
        return self._right[t]

    def fdbv(self, t: int) -> int:
        return self._fdbv[t]

    def free_indices(self, t: int) -> set:
        m, out, i = self._fdbv[t], set(), 0
        while m:
            if m & 1:
                out.add(i)
            m >>= 1
            i += 1
        return out

    def is_closed(self, t: int) -> bool:
        return self._fdbv[t] == 0

    @property
    def node_count(self) -> int:
        return len(self._tag)

    def nodes(self) -> Iterator[int]:
        return iter(range(len(self._tag)))

    # ─────────────────────────────────────────────────────────────────────
    # intern (정규성 검사 없음, 내부 전용)
    # ─────────────────────────────────────────────────────────────────────
    def _intern(self, tag: int, num: int, left: int, right: int, mask: int) -> int:
        key = (tag, num, left, right)
        t = self._node_index.get(key)
        if t is not None:
            return t
        t = len(self._tag)
        self._tag.append(tag)
        self._num.append(num)
        self._left.append(left)
        self._right.append(right)
        self._fdbv.append(mask)
        self._node_index[key] = t
        return t

    def _raw_ap(self, f: int, a: int) -> int:
        return self._intern(Tag.AP, NONE, f, a, self._fdbv[f] | self._fdbv[a])

    def _raw_lam(self, ty: int, body: int) -> int:
        return self._intern(Tag.LAM, ty, body, NONE, self._fdbv[body] >> 1)

    # ─────────────────────────────────────────────────────────────────────
    # 생성자
    # ─────────────────────────────────────────────────────────────────────
    def mk_db(self, i: int) -> int:
        if i < 0:
            raise ValueError(f"negative de Bruijn index {i}")
        if i > MAX_DB_INDEX:
            raise DepthLimitExceeded(f"de Bruijn index {i} exceeds {MAX_DB_INDEX}")
        return self._intern(Tag.DB, i, NONE, NONE, 1 << i)

    def mk_const(self, n: int, ty: int) -> int:
        known = self.const_types.get(n)
        if known is None:
            self.const_types[n] = ty
        elif known != ty:
            raise TypeMismatch(
                f"constant '{self._names[n]}' already has type {self.format_ty(known)}"
            )
        return self._intern(Tag.CONST, n, NONE, NONE, 0)

    def const(self, name: str, ty: int) -> int:
        return self.mk_const(self.intern_name(name), ty)

    def mk_imp(self, s: int, t: int) -> int:
        return self._intern(Tag.IMP, NONE, s, t, self._fdbv[s] | self._fdbv[t])

    def mk_neg(self, s: int) -> int:
        return self.mk_imp(s, self.bot)

    @property
    def top(self) -> int:
        return self.mk_imp(self.bot, self.bot)

    def mk_all(self, ty: int, body: int) -> int:
        return self._intern(Tag.ALL, ty, body, NONE, self._fdbv[body] >> 1)

    def mk_eq(self, ty: int, s: int, t: int) -> int:
        return self._intern(Tag.EQ, ty, s, t, self._fdbv[s] | self._fdbv[t])

    def mk_neq(self, ty: int, s: int, t: int) -> int:
        return self.mk_neg(self.mk_eq(ty, s, t))

    def mk_choice(self, ty: int) -> int:
        return self._intern(Tag.CHOICE, ty, NONE, NONE, 0)

    def mk_node(self, kind: Tag, *args: int) -> int:
        """Bot | Imp(s,t) | All(ty, body) | Eq(ty, s, t) | Choice(ty)"""
        if kind == Tag.BOT:
            return self.bot
        if kind == Tag.IMP:
            return self.mk_imp(*args)
        if kind == Tag.ALL:
            return self.mk_all(*args)
        if kind == Tag.EQ:
            return self.mk_eq(*args)
        if kind == Tag.CHOICE:
            return self.mk_choice(*args)
        raise ValueError(f"mk_node does not build {kind!r}; use mk_db/mk_const/mk_norm_ap/mk_norm_lam")

    def mk_norm_ap(self, f: int, a: int) -> int:
        fd = self._fdbv
        if not (fd[f] | fd[a]):
            self._check_ap(f, a)
        if self._tag[f] == Tag.LAM:
            return self.subst_norm(self._left[f], 0, a)
        return self._raw_ap(f, a)

    def mk_norm_aps(self, f: int, *args: int) -> int:
        for a in args:
            f = self.mk_norm_ap(f, a)
        return f

    def mk_norm_lam(self, ty: int, body: int) -> int:
        # η: λ. g 0 (0 ∉ g) → g↓ , 마스크만 보고 판단
        if (
            self._tag[body] == Tag.AP
            and self._right[body] == self._db0
            and not (self._fdbv[self._left[body]] & 1)
        ):
            return self.shift(self._left[body], 0, -1)
        return self._raw_lam(ty, body)

    # ─────────────────────────────────────────────────────────────────────
    # shift / 정규화 치환
    # ─────────────────────────────────────────────────────────────────────
    def shift(self, t: int, cutoff: int, amount: int) -> int:
        if amount == 0 or (self._fdbv[t] >> cutoff) == 0:
            return t
        key = (t, cutoff, amount)
        hit = self._shift_cache.get(key)
        if hit is not None:
            self.cache_hits += 1
            return hit
        tag = self._tag[t]
        if tag == Tag.DB:
            i = self._num[t] + amount
            if i < 0:
                raise ValueError(f"shift would make index {self._num[t]} negative")
            out = self.mk_db(i)
        elif tag == Tag.AP:
            out = self._raw_ap(self.shift(self._left[t], cutoff, amount),
                               self.shift(self._right[t], cutoff, amount))
        elif tag == Tag.LAM:
            out = self._raw_lam(self._num[t], self.shift(self._left[t], cutoff + 1, amount))
        elif tag == Tag.IMP:
            out = self.mk_imp(self.shift(self._left[t], cutoff, amount),
                              self.shift(self._right[t], cutoff, amount))
        elif tag == Tag.ALL:
            out = self.mk_all(self._num[t], self.shift(self._left[t], cutoff + 1, amount))
        elif tag == Tag.EQ:
            out = self.mk_eq(self._num[t],
                             self.shift(self._left[t], cutoff, amount),
                             self.shift(self._right[t], cutoff, amount))
        else:
            out = t
        self._shift_cache[key] = out
        return out

    def subst_norm(self, t: int, j: int, s: int) -> int:
        """
        t 안의 DB j 를 s 로 바꾸고 j 보다 큰 인덱스는 1 내린 정규형.
        s 는 t 바깥(j 개의 binder 밖) 문맥의 항이다.
        """
        mask = self._fdbv[t] >> j
        if mask == 0:
            return t
        if not (mask & 1):
            return self.shift(t, j, -1)
        key = (t, j, s)
        hit = self._subst_cache.get(key)
        if hit is not None:
            self.cache_hits += 1
            return hit
        tag = self._tag[t]
        if tag == Tag.DB:
            # 마스크상 여기 오는 DB 는 정확히 j
            out = self.shift(s, 0, j)
        elif tag == Tag.AP:
            out = self.mk_norm_ap(self.subst_norm(self._left[t], j, s),
                                  self.subst_norm(self._right[t], j, s))
        elif tag == Tag.LAM:
            out = self.mk_norm_lam(self._num[t], self.subst_norm(self._left[t], j + 1, s))
        elif tag == Tag.IMP:
            out = self.mk_imp(self.subst_norm(self._left[t], j, s),
                              self.subst_norm(self._right[t], j, s))
        elif tag == Tag.ALL:
            out = self.mk_all(self._num[t], self.subst_norm(self._left[t], j + 1, s))
        elif tag == Tag.EQ:
            out = self.mk_eq(self._num[t],
                             self.subst_norm(self._left[t], j, s),
                             self.subst_norm(self._right[t], j, s))
        else:
            out = t
        self._subst_cache[key] = out
        return out

    def clear_caches(self) -> None:
        self._shift_cache.clear()
        self._subst_cache.clear()
        self._type_cache.clear()

    # ─────────────────────────────────────────────────────────────────────
    # 구조 조회
    # ─────────────────────────────────────────────────────────────────────
    def head_spine(self, t: int) -> Tuple[int, List[int]]:
        args: List[int] = []
        while self._tag[t] == Tag.AP:
            args.append(self._right[t])
            t = self._left[t]
        args.reverse()
        return t, args

    def is_neg(self, t: int) -> bool:
        return self._tag[t] == Tag.IMP and self._right[t] == self.bot

    def type_of(self, t: int, env: Tuple[int, ...] = ()) -> int:
        """env 는 안쪽 binder 부터의 타입 튜플. 닫힌 항의 결과는 캐시."""
        closed = self._fdbv[t] == 0
        if closed:
            hit = self._type_cache.get(t)
            if hit is not None:
                return hit
        tag = self._tag[t]
        if tag == Tag.DB:
            i = self._num[t]
            if i >= len(env):
                raise TypeMismatch(f"unbound de Bruijn index {i}")
            ty = env[i]
        elif tag == Tag.CONST:
            ty = self.const_types[self._num[t]]
        elif tag == Tag.AP:
            ty = self.arrow_parts(self.type_of(self._left[t], env))[1]
        elif tag == Tag.LAM:
            dom = self._num[t]
            ty = self.arrow_ty(dom, self.type_of(self._left[t], (dom,) + env))
        elif tag == Tag.CHOICE:
            sigma = self._num[t]
            ty = self.arrow_ty(self.arrow_ty(sigma, self.prop), sigma)
        else:
            ty = self.prop
        if closed:
            self._type_cache[t] = ty
        return ty

    def _check_ap(self, f: int, a: int) -> None:
        tf = self.type_of(f)
        if not self.is_arrow(tf):
            raise TypeMismatch(f"applying a term of type {self.format_ty(tf)}")
        dom = self._ty_shapes[tf][1]
        ta = self.type_of(a)
        if dom != ta:
            raise TypeMismatch(
                f"argument of type {self.format_ty(ta)} where {self.format_ty(dom)} expected"
            )

    def subterms(self, t: int) -> Iterator[int]:
        """t 의 모든 부분항(공유 노드는 한 번만)"""
        seen = set()
        stack = [t]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            yield u
            tag = self._tag[u]
            if tag in (Tag.AP, Tag.IMP, Tag.EQ):
                stack.append(self._right[u])
                stack.append(self._left[u])
            elif tag in (Tag.LAM, Tag.ALL):
                stack.append(self._left[u])

    def stats(self) -> Dict[str, int]:
        return {
            "nodes": len(self._tag),
            "types": len(self._ty_shapes),
            "names": len(self._names),
            "shift_cache": len(self._shift_cache),
            "subst_cache": len(self._subst_cache),
            "cache_hits": self.cache_hits,
        }
