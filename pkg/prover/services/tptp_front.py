# prover/services/tptp_front.py
"""
TPTP THF0 문제 파일 → 타입/시그니처/정규 명제.

흐름: Lark(LALR) 파싱 → RawNode 트리(ToRaw) → Elaborator 가 정의된 연결사를
핵심 문법(⊥, ⇒, ∀, =, ε)으로 풀어서 TermStore 에 넣는다.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Set, Tuple

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput

from prover.services.errors import (
    THFSyntaxError,
    THFTypeError,
    TypeMismatch,
    UnknownSymbol,
    UnsupportedFeature,
)
from prover.services.term_store import Tag, TermStore

log = logging.getLogger(__name__)

GRAMMAR_PATH = Path(__file__).with_name("thf.lark")

AXIOM_ROLES = {
    "axiom", "hypothesis", "definition", "lemma", "theorem",
    "assumption", "negated_conjecture",
}


@lru_cache(maxsize=1)
def get_parser() -> Lark:
    return Lark(
        GRAMMAR_PATH.read_text(encoding="utf-8"),
        parser="lalr",
        propagate_positions=True,
        maybe_placeholders=False,
    )


# ─────────────────────────────────────────────────────────────────────────────
# Raw tree
# ─────────────────────────────────────────────────────────────────────────────
class RawNode(NamedTuple):
    kind: str
    items: tuple
    line: int = 0
    col: int = 0

    @property
    def where(self) -> str:
        return f"line {self.line}, col {self.col}"


def _name(tok) -> str:
    s = str(tok)
    if s.startswith("'") and s.endswith("'"):
        return s[1:-1]
    return s


@v_args(meta=True)
class ToRaw(Transformer):
    def _node(self, kind, meta, *items) -> RawNode:
        line = getattr(meta, "line", 0) if not getattr(meta, "empty", True) else 0
        col = getattr(meta, "column", 0) if not getattr(meta, "empty", True) else 0
        return RawNode(kind, tuple(items), line, col)

    # entries
    def start(self, meta, children):
        return list(children)

    def thf_entry(self, meta, children):
        name, role, body = children[0], children[1], children[2]
        return self._node("thf", meta, _name(name), str(role), body)

    def include_entry(self, meta, children):
        return self._node("include", meta, _name(children[0]))

    def annotations(self, meta, children):
        return None

    def general_word(self, meta, children):
        return None

    def type_decl(self, meta, children):
        if len(children) == 1:
            return children[0]
        return self._node("typedecl", meta, _name(children[0]), children[1])

    # types
    def ty_arrow(self, meta, children):
        return self._node("ty_arrow", meta, children[0], children[1])

    def ty_defined(self, meta, children):
        return self._node("ty_defined", meta, str(children[0]))

    def ty_sort(self, meta, children):
        return self._node("ty_sort", meta, str(children[0]))

    # formulas
    def binconn(self, meta, children):
        return self._node("bin", meta, str(children[1]), children[0], children[2])

    def or_f(self, meta, children):
        return self._node("bin", meta, "|", children[0], children[1])

    def and_f(self, meta, children):
        return self._node("bin", meta, "&", children[0], children[1])

    def eq_f(self, meta, children):
        return self._node("bin", meta, "=", children[0], children[1])

    def neq_f(self, meta, children):
        return self._node("bin", meta, "!=", children[0], children[1])

    def app_f(self, meta, children):
        return self._node("app", meta, children[0], children[1])

    def not_f(self, meta, children):
        return self._node("not", meta, children[0])

    def quant_f(self, meta, children):
        return self._node("quant", meta, children[0], tuple(children[1]), children[2])

    def quantifier(self, meta, children):
        return str(children[0])

    def varlist(self, meta, children):
        return list(children)

    def typed_var(self, meta, children):
        return self._node("tvar", meta, str(children[0]), children[1])

    def untyped_var(self, meta, children):
        return self._node("tvar", meta, str(children[0]), None)

    def var_f(self, meta, children):
        return self._node("var", meta, str(children[0]))

    def const_f(self, meta, children):
        return self._node("const", meta, _name(children[0]))

    def defined_f(self, meta, children):
        return self._node("defined", meta, str(children[0]))


def parse_raw(text: str) -> List[RawNode]:
    try:
        tree = get_parser().parse(text)
    except UnexpectedInput as e:
        raise THFSyntaxError(
            f"unexpected input {str(getattr(e, 'token', '') or '')!r}".strip(),
            getattr(e, "line", 0) or 0,
            getattr(e, "column", 0) or 0,
        ) from None
    return ToRaw().transform(tree)


# ─────────────────────────────────────────────────────────────────────────────
# Problem
# ─────────────────────────────────────────────────────────────────────────────
@dataclass
class Signature:
    consts: Dict[int, int] = field(default_factory=dict)   # NameId → TyId
    sorts: Set[int] = field(default_factory=set)           # NameId


@dataclass
class Problem:
    store: TermStore
    signature: Signature
    axioms: List[Tuple[str, int]] = field(default_factory=list)
    conjecture: Optional[Tuple[str, int]] = None
    source: str = ""
    path: Optional[str] = None
    tptp_root: Optional[str] = None
    decl_order: List[int] = field(default_factory=list)

    @property
    def label(self) -> str:
        return self.path or "<stdin>"

    def reload(self) -> "Problem":
        """같은 원문을 새 TermStore 로 다시 읽는다(스케줄 슬라이스 격리용)."""
        return parse_problem(self.source, path=self.path, tptp_root=self.tptp_root)

    def to_thf(self) -> str:
        """선언 + 핵심 문법으로 다시 찍은 THF 텍스트."""
        st = self.store
        lines: List[str] = []
        for k, nid in enumerate(sorted(self.signature.sorts)):
            lines.append(f"thf(sort_{k}, type, {_fmt_name(st.name_of(nid))}: $tType).")
        for k, nid in enumerate(self.decl_order):
            ty = self.signature.consts[nid]
            lines.append(f"thf(decl_{k}, type, {_fmt_name(st.name_of(nid))}: {st.format_ty(ty)}).")
        for k, (label, t) in enumerate(self.axioms):
            lines.append(f"thf(ax_{k}, axiom, {format_term(st, t)}).")
        if self.conjecture is not None:
            lines.append(f"thf(conj, conjecture, {format_term(st, self.conjecture[1])}).")
        return "\n".join(lines) + "\n"


def negate_conjecture(p: Problem) -> List[int]:
    props = [t for _, t in p.axioms]
    if p.conjecture is not None:
        props.append(p.store.mk_neg(p.conjecture[1]))
    return props


# ─────────────────────────────────────────────────────────────────────────────
# Elaboration
# ─────────────────────────────────────────────────────────────────────────────
class Elaborator:
    def __init__(self, store: TermStore, signature: Signature):
        self.store = store
        self.sig = signature

    # ─── 타입 ───
    def ty(self, raw: RawNode) -> int:
        st = self.store
        if raw.kind == "ty_arrow":
            return st.arrow_ty(self.ty(raw.items[0]), self.ty(raw.items[1]))
        if raw.kind == "ty_sort":
            nid = st.intern_name(raw.items[0])
            if nid not in self.sig.sorts:
                raise UnknownSymbol(raw.items[0], raw.where)
            return st.intern_ty(("base", nid))
        if raw.kind == "ty_defined":
            word = raw.items[0]
            if word == "$o":
                return st.prop
            if word == "$i":
                return st.base_ty("$i")
            if word == "$tType":
                raise THFTypeError("$tType used as a term type", raw.where)
            raise UnsupportedFeature(f"type {word} is not part of TH0 ({raw.where})")
        raise THFSyntaxError(f"bad type {raw.kind}", raw.line, raw.col)

    def declare(self, raw: RawNode) -> int:
        name, rty = raw.items
        if name.startswith("$"):
            raise THFTypeError(f"cannot declare defined symbol {name}", raw.where)
        if name.startswith("#"):
            raise THFTypeError(f"names starting with # are reserved: {name}", raw.where)
        st = self.store
        nid = st.intern_name(name)
        if rty.kind == "ty_defined" and rty.items[0] == "$tType":
            self.sig.sorts.add(nid)
            return nid
        ty = self.ty(rty)
        known = self.sig.consts.get(nid)
        if known is not None and known != ty:
            raise THFTypeError(f"'{name}' redeclared with a different type", raw.where)
        try:
            st.mk_const(nid, ty)
        except TypeMismatch as e:
            raise THFTypeError(str(e), raw.where) from None
        self.sig.consts[nid] = ty
        return nid

    # ─── 명제 ───
    def elaborate(self, raw: RawNode) -> int:
        t, ty = self.term(raw, [])
        if ty != self.store.prop:
            raise THFTypeError(f"formula has type {self.store.format_ty(ty)}, expected $o", raw.where)
        return t

    def _prop(self, raw: RawNode, env) -> int:
        t, ty = self.term(raw, env)
        if ty != self.store.prop:
            raise THFTypeError(f"expected $o, got {self.store.format_ty(ty)}", raw.where)
        return t

    def term(self, raw: RawNode, env: List[Tuple[str, int]]) -> Tuple[int, int]:
        st = self.store
        k = raw.kind
        if k == "var":
            name = raw.items[0]
            for pos in range(len(env) - 1, -1, -1):
                if env[pos][0] == name:
                    return st.mk_db(len(env) - 1 - pos), env[pos][1]
            raise UnknownSymbol(name, raw.where)
        if k == "const":
            nid = st.intern_name(raw.items[0])
            ty = self.sig.consts.get(nid)
            if ty is None:
                raise UnknownSymbol(raw.items[0], raw.where)
            return st.mk_const(nid, ty), ty
        if k == "defined":
            word = raw.items[0]
            if word == "$true":
                return st.top, st.prop
            if word == "$false":
                return st.bot, st.prop
            raise UnsupportedFeature(f"defined symbol {word} ({raw.where})")
        if k == "not":
            return st.mk_neg(self._prop(raw.items[0], env)), st.prop
        if k == "app":
            f, tf = self.term(raw.items[0], env)
            a, ta = self.term(raw.items[1], env)
            if not st.is_arrow(tf):
                raise THFTypeError(f"applying a non-function of type {st.format_ty(tf)}", raw.where)
            dom, cod = st.arrow_parts(tf)
            if dom != ta:
                raise THFTypeError(
                    f"argument type {st.format_ty(ta)} does not match {st.format_ty(dom)}", raw.where
                )
            return st.mk_norm_ap(f, a), cod
        if k == "bin":
            return self._binary(raw, env), st.prop
        if k == "quant":
            return self._quant(raw, env)
        raise THFSyntaxError(f"unexpected {k}", raw.line, raw.col)

    def _binary(self, raw: RawNode, env) -> int:
        st = self.store
        op, lhs, rhs = raw.items
        if op in ("=", "!="):
            a, ta = self.term(lhs, env)
            b, tb = self.term(rhs, env)
            if ta != tb:
                raise THFTypeError(
                    f"equation between {st.format_ty(ta)} and {st.format_ty(tb)}", raw.where
                )
            eq = st.mk_eq(ta, a, b)
            return eq if op == "=" else st.mk_neg(eq)
        a = self._prop(lhs, env)
        b = self._prop(rhs, env)
        if op == "|":
            return self._or(a, b)
        if op == "&":
            return self._and(a, b)
        if op == "=>":
            return st.mk_imp(a, b)
        if op == "<=":
            return st.mk_imp(b, a)
        if op == "<=>":
            return st.mk_eq(st.prop, a, b)
        if op == "<~>":
            return st.mk_neg(st.mk_eq(st.prop, a, b))
        if op == "~|":
            return st.mk_neg(self._or(a, b))
        if op == "~&":
            return st.mk_neg(self._and(a, b))
        raise THFSyntaxError(f"unknown connective {op}", raw.line, raw.col)

    def _or(self, a: int, b: int) -> int:
        st = self.store
        return st.mk_imp(st.mk_neg(a), b)

    def _and(self, a: int, b: int) -> int:
        st = self.store
        return st.mk_neg(st.mk_imp(a, st.mk_neg(b)))

    def _quant(self, raw: RawNode, env) -> Tuple[int, int]:
        st = self.store
        q, tvars, body = raw.items
        if q in ("!>", "?*"):
            raise UnsupportedFeature(f"polymorphic binder {q} ({raw.where})")
        if q == "@-":
            raise UnsupportedFeature(f"description operator @- ({raw.where})")
        bound: List[Tuple[str, int]] = []
        for tv in tvars:
            if tv.items[1] is None:
                raise THFTypeError(f"variable {tv.items[0]} needs a type", tv.where)
            bound.append((tv.items[0], self.ty(tv.items[1])))
        inner = env + bound
        if q == "^":
            t, ty = self.term(body, inner)
            for _, vty in reversed(bound):
                t = st.mk_norm_lam(vty, t)
                ty = st.arrow_ty(vty, ty)
            return t, ty
        if q == "@+":
            if len(bound) != 1:
                raise UnsupportedFeature(f"choice over several variables ({raw.where})")
            vty = bound[0][1]
            pred = st.mk_norm_lam(vty, self._prop(body, inner))
            return st.mk_norm_ap(st.mk_choice(vty), pred), vty
        t = self._prop(body, inner)
        if q == "!":
            for _, vty in reversed(bound):
                t = st.mk_all(vty, t)
        else:
            for _, vty in reversed(bound):
                t = st.mk_neg(st.mk_all(vty, st.mk_neg(t)))
        return t, st.prop


# ─────────────────────────────────────────────────────────────────────────────
# parse_problem
# ─────────────────────────────────────────────────────────────────────────────
def _read_source(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise THFSyntaxError(f"{path}: not valid UTF-8 at byte {e.start}") from None


def _include_roots(path: Optional[str], tptp_root: Optional[str]) -> List[Path]:
    roots: List[Path] = []
    if tptp_root:
        roots.append(Path(tptp_root))
    try:
        from django.conf import settings

        root = getattr(settings, "PROVER_TPTP_ROOT", "") or ""
        if root:
            roots.append(Path(root))
    except Exception:
        pass
    if path:
        roots.append(Path(path).resolve().parent)
    return roots


def _resolve_include(name: str, path: Optional[str], tptp_root: Optional[str]) -> Path:
    rel = Path(name)
    if rel.is_absolute() or ".." in rel.parts:
        raise UnsupportedFeature(f"include must be a relative path inside the TPTP root: {name}")
    for root in _include_roots(path, tptp_root):
        base = root.resolve()
        c = (base / rel).resolve()
        # 심볼릭 링크로 루트 밖을 가리키는 것도 막는다
        if c.is_relative_to(base) and c.is_file():
            return c
    raise OSError(f"include file not found: {name}")


def parse_problem(
    text: str,
    *,
    store: Optional[TermStore] = None,
    path: Optional[str] = None,
    tptp_root: Optional[str] = None,
    allow_include: bool = True,
) -> Problem:
    store = store or TermStore()
    problem = Problem(store=store, signature=Signature(), source=text, path=path, tptp_root=tptp_root)
    elab = Elaborator(store, problem.signature)
    _load_entries(problem, elab, text, path, tptp_root, allow_include, depth=0)
    log.debug(
        "parsed %s: %d axioms, conjecture=%s, %d nodes",
        problem.label, len(problem.axioms), bool(problem.conjecture), store.node_count,
    )
    return problem


def _load_entries(problem: Problem, elab: Elaborator, text: str,
                  path: Optional[str], tptp_root: Optional[str], allow_include: bool,
                  depth: int) -> None:
    if depth > 16:
        raise THFSyntaxError("include nesting too deep")
    for entry in parse_raw(text):
        if entry.kind == "include":
            if not allow_include:
                raise UnsupportedFeature(f"include is not allowed here ({entry.where})")
            inc = _resolve_include(entry.items[0], path, tptp_root)
            _load_entries(problem, elab, _read_source(inc), str(inc), tptp_root, allow_include, depth + 1)
            continue
        label, role, body = entry.items
        if role == "type":
            if body.kind != "typedecl":
                raise THFSyntaxError(f"type entry '{label}' is not a declaration", entry.line, entry.col)
            nid = elab.declare(body)
            if nid in problem.signature.consts and nid not in problem.decl_order:
                problem.decl_order.append(nid)
            continue
        if body.kind == "typedecl":
            raise THFSyntaxError(f"declaration in a {role} entry '{label}'", entry.line, entry.col)
        t = elab.elaborate(body)
        if role == "conjecture":
            if problem.conjecture is not None:
                raise UnsupportedFeature("more than one conjecture")
            problem.conjecture = (label, t)
        elif role in AXIOM_ROLES:
            problem.axioms.append((label, t))
        else:
            raise UnsupportedFeature(f"role '{role}' ({entry.where})")


def parse_file(path: str, *, tptp_root: Optional[str] = None, store: Optional[TermStore] = None) -> Problem:
    text = _read_source(Path(path))
    return parse_problem(text, store=store, path=str(path), tptp_root=tptp_root)


# ─────────────────────────────────────────────────────────────────────────────
# 핵심 문법 출력
# ─────────────────────────────────────────────────────────────────────────────
def _fmt_name(name: str) -> str:
    if name and name[0].islower() and all(ch.isalnum() or ch == "_" for ch in name):
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def format_term(st: TermStore, t: int, depth: int = 0) -> str:
    """bound 변수는 binder 깊이로 X0, X1 … 이름을 붙인다."""
    tag = st.tag(t)
    if tag == Tag.DB:
        return f"X{depth - 1 - st.num(t)}"
    if tag == Tag.CONST:
        return _fmt_name(st.name_of(st.num(t)))
    if tag == Tag.BOT:
        return "$false"
    if tag == Tag.IMP:
        if st.right(t) == st.bot:
            return f"(~ {format_term(st, st.left(t), depth)})"
        return f"({format_term(st, st.left(t), depth)} => {format_term(st, st.right(t), depth)})"
    if tag == Tag.EQ:
        return f"({format_term(st, st.left(t), depth)} = {format_term(st, st.right(t), depth)})"
    if tag in (Tag.ALL, Tag.LAM):
        q = "!" if tag == Tag.ALL else "^"
        return f"({q} [X{depth}: {st.format_ty(st.num(t))}]: {format_term(st, st.left(t), depth + 1)})"
    if tag == Tag.CHOICE:
        sigma = st.num(t)
        pred_ty = st.arrow_ty(sigma, st.prop)
        return (
            f"(^ [X{depth}: {st.format_ty(pred_ty)}]: "
            f"(@+ [X{depth + 1}: {st.format_ty(sigma)}]: (X{depth} @ X{depth + 1})))"
        )
    head, args = st.head_spine(t)
    parts: List[str] = []
    if st.tag(head) == Tag.CHOICE and args:
        sigma = st.num(head)
        body = st.mk_norm_ap(st.shift(args[0], 0, 1), st.mk_db(0))
        parts.append(f"(@+ [X{depth}: {st.format_ty(sigma)}]: {format_term(st, body, depth + 1)})")
        args = args[1:]
    else:
        parts.append(format_term(st, head, depth))
    parts.extend(format_term(st, a, depth) for a in args)
    if len(parts) == 1:
        return parts[0]
    return "(" + " @ ".join(parts) + ")"
