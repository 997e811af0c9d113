# prover/services/problem_gen.py
"""문제 생성기: Church 수 C^n 과 Ramsey 계열 (THF 텍스트 + Problem)."""
from __future__ import annotations

import logging
from itertools import combinations
from pathlib import Path
from typing import List, Optional

from prover.services.term_store import TermStore
from prover.services.tptp_front import Problem, parse_problem

log = logging.getLogger(__name__)


# ─────────────────────────────────────────────────────────────────────────────
# C^n
# ─────────────────────────────────────────────────────────────────────────────
def church_numeral(n: int) -> str:
    body = "X"
    for _ in range(n):
        body = f"(F @ {body})"
    return f"(^ [F: $i > $i, X: $i]: {body})"


def church_eq_text(n: int) -> str:
    if n < 1:
        raise ValueError("n must be at least 1")
    num = church_numeral(n)
    dup = "(^ [X: $i]: (cons @ X @ X))"
    lhs = f"({num} @ {dup} @ (cons @ nil @ nil))"
    half = f"({num} @ {dup} @ nil)"
    rhs = f"(cons @ {half} @ {half})"
    return (
        f"% C^{n}: 양변 정규형이 같은 깊이 {n + 1} 완전 이진 트리\n"
        "thf(cons_type, type, cons: $i > $i > $i).\n"
        "thf(nil_type, type, nil: $i).\n"
        f"thf(church_{n}, conjecture, ({lhs} = {rhs})).\n"
    )


def gen_church_eq(n: int, *, out: Optional[str] = None, store: Optional[TermStore] = None) -> Problem:
    text = church_eq_text(n)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    return parse_problem(text, store=store, path=out)


# ─────────────────────────────────────────────────────────────────────────────
# Ramsey: n 개 서로 다른 원소 + 대칭 R ⇒ clique 크기 k 또는 독립 집합 크기 l
# ─────────────────────────────────────────────────────────────────────────────
def _distinct(names: List[str]) -> List[str]:
    return [f"({a} != {b})" for a, b in combinations(names, 2)]


def _conj(parts: List[str]) -> str:
    if len(parts) == 1:
        return parts[0]
    return "(" + " & ".join(parts) + ")"


def _binder(names: List[str]) -> str:
    return ", ".join(f"{v}: $i" for v in names)


def ramsey_text(clique: int, indep: int, n: int) -> str:
    if clique < 2 or indep < 2 or n < 1:
        raise ValueError("need clique >= 2, indep >= 2, n >= 1")
    us = [f"U{i}" for i in range(1, n + 1)]
    xs = [f"X{i}" for i in range(1, clique + 1)]
    ys = [f"Y{i}" for i in range(1, indep + 1)]

    symmetric = "(! [A: $i, B: $i]: ((R @ A @ B) => (R @ B @ A)))"
    many = _conj(_distinct(us)) if n > 1 else "$true"
    elements = f"(? [{_binder(us)}]: {many})"
    edges = [f"(R @ {a} @ {b})" for a, b in combinations(xs, 2)]
    holes = [f"(~ (R @ {a} @ {b}))" for a, b in combinations(ys, 2)]
    has_clique = f"(? [{_binder(xs)}]: {_conj(_distinct(xs) + edges)})"
    has_indep = f"(? [{_binder(ys)}]: {_conj(_distinct(ys) + holes)})"
    goal = (
        f"(! [R: $i > $i > $o]: ({symmetric} => ({elements} => ({has_clique} | {has_indep}))))"
    )
    return (
        f"% R({clique},{indep}) <= {n}\n"
        f"thf(ramsey_{clique}_{indep}_{n}, conjecture, {goal}).\n"
    )


def gen_ramsey(clique: int, indep: int, n: int, *, out: Optional[str] = None,
               store: Optional[TermStore] = None) -> Problem:
    text = ramsey_text(clique, indep, n)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    return parse_problem(text, store=store, path=out)
