import random
import threading

from django.test import SimpleTestCase

from prover.services.corpus import bundled
from prover.services.errors import TypeMismatch
from prover.services.tableau_engine import (
    CmdKind,
    Progress,
    Status,
    TableauEngine,
    search,
)
from prover.services.term_store import Tag, TermStore
from prover.services.tptp_front import negate_conjecture, parse_file, parse_problem
from prover.tests import naive

NOT_A_THEOREM = """
thf(p_t, type, p: $i > $o).
thf(q_t, type, q: $i > $o).
thf(a_t, type, a: $i).
thf(b_t, type, b: $i).
thf(imp, axiom, ! [X: $i]: ((p @ X) => (q @ X))).
thf(pa, axiom, (p @ a)).
thf(npb, axiom, (~ (p @ b))).
thf(g, conjecture, (q @ b)).
"""


def _run(problem, flags=None, timeout=10.0, **kwargs):
    engine = TableauEngine(problem.store, flags, **kwargs)
    return engine, engine.search(negate_conjecture(problem), timeout)


def _bundled(name):
    return parse_file(str(bundled(name)))


class SearchBasicsTests(SimpleTestCase):
    def test_bottom_closes_without_steps(self):
        st = TermStore()
        res = search(st, [st.bot])
        self.assertIs(res.status, Status.THEOREM)
        self.assertEqual(res.steps, 0)

    def test_empty_branch_gives_up(self):
        res = search(TermStore(), [])
        self.assertIs(res.status, Status.GAVE_UP)
        self.assertEqual(res.steps, 0)

    def test_status_values(self):
        self.assertEqual(Status.THEOREM.value, "Theorem")
        self.assertEqual(Status.GAVE_UP.value, "GaveUp")
        self.assertEqual(Status.TIMEOUT.value, "Timeout")

    def test_same_prop_is_queued_once(self):
        st = TermStore()
        q = st.const("q", st.prop)
        engine = TableauEngine(st)
        engine.assert_prop(q)
        engine.assert_prop(q)
        engine.consider(q)
        self.assertEqual(engine.queue_size, 1)

    def test_double_negation_forwards(self):
        st = TermStore()
        q = st.const("q", st.prop)
        engine = TableauEngine(st)
        engine.assert_prop(st.mk_neg(st.mk_neg(q)))
        while engine.step() is Progress.PROGRESS:
            pass
        self.assertIn(q, engine.state.processed)
        self.assertEqual(engine.sat.value(engine.lit(q)), 1)

    def test_boolean_forall_instantiates_with_truth_values(self):
        problem = parse_problem("thf(x, axiom, ! [P: $o]: P).\n")
        _, res = _run(problem)
        self.assertIs(res.status, Status.THEOREM)

    def test_eta_equal_functions_close_at_assert_time(self):
        _, res = _run(_bundled("eta_fun_ext.p"))
        self.assertIs(res.status, Status.THEOREM)
        self.assertEqual(res.steps, 0)

    def test_timeout(self):
        _, res = _run(_bundled("sev108_5.p"), timeout=0.05)
        self.assertIs(res.status, Status.TIMEOUT)

    def test_cancel_event_stops_search(self):
        cancel = threading.Event()
        cancel.set()
        _, res = _run(_bundled("sev108_5.p"), cancel=cancel)
        self.assertIs(res.status, Status.TIMEOUT)

    def test_instantiate_checks_witness_type(self):
        st = TermStore()
        i = st.base_ty("$i")
        p = st.const("p", st.arrow_ty(i, st.prop))
        forall = st.mk_all(i, st.mk_norm_ap(p, st.mk_db(0)))
        engine = TableauEngine(st)
        with self.assertRaises(TypeMismatch):
            engine.rule_instantiate(forall, st.const("q", st.prop))

    def test_stats_are_reported(self):
        _, res = _run(_bundled("sev241_5.p"))
        for key in ("nodes", "vars", "clauses", "queue", "decisions", "conflicts"):
            self.assertIn(key, res.stats)


class ClosureAndMatingTests(SimpleTestCase):
    def test_reflexive_disequation_closes_immediately(self):
        rng = random.Random(11)
        st = TermStore()
        sig = naive.Sig(st)
        for _ in range(100):
            ty = rng.choice([sig.i, sig.o, sig.ii, sig.io])
            s = naive.to_store(st, naive.random_closed(rng, sig, ty, budget=rng.randint(1, 12)))
            engine = TableauEngine(st)
            engine.assert_prop(st.mk_neq(ty, s, s))
            self.assertTrue(engine.sat.unsat)

    def test_mate_clause_has_arity_plus_two(self):
        rng = random.Random(5)
        st = TermStore()
        sig = naive.Sig(st)
        preds = {k: st.const(f"r{k}", st.arrow_ty(*([sig.i] * k), st.prop)) for k in (1, 2, 3)}
        for _ in range(50):
            k = rng.randint(1, 3)
            sargs = [naive.to_store(st, naive.random_closed(rng, sig, sig.i, 6)) for _ in range(k)]
            targs = [naive.to_store(st, naive.random_closed(rng, sig, sig.i, 6)) for _ in range(k)]
            if sargs == targs:
                continue
            pos = st.mk_norm_aps(preds[k], *sargs)
            neg = st.mk_neg(st.mk_norm_aps(preds[k], *targs))
            engine = TableauEngine(st, record_clauses=True)
            res = engine.search([pos, neg], 5.0)
            self.assertIn(res.status, (Status.THEOREM, Status.GAVE_UP))
            mates = [c for rule, c in engine.emitted if rule == "mate"]
            self.assertTrue(mates)
            for c in mates:
                self.assertEqual(len(c), k + 2)
                self.assertEqual(c[:2], [-engine.lit(pos), -engine.lit(neg)])

    def test_confront_emits_two_clauses(self):
        rng = random.Random(8)
        st = TermStore()
        sig = naive.Sig(st)
        for _ in range(50):
            s, t, u, v = (naive.to_store(st, naive.random_closed(rng, sig, sig.i, 6)) for _ in range(4))
            eqn = st.mk_eq(sig.i, s, t)
            diseq = st.mk_neq(sig.i, u, v)
            engine = TableauEngine(st, record_clauses=True)
            engine.rule_confront(eqn, diseq)
            lit = engine.lit
            head = [-lit(eqn), -lit(diseq)]
            self.assertEqual(
                [c for rule, c in engine.emitted if rule == "confront"],
                [
                    head + [lit(st.mk_neq(sig.i, s, u)), lit(st.mk_neq(sig.i, s, v))],
                    head + [lit(st.mk_neq(sig.i, t, u)), lit(st.mk_neq(sig.i, t, v))],
                ],
            )

    def test_mating_different_heads_does_nothing(self):
        st = TermStore()
        i = st.base_ty("$i")
        a = st.const("a", i)
        p = st.const("p", st.arrow_ty(i, st.prop))
        q = st.const("q", st.arrow_ty(i, st.prop))
        engine = TableauEngine(st, record_clauses=True)
        engine.rule_mate(st.mk_norm_ap(p, a), st.mk_neg(st.mk_norm_ap(q, a)))
        self.assertFalse([c for rule, c in engine.emitted if rule == "mate"])


class InstantiationTests(SimpleTestCase):
    def _check_discriminating(self, engine):
        st, S = engine.store, engine.state
        for ty, insts in S.instantiations.items():
            if not st.is_sort(ty):
                continue
            expected = set(S.diseq_sides.get(ty, {}))
            if ty in S.defaults:
                expected.add(S.defaults[ty])
            self.assertEqual(set(insts), expected)

    def test_sort_instantiations_are_discriminating_terms(self):
        for name in ("sev241_5.p", "num638_1.p", "drinker.p"):
            problem = _bundled(name)
            holder = {}

            def check(_ev):
                self._check_discriminating(holder["engine"])

            engine = TableauEngine(problem.store, trace=check)
            holder["engine"] = engine
            engine.search(negate_conjecture(problem), 10.0)
            self._check_discriminating(engine)

    def test_every_forall_meets_every_instantiation(self):
        engine, res = _run(parse_problem(NOT_A_THEOREM))
        self.assertIs(res.status, Status.GAVE_UP)
        S = engine.state
        self.assertTrue(S.processed_foralls)
        for ty, foralls in S.processed_foralls.items():
            for f in foralls:
                for w in S.instantiations.get(ty, {}):
                    self.assertIn((f, w), S.executed_insts)

    def test_default_instantiation_without_disequations(self):
        problem = parse_problem(
            "thf(p_t, type, p: $i > $o).\n"
            "thf(all, axiom, ! [X: $i]: (p @ X)).\n"
            "thf(g, conjecture, $false).\n"
        )
        engine, res = _run(problem)
        self.assertIs(res.status, Status.GAVE_UP)
        i = problem.store.base_ty("$i")
        self.assertEqual(list(engine.state.instantiations[i]), [engine.state.defaults[i]])

    def test_function_quantifier_picks_up_later_terms(self):
        _, res = _run(_bundled("fun_inst.p"))
        self.assertIs(res.status, Status.THEOREM)
        _, res = _run(_bundled("fun_inst.p"), {"enable_fun_harvest": False})
        self.assertIs(res.status, Status.GAVE_UP)

    def test_choice_rule(self):
        _, res = _run(_bundled("choice_witness.p"))
        self.assertIs(res.status, Status.THEOREM)
        _, res = _run(_bundled("choice_witness.p"), {"enable_choice": False})
        self.assertIs(res.status, Status.GAVE_UP)

    def test_sev241_trace(self):
        problem = _bundled("sev241_5.p")
        events = []
        _, res = _run(problem, trace=events.append)
        self.assertIs(res.status, Status.THEOREM)
        st = problem.store
        witness = st.const("#1", st.base_ty("a"))
        kinds = [ev.kind for ev in events]
        first_default = kinds.index(CmdKind.DEFAULT_INST)
        first_mate = kinds.index(CmdKind.MATE, first_default)
        later = [
            ev for ev in events[first_mate:]
            if ev.kind == CmdKind.INSTANTIATE and ev.other == witness
        ]
        self.assertTrue(later)
        self.assertEqual(st.tag(later[0].principal), Tag.ALL)

    def test_literals_respect_negation(self):
        for name in ("sev241_5.p", "num638_1.p", "syo506_1.p", "sev108_5.p"):
            problem = _bundled(name)
            engine, _ = _run(problem, timeout=5.0)
            st = problem.store
            self.assertGreater(engine.lits.num_vars, 0, msg=name)
            for v in range(1, engine.lits.num_vars + 1):
                p = engine.lits.prop_of[v]
                self.assertEqual(engine.lit(st.mk_neg(p)), -v, msg=name)
                self.assertEqual(engine.lit(p), v, msg=name)
                self.assertFalse(st.is_neg(p), msg=name)


class DeterminismTests(SimpleTestCase):
    def test_same_problem_same_trace(self):
        runs = []
        for _ in range(2):
            events = []
            _, res = _run(_bundled("num638_1.p"), trace=events.append)
            runs.append((res.status, res.steps, [ev.format() for ev in events]))
        self.assertEqual(runs[0], runs[1])

    def test_sat_scheduling_does_not_change_verdict(self):
        for name in ("sev241_5.p", "drinker.p", "bool_ext.p"):
            verdicts = set()
            for flags in ({"sat_search_delay": False}, {"sat_search_delay": True, "sat_search_period": 16},
                          {"sat_backjump": False}):
                _, res = _run(_bundled(name), flags)
                verdicts.add(res.status)
            self.assertEqual(verdicts, {Status.THEOREM}, name)


class PropositionalSoundnessTests(SimpleTestCase):
    ATOMS = ["p1", "p2", "p3", "p4"]

    def _problems(self):
        rng = random.Random(31337)
        invalid, valid = [], []
        while len(invalid) < 200 or len(valid) < 50:
            f = naive.random_prop(rng, self.ATOMS, 4)
            text = naive.prop_problem_text(f, self.ATOMS)
            if naive.is_valid(f, self.ATOMS):
                if len(valid) < 50:
                    valid.append(text)
            elif len(invalid) < 200:
                invalid.append(text)
        return invalid, valid

    def test_countersatisfiable_problems_are_never_proved(self):
        invalid, _ = self._problems()
        for text in invalid:
            _, res = _run(parse_problem(text), timeout=5.0)
            self.assertIs(res.status, Status.GAVE_UP, text)

    def test_valid_problems_are_proved(self):
        _, valid = self._problems()
        for text in valid:
            _, res = _run(parse_problem(text), timeout=5.0)
            self.assertIs(res.status, Status.THEOREM, text)


class FreshNameTests(SimpleTestCase):
    def test_witness_skips_names_already_in_store(self):
        st = TermStore()
        i = st.base_ty("$i")
        taken = st.const("#1", i)
        engine = TableauEngine(st)
        w = engine._fresh_const(i)
        self.assertNotEqual(w, taken)
        self.assertNotEqual(st.name_of(st.num(w)), "#1")

    def test_witness_never_reuses_a_signature_constant(self):
        st = TermStore()
        i = st.base_ty("$i")
        p = st.const("p", st.arrow_ty(i, st.prop))
        c = st.const("#1", i)
        every = st.mk_all(i, st.mk_norm_ap(p, st.mk_db(0)))
        res = TableauEngine(st).search([st.mk_norm_ap(p, c), st.mk_neg(every)], 5.0)
        self.assertIsNot(res.status, Status.THEOREM)


# (q, r) 진리값 → 결과
CONNECTIVES = {
    "|": lambda a, b: a or b,
    "&": lambda a, b: a and b,
    "=>": lambda a, b: (not a) or b,
    "<=": lambda a, b: a or (not b),
    "<=>": lambda a, b: a == b,
    "<~>": lambda a, b: a != b,
    "~|": lambda a, b: not (a or b),
    "~&": lambda a, b: not (a and b),
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}


def _tv(b):
    return "$true" if b else "$false"


class ConnectiveTruthTableTests(SimpleTestCase):
    def _status(self, conjecture):
        _, res = _run(parse_problem(f"thf(c, conjecture, {conjecture}).\n"), timeout=5.0)
        return res.status

    def test_binary_connectives_match_truth_table(self):
        for op, fn in CONNECTIVES.items():
            for a in (True, False):
                for b in (True, False):
                    lhs = f"({_tv(a)} {op} {_tv(b)})"
                    right = f"({lhs} <=> {_tv(fn(a, b))})"
                    wrong = f"({lhs} <=> {_tv(not fn(a, b))})"
                    self.assertIs(self._status(right), Status.THEOREM, right)
                    self.assertIsNot(self._status(wrong), Status.THEOREM, wrong)

    def test_exists_over_o(self):
        for op, fn in CONNECTIVES.items():
            for b in (True, False):
                for text, expected in (
                    (f"(? [X: $o]: (X {op} {_tv(b)}))", fn(True, b) or fn(False, b)),
                    (f"(? [X: $o]: ({_tv(b)} {op} X))", fn(b, True) or fn(b, False)),
                ):
                    status = self._status(text)
                    if expected:
                        self.assertIs(status, Status.THEOREM, text)
                    else:
                        self.assertIsNot(status, Status.THEOREM, text)

    def test_forall_over_o(self):
        for op, fn in CONNECTIVES.items():
            text = f"(! [X: $o]: (X {op} X))"
            expected = fn(True, True) and fn(False, False)
            status = self._status(text)
            if expected:
                self.assertIs(status, Status.THEOREM, text)
            else:
                self.assertIsNot(status, Status.THEOREM, text)
