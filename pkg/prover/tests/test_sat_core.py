import random
import time

from django.test import SimpleTestCase

from prover.services.sat_core import PropagationOutcome, PropLiterals, SatCore, SatStatus
from prover.services.term_store import TermStore
from prover.tests import naive


def _load(clauses, backjump=True):
    core = SatCore(backjump=backjump)
    for c in clauses:
        core.add_clause(c)
    return core


class PropLiteralsTests(SimpleTestCase):
    def test_negation_flips_sign(self):
        st = TermStore()
        lits = PropLiterals(st)
        q = st.const("q", st.prop)
        v = lits.lit_of(q)
        self.assertGreater(v, 0)
        self.assertEqual(lits.lit_of(st.mk_neg(q)), -v)
        self.assertEqual(lits.lit_of(st.mk_neg(st.mk_neg(q))), v)
        self.assertEqual(lits.prop_of_lit(-v), st.mk_neg(q))

    def test_numbers_in_first_seen_order(self):
        st = TermStore()
        lits = PropLiterals(st)
        a, b = st.const("a", st.prop), st.const("b", st.prop)
        self.assertEqual(lits.lit_of(st.mk_neg(b)), -1)
        self.assertEqual(lits.lit_of(a), 2)
        self.assertEqual(lits.num_vars, 2)


class SatCoreTests(SimpleTestCase):
    def test_unit_propagation_conflict(self):
        core = SatCore()
        self.assertIs(core.add_clause([1, 2]), PropagationOutcome.NO_CONFLICT)
        self.assertIs(core.add_clause([-1]), PropagationOutcome.NO_CONFLICT)
        self.assertEqual(core.value(2), 1)
        self.assertIs(core.add_clause([-2]), PropagationOutcome.CONFLICT)
        self.assertTrue(core.unsat)
        self.assertIs(core.solve(False), SatStatus.UNSAT)

    def test_empty_clause_is_unsat(self):
        core = SatCore()
        self.assertIs(core.add_clause([]), PropagationOutcome.CONFLICT)
        self.assertIs(core.solve(), SatStatus.UNSAT)

    def test_tautology_is_dropped(self):
        core = SatCore()
        core.add_clause([3, -3])
        self.assertEqual(core.clauses, [])

    def test_literal_zero_rejected(self):
        with self.assertRaises(ValueError):
            SatCore().add_clause([1, 0])

    def test_propagation_only_misses_search_conflicts(self):
        clauses = [[1, 2], [1, -2], [-1, 2], [-1, -2]]
        core = _load(clauses)
        self.assertIs(core.solve(False), SatStatus.SAT)
        self.assertIs(core.solve(True), SatStatus.UNSAT)
        self.assertTrue(core.unsat)

    def test_solve_returns_to_level_zero(self):
        core = _load([[1, 2], [-1, 3]])
        self.assertIs(core.solve(), SatStatus.SAT)
        self.assertEqual(core.decision_level, 0)
        core.add_clause([-3])
        self.assertIs(core.solve(), SatStatus.SAT)
        core.add_clause([-2])
        self.assertIs(core.solve(), SatStatus.UNSAT)

    def test_past_deadline_gives_unknown(self):
        clauses = [[2 * i + 1, 2 * i + 2] for i in range(400)]
        core = _load(clauses)
        self.assertIs(core.solve(True, time.monotonic() - 1.0), SatStatus.UNKNOWN)
        self.assertFalse(core.unsat)
        self.assertIs(core.solve(True), SatStatus.SAT)

    def test_dimacs(self):
        core = _load([[1, -2], [2, 3]])
        text = core.to_dimacs(5)
        lines = text.splitlines()
        self.assertEqual(lines[0], "p cnf 5 2")
        self.assertEqual(lines[1:], ["1 -2 0", "2 3 0"])


class SatOracleTests(SimpleTestCase):
    """진리표와 비교 (n ≤ 12)."""

    def _check(self, backjump):
        rng = random.Random(4242 if backjump else 2424)
        seen = {True: 0, False: 0}
        for _ in range(1000):
            clauses, n = naive.random_clause_set(rng)
            expected = naive.brute_force_sat(clauses, n)
            got = _load(clauses, backjump).solve()
            self.assertEqual(got is SatStatus.SAT, expected, clauses)
            seen[expected] += 1
        self.assertGreater(seen[True], 50)
        self.assertGreater(seen[False], 50)

    def test_backjumping_matches_truth_table(self):
        self._check(True)

    def test_chronological_matches_truth_table(self):
        self._check(False)

    def test_incremental_clauses_match_truth_table(self):
        rng = random.Random(99)
        for _ in range(200):
            clauses, n = naive.random_clause_set(rng, max_vars=8)
            core = SatCore()
            for k, c in enumerate(clauses, 1):
                core.add_clause(c)
                expected = naive.brute_force_sat(clauses[:k], n)
                self.assertEqual(core.solve() is SatStatus.SAT, expected)
                if not expected:
                    break
