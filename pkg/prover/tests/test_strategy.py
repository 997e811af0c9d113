import io
import tempfile
from fractions import Fraction
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from prover.flag_defaults import BOOL_FLAGS, DEFAULT_FLAGS, FLAG_DOCS
from prover.services.config_runtime import bust_cache
from prover.services.corpus import bundled, fast_problems
from prover.services.errors import ModeParseError, UnknownFlag
from prover.services.strategy import (
    Schedule,
    Slice,
    available_modes,
    default_schedule,
    load_mode,
    parse_mode_text,
    parse_schedule_text,
    resolve_mode,
    run_mode,
    run_schedule,
    run_schedule_parallel,
    single_mode_schedule,
)
from prover.services.tableau_engine import Status
from prover.services.tptp_front import parse_file, parse_problem

TRUE_CONJ = "thf(c, conjecture, $true).\n"
NOT_PROVABLE = "thf(q_t, type, q: $o).\nthf(c, conjecture, q).\n"


class FlagTableTests(SimpleTestCase):
    def test_every_flag_documented(self):
        self.assertEqual(set(FLAG_DOCS), set(DEFAULT_FLAGS))
        self.assertIn("sat_search_delay", BOOL_FLAGS)
        self.assertNotIn("mate_priority", BOOL_FLAGS)


class ModeParsingTests(SimpleTestCase):
    def test_empty_mode_is_defaults(self):
        self.assertEqual(parse_mode_text(""), DEFAULT_FLAGS)
        self.assertEqual(parse_mode_text("% 주석만\n\n"), DEFAULT_FLAGS)

    def test_overrides(self):
        flags = parse_mode_text("sat_search_delay true  % 전파만\nmate_priority 7\nenable_choice off\n")
        self.assertIs(flags["sat_search_delay"], True)
        self.assertEqual(flags["mate_priority"], 7)
        self.assertIs(flags["enable_choice"], False)
        self.assertEqual(flags["process_priority"], DEFAULT_FLAGS["process_priority"])

    def test_unknown_flag(self):
        with self.assertRaises(UnknownFlag) as cm:
            parse_mode_text("mate_priority 1\nbogus_flag 1\n")
        self.assertEqual(cm.exception.name, "bogus_flag")
        self.assertEqual(cm.exception.line, 2)

    def test_bad_values(self):
        for text in ("sat_search_delay maybe", "mate_priority high", "mate_priority -1", "mate_priority"):
            with self.assertRaises(ModeParseError, msg=text):
                parse_mode_text(text)

    def test_load_mode_from_file(self):
        with tempfile.TemporaryDirectory() as d:
            p = Path(d) / "m.mode"
            p.write_text("age_shift 3\n", encoding="utf-8")
            self.assertEqual(load_mode(p)["age_shift"], 3)
            name, flags = resolve_mode(str(p))
        self.assertEqual(name, "m")
        self.assertEqual(flags["age_shift"], 3)

    def test_unknown_mode_name(self):
        bust_cache()
        with self.assertRaises(FileNotFoundError):
            resolve_mode("no_such_mode")


class BundledModesTests(SimpleTestCase):
    def setUp(self):
        bust_cache()

    def test_five_modes_and_schedule(self):
        names = available_modes()
        self.assertEqual(len(names), 5)
        for name in names:
            resolve_mode(name)
        sched = default_schedule()
        self.assertEqual(len(sched.slices), 5)
        self.assertEqual(sched.total, 10)
        self.assertTrue(all(s.mode in names for s in sched.slices))

    def test_check_modes_command(self):
        call_command("check_modes", stdout=io.StringIO())

    def test_check_modes_reports_broken_mode(self):
        with tempfile.TemporaryDirectory() as d:
            (Path(d) / "broken.mode").write_text("nope 1\n", encoding="utf-8")
            (Path(d) / "default.sched").write_text("broken 1\n", encoding="utf-8")
            with override_settings(PROVER_MODES_DIR=d):
                bust_cache()
                with self.assertRaises(CommandError):
                    call_command("check_modes", stdout=io.StringIO())
        bust_cache()


class ScheduleTests(SimpleTestCase):
    def setUp(self):
        bust_cache()

    def test_parse_and_scale(self):
        sched = parse_schedule_text("a 3\nb 2 % 주석\nc 1/2\n")
        self.assertEqual([s.mode for s in sched.slices], ["a", "b", "c"])
        self.assertEqual(sched.total, Fraction(11, 2))
        scaled = sched.scaled(11)
        self.assertEqual(scaled.total, 11)
        self.assertEqual(scaled.slices[0].seconds, 6)

    def test_default_schedule_shares(self):
        scaled = default_schedule().scaled(5)
        self.assertEqual(scaled.total, 5)
        self.assertEqual([float(s.seconds) for s in scaled.slices], [1.5, 1.0, 1.0, 1.0, 0.5])

    def test_bad_schedule_lines(self):
        for text in ("a", "a zero", "a 0", "a -1"):
            with self.assertRaises(ModeParseError, msg=text):
                parse_schedule_text(text)

    def test_single_mode_on_trivial_problem(self):
        res = run_schedule(parse_problem(TRUE_CONJ), single_mode_schedule("mode_delay", 1), 1.0)
        self.assertIs(res.status, Status.THEOREM)
        self.assertEqual(res.mode, "mode_delay")

    def test_all_slices_give_up(self):
        sched = Schedule([Slice("mode_delay", Fraction(1)), Slice("mode_core", Fraction(1))])
        res = run_schedule(parse_problem(NOT_PROVABLE), sched, 2.0)
        self.assertIs(res.status, Status.GAVE_UP)
        self.assertEqual(res.mode, "mode_core")

    def test_empty_schedule(self):
        res = run_schedule(parse_problem(NOT_PROVABLE), Schedule([]), 1.0)
        self.assertIs(res.status, Status.GAVE_UP)

    def test_slices_use_fresh_stores(self):
        problem = parse_problem(NOT_PROVABLE)
        seen = []

        def hook(mode, engine):
            seen.append((mode, engine.store, engine.store.node_count))

        sched = Schedule([Slice("mode_core", Fraction(1)), Slice("mode_delay", Fraction(1))])
        run_schedule(problem, sched, 2.0, engine_hook=hook)
        self.assertEqual([m for m, _, _ in seen], ["mode_core", "mode_delay"])
        self.assertIsNot(seen[0][1], seen[1][1])
        self.assertIsNot(seen[0][1], problem.store)
        # 같은 원문을 새로 읽으므로 노드 수도 같은 값에서 시작
        self.assertEqual(seen[0][2], seen[1][2])
        self.assertEqual(seen[0][2], problem.store.node_count)

    def test_parallel_runner(self):
        problem = parse_file(str(bundled("sev241_5.p")))
        res = run_schedule_parallel(problem, default_schedule(), 10.0)
        self.assertIs(res.status, Status.THEOREM)


class ScheduleValueTests(SimpleTestCase):
    """기본 스케줄 vs 단일 모드 (번들 문제)."""

    def setUp(self):
        bust_cache()

    def test_schedule_beats_worst_single_mode(self):
        paths = fast_problems()
        self.assertGreaterEqual(len(paths), 8)
        sched = default_schedule()
        modes = sorted({s.mode for s in sched.slices})

        solved_by_schedule = 0
        solved_by_mode = {m: 0 for m in modes}
        for path in paths:
            problem = parse_file(str(path))
            if run_schedule(problem, sched, 10.0).status is Status.THEOREM:
                solved_by_schedule += 1
            for m in modes:
                res = run_mode(problem.reload(), resolve_mode(m)[1], 10.0)
                if res.status is Status.THEOREM:
                    solved_by_mode[m] += 1
        self.assertGreater(solved_by_schedule, min(solved_by_mode.values()))


class BundledProblemTimingTests(SimpleTestCase):
    def setUp(self):
        bust_cache()

    def _prove(self, name, wall):
        problem = parse_file(str(bundled(name)))
        return run_schedule(problem, default_schedule(), wall)

    def test_sev241_under_single_mode(self):
        problem = parse_file(str(bundled("sev241_5.p")))
        res = run_mode(problem, resolve_mode("mode_delay")[1], 1.0)
        self.assertIs(res.status, Status.THEOREM)
        self.assertLess(res.elapsed, 1.0)

    def test_num638(self):
        res = self._prove("num638_1.p", 10.0)
        self.assertIs(res.status, Status.THEOREM)
        self.assertLess(res.elapsed, 10.0)

    def test_syo506(self):
        res = self._prove("syo506_1.p", 10.0)
        self.assertIs(res.status, Status.THEOREM)
        self.assertLess(res.elapsed, 10.0)

    def test_ramsey_3_3_6(self):
        res = self._prove("sev108_5.p", 60.0)
        self.assertIs(res.status, Status.THEOREM)
