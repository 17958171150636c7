"""End-to-end pipelines and cross-checks against brute-force enumeration."""

import unittest
from unittest import mock

from analysis import MODELS_GUARANTEED, NO_MODELS_PROVEN
from engine import SolveResult, StableModelEngine, create_engine
from errors import ConfigError, CycleBudgetExceeded, DecompositionBudgetExceeded, UnfoldBudgetExceeded
from fake_programs import (AND_HANDLE_PROGRAM, NO_MODEL_PROGRAM, OR_HANDLE_PROGRAM, SEED, SIX_CYCLES_PROGRAM,
                           TWO_MODEL_PROGRAM, call_consistent_program, corpus, even_ring, random_program,
                           with_unconstrained_odd_ring)
from lp_parser import parse_program
from oracle import enumerate_stable_brute
from program import Interpretation, pretty_print, sort_models


def names(models):
    return [m.sorted_names() for m in models]


class TestSolve(unittest.TestCase):

    def setUp(self):
        self.engine = StableModelEngine()

    def test_fixed_programs(self):
        cases = [
            (OR_HANDLE_PROGRAM, [["b", "e", "h"]]),
            (AND_HANDLE_PROGRAM, [["a", "f", "p"]]),
            (NO_MODEL_PROGRAM, []),
            (SIX_CYCLES_PROGRAM, [["b", "k", "q", "w"]]),
            (TWO_MODEL_PROGRAM, [["p"], ["q"]]),
        ]
        for text, expected in cases:
            program = parse_program(text)
            for method in ("coloring", "decomposition", "brute"):
                with self.subTest(program=text.splitlines()[0], method=method):
                    self.assertEqual(names(self.engine.solve(program, method).models), expected)

    def test_reconstructs_stripped_atoms(self):
        program = parse_program("a :- not b.\nb :- not a.\nw :- not a.\nc.\nd :- c, not e.")
        expected = [["a", "c", "d"], ["b", "c", "d", "w"]]
        for method in ("coloring", "decomposition"):
            self.assertEqual(names(self.engine.solve(program, method).models), expected)

    def test_result_dict(self):
        result = self.engine.solve(parse_program(OR_HANDLE_PROGRAM))
        self.assertEqual(result.to_dict(),
                         {"models": [["b", "e", "h"]], "count": 1, "truncated": False, "method": "coloring"})

    def test_model_cap(self):
        engine = create_engine(max_models=1)
        program = parse_program(TWO_MODEL_PROGRAM)
        for method in ("coloring", "decomposition", "brute"):
            result = engine.solve(program, method)
            self.assertEqual(result.count, 1)
            self.assertTrue(result.truncated)

    def test_even_rings(self):
        for n in range(1, 6):
            names_ = [f"r{i}" for i in range(2 * n)]
            expected = sort_models([Interpretation.of(names_[0::2]), Interpretation.of(names_[1::2])])
            self.assertEqual(self.engine.solve(even_ring(n)).models, expected)


class TestAgreement(unittest.TestCase):

    def test_coloring_matches_brute_force(self):
        engine = create_engine(unfold_cap=20_000)
        checked = 0
        for program in corpus(random_program, 1000):
            try:
                actual = engine.solve(program, "coloring").models
            except UnfoldBudgetExceeded:
                continue
            self.assertEqual(actual, sort_models(enumerate_stable_brute(program)), pretty_print(program))
            checked += 1
        self.assertGreater(checked, 900)

    def test_decomposition_matches_coloring(self):
        engine = create_engine(unfold_cap=20_000, hypothesis_budget=4096)
        checked = 0
        for program in corpus(random_program, 200, seed=SEED + 1, max_atoms=8, max_rules=12):
            try:
                decomposed = engine.solve(program, "decomposition").models
            except (CycleBudgetExceeded, DecompositionBudgetExceeded, UnfoldBudgetExceeded):
                continue
            self.assertEqual(decomposed, engine.solve(program, "coloring").models, pretty_print(program))
            checked += 1
        self.assertGreater(checked, 0)

    def test_call_consistent_programs_have_models(self):
        engine = StableModelEngine()
        for program in corpus(call_consistent_program, 200, seed=SEED + 2, max_atoms=6, max_rules=8):
            self.assertEqual(engine.check(program).status, MODELS_GUARANTEED, pretty_print(program))
            self.assertGreaterEqual(len(enumerate_stable_brute(program)), 1)

    def test_unconstrained_odd_ring_has_no_models(self):
        engine = StableModelEngine()
        for program in corpus(with_unconstrained_odd_ring, 50, seed=SEED + 3, max_atoms=6, max_rules=8):
            self.assertEqual(engine.check(program).status, NO_MODELS_PROVEN, pretty_print(program))
            self.assertEqual(engine.solve(program).models, [])


class TestAnalyze(unittest.TestCase):

    def test_report(self):
        report = StableModelEngine().analyze(parse_program(SIX_CYCLES_PROGRAM))
        frame = report.to_frame()
        self.assertEqual(list(frame.columns), ["cycle", "parity", "vertices", "handles", "H", "auxiliary"])
        self.assertEqual(list(frame["cycle"]), ["C1", "C2", "C3", "C4", "C5", "C6"])
        self.assertEqual(frame.loc[2, "H"], "p, v")
        bridge = report.to_dict()["bridges"][0]
        self.assertEqual(bridge, {
            "chain": ["w", "v", "q'"],
            "rules": ["w :- not a.", "v :- not w.", "q :- not v."],
            "from": ["C4"],
            "to": ["C2", "C3"],
        })

    def test_report_on_kernel(self):
        report = StableModelEngine().analyze(parse_program("a :- not b.\nb :- not a.\nw :- not a.\nc."))
        self.assertEqual([c.name for c in report.cycles], ["C1"])
        self.assertEqual(report.log.established_facts, frozenset({"c"}))


class TestVerify(unittest.TestCase):

    def test_match(self):
        result = StableModelEngine().verify(parse_program(AND_HANDLE_PROGRAM))
        self.assertTrue(result.matches)
        self.assertEqual(result.summary(), "coloring == brute: 1 model")

    def test_frame_lists_both_sides(self):
        result = StableModelEngine().verify(parse_program(TWO_MODEL_PROGRAM), "decomposition")
        frame = result.to_frame()
        self.assertEqual(list(frame["model"]), ["{p}", "{q}"])
        self.assertTrue(frame["brute"].all())


class TestEngineFactory(unittest.TestCase):

    def test_overrides(self):
        engine = create_engine(method="brute", heuristic="lex", max_models=None)
        self.assertEqual(engine.config.method, "brute")
        self.assertEqual(engine.config.heuristic, "lex")

    def test_invalid_override(self):
        with self.assertRaises(ConfigError):
            create_engine(max_models=0)

    def test_environment(self):
        with mock.patch.dict("os.environ", {"STABLEGRAPH_ATOM_CAP": "3"}):
            engine = create_engine()
        self.assertEqual(engine.config.atom_cap, 3)

    def test_run_safely(self):
        engine = create_engine(atom_cap=2)
        program = parse_program(TWO_MODEL_PROGRAM)
        result, error = engine.run_safely(engine.solve, program, "brute")
        self.assertIsNone(result)
        self.assertIn("TOO MANY ATOMS", error)
        result, error = engine.run_safely(engine.solve, program)
        self.assertIsNone(error)
        self.assertIsInstance(result, SolveResult)

    def test_run_safely_hides_internal_errors(self):
        engine = create_engine()
        with self.assertLogs("engine", level="ERROR"):
            result, error = engine.run_safely(lambda: 1 / 0)
        self.assertIsNone(result)
        self.assertEqual(error, "❌ Internal error: analysis failed")


if __name__ == '__main__':
    unittest.main()
