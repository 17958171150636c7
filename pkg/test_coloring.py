"""Admissible colorings of kernel EDGs."""

import itertools
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from coloring import (GREEN, GREEN_GREEN_EDGE, RED, RED_ALL_RED_IN, Coloring, branch_order,
                      check_kernel_graph, coloring_to_interpretation, interpretation_to_coloring,
                      is_admissible, propagate, solve_colorings)
from errors import NotKernelProgram
from fake_programs import MAX_KERNEL_VERTICES, OR_HANDLE_PROGRAM, SIX_CYCLES_PROGRAM, random_kernel_program
from graphs import build_edg
from lp_parser import parse_program
from oracle import enumerate_stable_brute
from program import Interpretation, sort_models


def edg(text):
    return build_edg(parse_program(text))


class TestAdmissibility(unittest.TestCase):

    def setUp(self):
        self.g = edg(OR_HANDLE_PROGRAM)

    def test_model_coloring(self):
        coloring = Coloring.from_green(self.g, ["b", "e", "h'"])
        self.assertTrue(is_admissible(self.g, coloring))
        self.assertEqual(coloring_to_interpretation(self.g, coloring).sorted_names(), ["b", "e", "h"])

    def test_green_green_edge(self):
        check = is_admissible(self.g, Coloring.from_green(self.g, ["a", "b", "e", "h'"]))
        self.assertFalse(check)
        kinds = {(v.kind, str(v.witness)) for v in check.violations}
        self.assertIn((GREEN_GREEN_EDGE, "<a, b, ->"), kinds)
        self.assertIn((GREEN_GREEN_EDGE, "<a, h', ->"), kinds)

    def test_green_e_and_h(self):
        check = is_admissible(self.g, Coloring.from_green(self.g, ["b", "e", "h"]))
        self.assertIn("green_green_edge at <e, h, ->", [str(v) for v in check.violations])

    def test_f_without_green_in_neighbor(self):
        check = is_admissible(self.g, Coloring.from_green(self.g, ["b", "e"]))
        self.assertEqual([(v.kind, v.witness.label) for v in check.violations],
                         [(RED_ALL_RED_IN, "f"), (RED_ALL_RED_IN, "h'")])

    def test_empty_body_set_is_not_a_model(self):
        g = edg("p :- not p.")
        coloring = interpretation_to_coloring(g, Interpretation())
        self.assertEqual(coloring.green_labels(), ["p"])
        self.assertFalse(is_admissible(g, coloring))

    def test_empty_graph(self):
        g = edg("")
        self.assertEqual(coloring_to_interpretation(g, Coloring()), Interpretation())

    def test_all_red(self):
        check = is_admissible(self.g, Coloring.from_green(self.g, []))
        self.assertEqual(len(check.violations), 7)
        self.assertTrue(all(v.kind == RED_ALL_RED_IN for v in check.violations))

    def test_partial_coloring_rejected(self):
        with self.assertRaises(ValueError):
            is_admissible(self.g, Coloring({self.g.vertex("p"): RED}))

    def test_interpretation_to_coloring(self):
        coloring = interpretation_to_coloring(self.g, Interpretation.of(["b", "e", "h"]))
        self.assertEqual(coloring.green_labels(), ["b", "e", "h'"])


class TestPropagation(unittest.TestCase):

    def test_forcing_from_one_green_vertex(self):
        g = edg(OR_HANDLE_PROGRAM)
        closure, conflict = propagate(g, Coloring({g.vertex("h'"): GREEN}))
        self.assertIsNone(conflict)
        self.assertEqual(closure.green_labels(), ["e", "h'"])
        self.assertEqual(sorted(v.label for v, c in closure.assignment.items() if c == RED), ["f", "h", "p"])
        self.assertIsNone(closure.color(g.vertex("a")))
        self.assertIsNone(closure.color(g.vertex("b")))

    def test_even_loop_seed(self):
        g = edg("a :- not b.\nb :- not a.")
        closure, conflict = propagate(g, Coloring({g.vertex("a"): GREEN}))
        self.assertIsNone(conflict)
        self.assertEqual(closure.color(g.vertex("b")), RED)
        self.assertTrue(is_admissible(g, closure))
        self.assertEqual(coloring_to_interpretation(g, closure).sorted_names(), ["a"])

    def test_conflict(self):
        g = edg("a :- not b.\nb :- not a.")
        closure, conflict = propagate(g, Coloring({g.vertex("a"): GREEN, g.vertex("b"): GREEN}))
        self.assertIsNone(closure)
        self.assertIn(conflict.vertex.label, ("a", "b"))

    def test_self_loop_conflicts_either_way(self):
        g = edg("p :- not p.")
        for color in (GREEN, RED):
            _, conflict = propagate(g, Coloring({g.vertex("p"): color}))
            self.assertIsNotNone(conflict)

    def test_empty_partial_on_even_loop_is_stable(self):
        g = edg("a :- not b.\nb :- not a.")
        closure, conflict = propagate(g, Coloring())
        self.assertIsNone(conflict)
        self.assertEqual(closure.assignment, {})


class TestKernelGraphCheck(unittest.TestCase):

    def test_positive_edge(self):
        with self.assertRaises(NotKernelProgram):
            check_kernel_graph(edg("a :- b.\nb :- not a."))

    def test_vertex_without_incoming_edge(self):
        with self.assertRaises(NotKernelProgram) as ctx:
            solve_colorings(edg("a :- not b.\nb :- not c."))
        self.assertIn("vertex c has no incoming edge", str(ctx.exception))


class TestSearch(unittest.TestCase):

    def test_or_handle_program(self):
        result = solve_colorings(edg(OR_HANDLE_PROGRAM))
        self.assertEqual([m.sorted_names() for m in result.models], [["b", "e", "h"]])
        self.assertFalse(result.truncated)
        self.assertGreater(result.nodes_expanded, 0)

    def test_six_cycles(self):
        result = solve_colorings(edg(SIX_CYCLES_PROGRAM), heuristic="lex")
        self.assertEqual([m.sorted_names() for m in result.models], [["b", "k", "q", "w"]])

    def test_empty_graph_has_empty_model(self):
        result = solve_colorings(edg(""))
        self.assertEqual([m.sorted_names() for m in result.models], [[]])

    def test_model_cap(self):
        g = edg("a :- not b.\nb :- not a.")
        capped = solve_colorings(g, max_models=1)
        self.assertEqual(len(capped.models), 1)
        self.assertTrue(capped.truncated)
        exact = solve_colorings(g, max_models=2)
        self.assertEqual(len(exact.models), 2)
        self.assertFalse(exact.truncated)

    def test_green_branch_first(self):
        result = solve_colorings(edg("a :- not b.\nb :- not a."), heuristic="lex")
        self.assertEqual([m.sorted_names() for m in result.models], [["a"], ["b"]])

    def test_handles_order(self):
        order = branch_order(edg(OR_HANDLE_PROGRAM), "handles")
        self.assertEqual([v.label for v in order], ["e", "h'", "p", "a", "b", "f", "h"])

    def test_handles_falls_back_to_lex(self):
        g = edg(SIX_CYCLES_PROGRAM)
        with self.assertLogs("coloring", level="WARNING"):
            order = branch_order(g, "handles", max_cycles=1)
        self.assertEqual(order, list(g.vertices))


class TestColoringModelCorrespondence(unittest.TestCase):

    @settings(max_examples=150, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_admissible_colorings_are_stable_models(self, seed):
        program = random_kernel_program(np.random.default_rng(seed), MAX_KERNEL_VERTICES)
        g = build_edg(program)
        admissible = []
        for colors in itertools.product((GREEN, RED), repeat=len(g.vertices)):
            coloring = Coloring(dict(zip(g.vertices, colors)))
            if is_admissible(g, coloring):
                admissible.append(coloring)
        models = [coloring_to_interpretation(g, c) for c in admissible]
        expected = enumerate_stable_brute(program)
        # one coloring per model
        self.assertEqual(len(models), len(set(models)))
        self.assertEqual(sort_models(models), sort_models(expected))
        for coloring, model in zip(admissible, models):
            self.assertEqual(interpretation_to_coloring(g, model), coloring)

    @settings(max_examples=150, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_admissible_colorings_are_fixpoints(self, seed):
        g = build_edg(random_kernel_program(np.random.default_rng(seed)))
        for model in enumerate_stable_brute(g.program):
            coloring = interpretation_to_coloring(g, model)
            self.assertEqual(coloring_to_interpretation(g, coloring), model)
            closure, conflict = propagate(g, coloring)
            self.assertIsNone(conflict)
            self.assertEqual(closure, coloring)

    @settings(max_examples=150, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_search_matches_brute_force(self, seed):
        program = random_kernel_program(np.random.default_rng(seed))
        g = build_edg(program)
        expected = sort_models(enumerate_stable_brute(program))
        for heuristic in ("handles", "lex"):
            self.assertEqual(sort_models(solve_colorings(g, heuristic=heuristic).models), expected)


if __name__ == '__main__':
    unittest.main()
