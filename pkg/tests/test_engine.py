"""
Unit tests for the psys_oracle.engine module.

Step semantics (maximal assignments, application, halting) and the
exhaustive reference decider.
"""

import json

import pytest

from psys_oracle.decider import GenParams, generate_system
from psys_oracle.domain import (
    Charge,
    DivideRule,
    MembraneInstance,
    Multiset,
    RuleBook,
    SendInRule,
    initial_configuration,
)
from psys_oracle.engine import (
    MembranePlan,
    Outcome,
    RuleAssignment,
    Verdict,
    applicable_rules,
    apply_assignment,
    check_recognizer_validity,
    decide_exhaustive,
    enumerate_maximal_assignments,
    is_halted,
    is_maximal,
    sample_computation,
    successors,
    trace_records,
    write_trace,
)
from psys_oracle.exceptions import BudgetExceeded
from psys_oracle.search import Budget


def _start(spec):
    return RuleBook(spec), initial_configuration(spec)


# ============================================================================
# TEST SUITE 1: Applicable Rules
# ============================================================================


class TestApplicableRules:
    """Test suite for per-membrane rule applicability."""

    def test_skin_rules(self, sys_a):
        """The skin of the minimal system can send s out."""
        book, conf = _start(sys_a)
        assert [r.ordinal for r in applicable_rules(book, conf)] == [0]

    def test_send_in_needs_skin_trigger(self, sys_c):
        """A send-in rule is applicable while its trigger sits in the skin."""
        book, conf = _start(sys_c)
        (inner,) = conf.inner_instances()
        assert [r.ordinal for r in applicable_rules(book, conf, inner)] == [0]

    def test_after_send_in(self, sys_c):
        """After entering, b can be sent out of the now positive membrane."""
        book, conf = _start(sys_c)
        (after,) = successors(book, conf)
        (inner,) = after.inner_instances()
        assert inner == MembraneInstance("k", Charge.POSITIVE, Multiset.of("b"))
        assert [r.ordinal for r in applicable_rules(book, after, inner)] == [1]
        assert applicable_rules(book, after) == []


# ============================================================================
# TEST SUITE 2: Maximal Assignments
# ============================================================================


class TestMaximalAssignments:
    """Test suite for enumerate_maximal_assignments and is_maximal."""

    def test_single_assignment(self, sys_a):
        """The minimal system has exactly one maximal step."""
        book, conf = _start(sys_a)
        assert len(enumerate_maximal_assignments(book, conf)) == 1

    def test_competing_send_outs(self, sys_b):
        """Two send-out rules on the same trigger give two assignments."""
        book, conf = _start(sys_b)
        assert len(enumerate_maximal_assignments(book, conf)) == 2
        assert len(successors(book, conf)) == 2

    def test_idle_send_in_is_not_maximal(self, sys_c):
        """Leaving the skin trigger idle next to an open membrane is not maximal."""
        book, conf = _start(sys_c)
        (assignment,) = enumerate_maximal_assignments(book, conf)
        assert isinstance(assignment.inner[0][1][0][0].blocking, SendInRule)
        (inner,) = conf.inner_instances()
        idle = RuleAssignment(MembranePlan(), ((inner, ((MembranePlan(), 1),)),))
        assert not is_maximal(book, conf, idle)

    def test_division(self, sys_d):
        """Division replaces the membrane by two children."""
        book, conf = _start(sys_d)
        (assignment,) = enumerate_maximal_assignments(book, conf)
        (after,) = successors(book, conf)
        assert isinstance(assignment.inner[0][1][0][0].blocking, DivideRule)
        assert set(after.inner_instances()) == {
            MembraneInstance("k", Charge.POSITIVE, Multiset.of("e")),
            MembraneInstance("k", Charge.NEGATIVE, Multiset.of("f")),
        }

    def test_evolution_before_division(self, evolve_divide_system):
        """Objects evolved in the dividing step appear in both children."""
        book, conf = _start(evolve_divide_system)
        (assignment,) = enumerate_maximal_assignments(book, conf)
        after = apply_assignment(conf, assignment)
        children = list(after.inner_instances())
        assert len(children) == 2
        assert all(child.contents["y"] == 1 for child in children)
        assert all(child.contents["x"] == 0 for child in children)

    def test_empty_assignment_is_not_maximal(self, sys_a):
        """Doing nothing while a rule is enabled is not maximal."""
        book, conf = _start(sys_a)
        assert not is_maximal(book, conf, RuleAssignment(MembranePlan()))

    def test_enumerated_assignments_are_maximal(self):
        """Every enumerated assignment passes the direct maximality check."""
        for seed in range(1, 11):
            spec = generate_system(GenParams(seed=seed, max_inner=2))
            book = RuleBook(spec)
            frontier = [initial_configuration(spec)]
            for _ in range(2):
                following = []
                for conf in frontier[:20]:
                    for assignment in enumerate_maximal_assignments(book, conf):
                        assert is_maximal(book, conf, assignment)
                        following.append(apply_assignment(conf, assignment))
                frontier = following

    @pytest.mark.slow
    def test_maximality_over_reachable_configurations(self):
        """A thousand distinct reachable configurations, every assignment checked."""
        seen = set()
        for seed in range(1, 401):
            spec = generate_system(GenParams(seed=seed))
            book = RuleBook(spec)
            frontier = [initial_configuration(spec)]
            for _ in range(spec.bound):
                following = []
                for conf in frontier:
                    if (seed, conf) in seen or len(seen) >= 1000:
                        continue
                    seen.add((seed, conf))
                    for assignment in enumerate_maximal_assignments(book, conf):
                        assert is_maximal(book, conf, assignment), conf.render()
                        following.append(apply_assignment(conf, assignment))
                frontier = following
            if len(seen) >= 1000:
                break
        assert len(seen) >= 1000


# ============================================================================
# TEST SUITE 3: Applying Steps
# ============================================================================


class TestApplyAssignment:
    """Test suite for apply_assignment and halting."""

    def test_send_out_to_environment(self, sys_a):
        """Sending yes out of the skin fills the environment and flips the charge."""
        book, conf = _start(sys_a)
        (assignment,) = enumerate_maximal_assignments(book, conf)
        after = apply_assignment(conf, assignment)
        assert after.env == Multiset.of("yes")
        assert after.skin.charge is Charge.POSITIVE
        assert after.skin.contents.is_empty()
        assert is_halted(book, after)

    def test_send_in_moves_object(self, sys_c):
        """The skin trigger is consumed and its replacement enters the membrane."""
        book, conf = _start(sys_c)
        (after,) = successors(book, conf)
        assert after.skin.contents.is_empty()
        assert after.render() == "env: . | [[b]_k^+]_h^0"


# ============================================================================
# TEST SUITE 4: Exhaustive Decider
# ============================================================================


class TestDecideExhaustive:
    """Test suite for the reference decider and recognizer validity."""

    @pytest.mark.parametrize(
        "name, verdict, length",
        [
            ("sys_a", Verdict.ACCEPT, 1),
            ("sys_b", Verdict.ACCEPT, 1),
            ("sys_c", Verdict.ACCEPT, 3),
            ("sys_d", Verdict.ACCEPT, 3),
            ("sys_e", Verdict.REJECT, 1),
        ],
    )
    def test_fixture_verdicts(self, request, name, verdict, length):
        """Shipped systems get their known verdicts and trace lengths."""
        decision = decide_exhaustive(request.getfixturevalue(name))
        assert decision.verdict is verdict
        assert len(decision.trace) == length

    def test_validity_counts_computations(self, sys_a, sys_b):
        """Valid recognizers report one computation per halting branch."""
        assert check_recognizer_validity(sys_a).computations == 1
        report = check_recognizer_validity(sys_b)
        assert report.valid
        assert report.computations == 2

    def test_bound_exceeded(self, sys_a):
        """A bound of zero steps leaves the computation running."""
        report = check_recognizer_validity(sys_a, bound=0)
        assert not report.valid
        assert report.kinds() == [Outcome.BOUND_EXCEEDED]

    def test_missing_result(self, silent_system):
        """Halting without any result is a recognizer violation."""
        report = check_recognizer_validity(silent_system)
        assert report.kinds() == [Outcome.MISSING_RESULT]
        assert decide_exhaustive(silent_system).verdict is Verdict.INVALID_RECOGNIZER

    def test_early_and_multiple_results(self, chatty_system):
        """A result sent before the last step is reported along with the second one."""
        report = check_recognizer_validity(chatty_system)
        assert report.kinds() == [Outcome.EARLY_RESULT, Outcome.MULTIPLE_RESULTS]
        assert len(report.violations[Outcome.EARLY_RESULT]) == 1
        assert decide_exhaustive(chatty_system).verdict is Verdict.INVALID_RECOGNIZER

    def test_budget(self, sys_c):
        """A one-configuration budget cannot finish the search."""
        with pytest.raises(BudgetExceeded):
            decide_exhaustive(sys_c, budget=Budget(1))

    def test_sample_computation(self, sys_a, chatty_system):
        """A seeded run reports the outcome of the single computation it follows."""
        trace, outcome = sample_computation(sys_a, seed=1)
        assert outcome is Outcome.ACCEPT
        assert len(trace) == 1
        _, early = sample_computation(chatty_system, seed=3)
        assert early is Outcome.EARLY_RESULT


# ============================================================================
# TEST SUITE 5: Step Traces
# ============================================================================


class TestTrace:
    """Test suite for JSONL step traces."""

    def test_records(self, sys_c):
        """Each step contributes one record per applied rule."""
        trace = decide_exhaustive(sys_c).trace
        records = trace_records(trace)
        assert [(r["time"], r["membrane"], r["rule_ordinal"]) for r in records] == [
            (0, "k", 0),
            (1, "k", 1),
            (2, "h", 2),
        ]
        assert all(r["count"] == 1 for r in records)

    def test_write_trace(self, sys_c, tmp_path):
        """write_trace writes one JSON object per line."""
        path = tmp_path / "trace.jsonl"
        assert write_trace(path, decide_exhaustive(sys_c).trace) == 3
        lines = path.read_text().splitlines()
        assert json.loads(lines[-1])["configuration"] == "env: yes | [[]_k^0]_h^+"
