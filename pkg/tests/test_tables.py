"""
Unit tests for the psys_oracle.tables module.

Covers the guessed tables, the skin-only simulation and the inner query on
the shipped systems, whose accepting tables are small enough to write down.
"""

import pytest
from pydantic import ValidationError

from psys_oracle.config import NO, YES
from psys_oracle.decider import GenParams, generate_system
from psys_oracle.domain import (
    Charge,
    Multiset,
    RuleBook,
    SendInRule,
    SendOutRule,
    initial_configuration,
)
from psys_oracle.dsl import parse_system
from psys_oracle.engine import transitions
from psys_oracle.exceptions import BudgetExceeded, RejectedBranch
from psys_oracle.search import Budget, Choice, ChoicePoint, ReplayChooser, explore
from psys_oracle.tables import (
    Emission,
    GuessCap,
    InnerStack,
    InteractionTable,
    OuterState,
    QueryStats,
    SearchSettings,
    StackEntry,
    UnusedTable,
    answer_query,
    compute_guess_cap,
    dump_tables,
    init_stack,
    run_outermost,
    simulate_inner_membrane,
    simulate_outer_step,
)

DIVIDE_OR_ENTER = """@psys 1
@objects a b d p q yes no
@labels h k
@skin h
@init h : a
@inner k : d
@bound 2
@rules
[d]_k^0 -> [p]_k^+ [q]_k^-
a []_k^0 -> [b]_k^+
[yes]_h^0 -> []_h^+ yes
"""


def _choice(tag, rule, time, value):
    return Choice(ChoicePoint(tag, 0, 1, rule, time), value)


def _query(spec, interactions, t, unused=None, residue=None, settings=None, stats=None):
    """Search every inner branch for one that matches the tables."""
    unused = unused or UnusedTable()
    residue = residue or Multiset()
    return explore(
        lambda chooser: answer_query(
            spec, interactions, unused, t, chooser, residue, settings, stats=stats
        )
    ).accepted


def _realisable_tables(spec, limit=20_000):
    """
    Tables of every full computation that halts right after its first result, read off
    the step semantics with the whole inner-membrane bag tracked.
    """
    book = RuleBook(spec)
    found = set()
    visited = 0

    def walk(conf, t, interactions, unused):
        nonlocal visited
        visited += 1
        if visited > limit:
            raise BudgetExceeded("full enumeration too large")
        if t >= spec.bound:
            return
        for assignment, after in transitions(book, conf):
            step_interactions = interactions.copy()
            step_unused = UnusedTable(dict(unused.items()))
            for _, plan, count in assignment.plans():
                if isinstance(plan.blocking, (SendInRule, SendOutRule)):
                    step_interactions.add(plan.blocking.ordinal, t, count)
            idle = conf.skin.contents - assignment.skin.consumed() - assignment.send_in_demand()
            for symbol in book.alphabet:
                step_unused.set(symbol, t, idle[symbol])
            if after.env[YES] or after.env[NO]:
                if not transitions(book, after):
                    found.add(
                        (step_interactions.key(), step_unused.key(), t, after.skin.contents)
                    )
                continue
            walk(after, t + 1, step_interactions, step_unused)

    walk(initial_configuration(spec), 0, InteractionTable(), UnusedTable())
    return found


def _query_matches_enumeration(spec, limit=20_000):
    """Answer the query on every outer branch and compare with the enumerated tables."""
    realisable = _realisable_tables(spec, limit)
    outcomes = []
    explore(
        lambda chooser: run_outermost(spec, chooser),
        accept=lambda outcome: False,
        budget=Budget(limit),
        on_leaf=lambda outcome, _: outcome is not None and outcomes.append(outcome),
    )
    positives = 0
    for outcome in outcomes:
        residue = outcome.state.w
        answered = explore(
            lambda chooser: answer_query(
                spec, outcome.interactions, outcome.unused, outcome.halt_time, chooser, residue
            ),
            budget=Budget(limit),
        ).accepted
        key = (outcome.interactions.key(), outcome.unused.key(), outcome.halt_time, residue)
        assert answered == (key in realisable), (spec.summary(), key)
        positives += answered
    return len(outcomes), positives


# ============================================================================
# TEST SUITE 1: Tables And Settings
# ============================================================================


class TestTables:
    """Test suite for the guess cap, InteractionTable and UnusedTable."""

    @pytest.mark.parametrize("m, t, cap", [(1, 2, 4), (0, 5, 0), (3, 0, 3), (2, 3, 16)])
    def test_guess_cap(self, m, t, cap):
        """K doubles with every step."""
        assert compute_guess_cap(m, t) == cap
        assert GuessCap(m, t).K == cap

    def test_guess_cap_negative(self):
        """Negative arguments are rejected."""
        with pytest.raises(ValueError):
            compute_guess_cap(-1, 0)

    def test_interaction_table(self):
        """Entries default to zero and copies are independent."""
        table = InteractionTable()
        assert table.get(0, 0) == 0
        table.set(0, 0, 2)
        copy = table.copy()
        copy.add(0, 0, -2)
        assert copy.is_zero()
        assert table.get(0, 0) == 2
        assert table.dump() == [{"rule": 0, "t": 0, "count": 2}]

    def test_interaction_table_equality_ignores_zeros(self):
        """Explicit zero entries do not change the table's identity."""
        assert InteractionTable({(0, 0): 1, (1, 0): 0}) == InteractionTable({(0, 0): 1})

    def test_unused_table(self):
        """Only positive idle counts are stored; negatives are rejected."""
        unused = UnusedTable()
        unused.set("a", 0, 0)
        assert unused.key() == ()
        unused.set("a", 1, 2)
        assert dump_tables(InteractionTable(), unused) == {
            "T": [],
            "U": [{"object": "a", "t": 1, "count": 2}],
        }
        with pytest.raises(ValueError):
            unused.set("a", 1, -1)

    def test_phase_order_must_be_a_permutation(self):
        """phase_order names each blocking phase exactly once."""
        assert SearchSettings(phase_order=("send_out", "divide", "send_in")).phase_order[0] == "send_out"
        with pytest.raises(ValidationError):
            SearchSettings(phase_order=("divide", "divide", "send_out"))


# ============================================================================
# TEST SUITE 2: Skin Simulation
# ============================================================================


class TestOuterSimulation:
    """Test suite for simulate_outer_step and run_outermost."""

    def test_send_out_to_environment(self, sys_a):
        """Guessing the skin send-out moves yes to the environment."""
        chooser = ReplayChooser([_choice("outer.env", 0, 0, 1)])
        state = simulate_outer_step(
            OuterState.initial(sys_a), RuleBook(sys_a), InteractionTable(), UnusedTable(), chooser
        )
        assert state.env == Multiset.of("yes")
        assert state.charge is Charge.POSITIVE
        assert state.w.is_empty()
        assert state.t == 1

    def test_idle_send_out_rejected(self, sys_a):
        """Declining an enabled skin send-out breaks maximality."""
        chooser = ReplayChooser([_choice("outer.env", 0, 0, 0)])
        with pytest.raises(RejectedBranch):
            simulate_outer_step(
                OuterState.initial(sys_a), RuleBook(sys_a), InteractionTable(), UnusedTable(), chooser
            )

    def test_send_in_marks_skin_object(self, sys_c):
        """A guessed send-in removes its trigger and fills the label's capacity."""
        interactions, unused = InteractionTable(), UnusedTable()
        chooser = ReplayChooser(
            [_choice("outer.sendin", 0, 0, 1), _choice("outer.sendout", 1, 0, 0)]
        )
        state = simulate_outer_step(
            OuterState.initial(sys_c), RuleBook(sys_c), interactions, unused, chooser
        )
        assert state.w.is_empty()
        assert interactions.get(0, 0) == 1
        assert unused.get("a", 0) == 0
        # the single k membrane is already busy, so the send-out range is [0, 0]
        assert chooser.trail[1].point.hi == 0

    def test_idle_trigger_recorded(self, sys_c):
        """A trigger left in the skin shows up in the unused table."""
        unused = UnusedTable()
        chooser = ReplayChooser(
            [_choice("outer.sendin", 0, 0, 0), _choice("outer.sendout", 1, 0, 0)]
        )
        simulate_outer_step(
            OuterState.initial(sys_c), RuleBook(sys_c), InteractionTable(), unused, chooser
        )
        assert unused.get("a", 0) == 1

    def test_run_accepts_minimal_system(self, sys_a):
        """The only accepting outer branch sends yes out at step 0."""
        found = explore(
            lambda c: run_outermost(sys_a, c), accept=lambda o: o.result is Emission.EMIT_YES
        )
        assert found.accepted
        assert found.witness.values() == [1]
        assert found.result.halt_time == 0

    def test_run_rejecting_system(self, sys_e):
        """The rejecting fixture emits no."""
        found = explore(
            lambda c: run_outermost(sys_e, c), accept=lambda o: o.result is Emission.EMIT_NO
        )
        assert found.accepted

    def test_run_guesses_inner_traffic(self, sys_c):
        """Some outer branch guesses the send-in at step 0 and the send-out at step 1."""

        def matches(outcome):
            return (
                outcome.result is Emission.EMIT_YES
                and outcome.halt_time == 2
                and outcome.interactions.get(0, 0) == 1
                and outcome.interactions.get(1, 1) == 1
            )

        assert explore(lambda c: run_outermost(sys_c, c), accept=matches).accepted


# ============================================================================
# TEST SUITE 3: Inner Simulation And Query
# ============================================================================


class TestInnerQuery:
    """Test suite for the inner stack, simulate_inner_membrane and answer_query."""

    def test_init_stack(self, sys_a, sys_d):
        """One neutral entry per initial inner membrane."""
        assert len(init_stack(sys_a)) == 0
        (entry,) = init_stack(sys_d).entries
        assert entry == StackEntry(Multiset.of("d"), "k", Charge.NEUTRAL, 0)

    def test_empty_query(self, sys_a):
        """Without inner membranes, only empty tables are consistent."""
        assert _query(sys_a, InteractionTable(), 0)
        assert not _query(sys_a, InteractionTable({(0, 0): 1}), 0)

    def test_accepting_tables(self, sys_c):
        """The tables of the accepting computation are realisable."""
        assert _query(sys_c, InteractionTable({(0, 0): 1, (1, 1): 1}), 2)

    @pytest.mark.parametrize(
        "entries",
        [
            {(0, 0): 2, (1, 1): 1},
            {(0, 0): 0, (1, 1): 1},
            {(0, 0): 1, (1, 1): 2},
            {(0, 0): 1, (1, 1): 0},
            {(0, 0): 1, (1, 2): 1},
        ],
    )
    def test_perturbed_tables(self, sys_c, entries):
        """Tables off by one from a real computation are refused."""
        assert not _query(sys_c, InteractionTable(entries), 2)

    def test_idle_skin_trigger_refused(self, sys_c):
        """An idle trigger next to the open membrane contradicts maximality."""
        unused = UnusedTable({("a", 0): 1})
        assert not _query(sys_c, InteractionTable({(1, 1): 1}), 2, unused=unused)

    def test_residue_blocks_halting(self, sys_c):
        """A trigger left in the final skin keeps the membrane from halting."""
        tables = InteractionTable({(0, 0): 1, (1, 1): 1})
        assert not _query(sys_c, tables, 2, residue=Multiset.of("a"))

    def test_division_query(self, sys_d):
        """The dividing system's send-out from the positive child is realisable."""
        stats = QueryStats()
        assert _query(sys_d, InteractionTable({(1, 1): 1}), 2, stats=stats)
        assert stats.peak_stack <= sys_d.m + 2
        assert stats.bound_violations == 0

    @pytest.mark.parametrize(
        "entries",
        [
            {(1, 1): 2},
            {(1, 1): 0},
            {(1, 1): 1, (1, 0): 1},
            {(1, 1): 1, (1, 2): 1},
        ],
    )
    def test_perturbed_division_tables(self, sys_d, entries):
        """Only one child ever sends out, and only at step 1."""
        assert _query(sys_d, InteractionTable({(1, 1): 1}), 2)
        assert not _query(sys_d, InteractionTable(entries), 2)

    @pytest.mark.parametrize("name", ["sys_c", "sys_d"])
    def test_query_matches_full_enumeration(self, request, name):
        """On every outer branch the query says yes exactly for tables a real computation produces."""
        branches, positives = _query_matches_enumeration(request.getfixturevalue(name))
        assert branches > 0
        assert positives > 0

    def test_generated_queries_match_full_enumeration(self):
        """The same agreement on small generated systems."""
        checked = 0
        for seed in range(1, 13):
            spec = generate_system(GenParams(seed=seed, max_inner=2, bound=3))
            try:
                branches, _ = _query_matches_enumeration(spec)
            except BudgetExceeded:
                continue
            checked += branches > 0
        assert checked > 0

    def test_without_eager_overdraw(self, sys_c):
        """Turning off the overdraw prune does not change the answer."""
        settings = SearchSettings(eager_overdraw=False)
        tables = InteractionTable({(0, 0): 1, (1, 1): 1})
        assert _query(sys_c, tables, 2, settings=settings)
        assert not _query(sys_c, InteractionTable({(0, 0): 2}), 2, settings=settings)

    def test_divide_pushes_sibling(self, sys_d):
        """A division continues with the first child and stacks the second."""
        interactions = InteractionTable({(1, 1): 1})
        stack = InnerStack()
        chooser = ReplayChooser(
            [_choice("inner.divide", 0, 0, 1), _choice("inner.sendout", 1, 1, 1)]
        )
        entry = init_stack(sys_d).pop()
        simulate_inner_membrane(
            entry, 2, RuleBook(sys_d), interactions, UnusedTable(), chooser, stack, Multiset()
        )
        chooser.finish()
        assert interactions.is_zero()
        (sibling,) = stack.entries
        assert sibling == StackEntry(Multiset.of("f"), "k", Charge.NEGATIVE, 0, True)
        assert sibling.first_step == 1

    def test_no_send_in_after_division(self):
        """A membrane that divides cannot also take an object in that step."""
        spec = parse_system(DIVIDE_OR_ENTER)
        interactions = InteractionTable({(1, 0): 1})
        chooser = ReplayChooser([_choice("inner.divide", 0, 0, 1)])
        entry = init_stack(spec).pop()
        simulate_inner_membrane(
            entry, 0, RuleBook(spec), interactions, UnusedTable(), chooser, InnerStack(), Multiset()
        )
        assert [c.point.tag for c in chooser.trail] == ["inner.divide"]
        assert interactions.get(1, 0) == 1

    def test_open_membrane_with_idle_trigger(self):
        """An unblocked membrane next to an idle trigger is rejected."""
        spec = parse_system(DIVIDE_OR_ENTER)
        entry = StackEntry(Multiset(), "k", Charge.NEUTRAL, 0)
        with pytest.raises(RejectedBranch):
            simulate_inner_membrane(
                entry,
                0,
                RuleBook(spec),
                InteractionTable(),
                UnusedTable({("a", 0): 1}),
                ReplayChooser([]),
                InnerStack(),
                Multiset(),
            )

    def test_idle_evolution_rejected(self, evolve_divide_system):
        """Leaving an evolvable object untouched is rejected."""
        entry = StackEntry(Multiset.of("x"), "k", Charge.NEUTRAL, 0)
        with pytest.raises(RejectedBranch):
            simulate_inner_membrane(
                entry,
                0,
                RuleBook(evolve_divide_system),
                InteractionTable(),
                UnusedTable(),
                ReplayChooser([Choice(ChoicePoint("inner.evolve", 0, 1, 0, 0), 0)]),
                InnerStack(),
                Multiset(),
            )
