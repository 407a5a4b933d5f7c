"""Solver facade: assumptions, relevance, manual selectors, retention."""

import random

import pytest

from incqbf import (EXISTS, FORALL, Pcnf, Prefix, Solver, UsageError,
                    apply_assignment, eval_pcnf)
from incqbf.qcdcl import SELECTOR_BASE, SolverState

from gen import build_solver, random_pcnf

WORKED_CLAUSES = ((8, -5), (2, -6), (-1, 4), (-8, -4), (1, 6), (4, 5))


def worked_solver(**kw):
    s = Solver(**kw)
    b = s.new_block(EXISTS)
    s.add_variable(b, 1)
    b = s.new_block(FORALL)
    s.add_variable(b, 8)
    b = s.new_block(EXISTS)
    for v in (5, 2, 6, 4):
        s.add_variable(b, v)
    return s


def three_level():
    s = Solver()
    b = s.new_block(EXISTS)
    s.add_variable(b, 1)
    b = s.new_block(FORALL)
    s.add_variable(b, 2)
    b = s.new_block(EXISTS)
    s.add_variable(b, 3)
    return s


def test_worked_example_verdicts():
    s = worked_solver()
    for c in WORKED_CLAUSES:
        s.add_clause(c)
    assert s.solve() is True
    s.add_clause((-2, -4))
    assert s.solve() is False


def test_add_clause_drops_tautologies():
    s = three_level()
    s.add_clause((1, -1))
    assert s._state.clauses == []
    assert s.solve() is True


def test_assume_validation():
    s = three_level()
    s.add_clause((1, 2, 3))
    with pytest.raises(UsageError):
        s.assume(0)
    with pytest.raises(UsageError):
        s.assume(9)
    with pytest.raises(UsageError):
        s.assume(3)
    s.assume(1)
    with pytest.raises(UsageError):
        s.assume(-1)
    s.assume(1)
    assert s._assumptions == [1]
    with pytest.raises(UsageError):
        s.assume(3)
    s.assume(-2)
    s.assume(3)
    assert s._assumptions == [1, -2, 3]


def test_assume_rejects_managed_selectors():
    s = three_level()
    s.push()
    s.add_clause((1, 2, 3))
    with pytest.raises(UsageError):
        s.assume(SELECTOR_BASE)


def test_assumptions_are_single_shot():
    s = Solver()
    b = s.new_block(EXISTS)
    s.add_variable(b, 1)
    s.add_variable(b, 2)
    s.add_clause((1, 2))
    s.assume(-1)
    s.assume(-2)
    assert s.solve() is False
    assert s.solve() is True


def test_assumption_semantics_match_restriction():
    rng = random.Random(4010)
    for trial in range(200):
        f = random_pcnf(rng, max_vars=8, max_clauses=14, min_clauses=1)
        declared = []
        for _, vs in f.prefix.as_pairs():
            declared.extend(vs)
        if not declared:
            continue
        k = rng.randint(1, len(declared))
        lits = [v if rng.random() < 0.5 else -v for v in declared[:k]]
        s = build_solver(f)
        for l in lits:
            s.assume(l)
        got = s.solve()
        g = apply_assignment(f, {abs(l): l > 0 for l in lits})
        want = g if isinstance(g, bool) else eval_pcnf(g)
        assert got == want, trial


def test_relevant_assumptions_requires_a_solve():
    s = three_level()
    s.add_clause((1, 2, 3))
    with pytest.raises(UsageError):
        s.relevant_assumptions()


def test_relevant_assumptions_unsat():
    s = Solver()
    b = s.new_block(EXISTS)
    s.add_variable(b, 1)
    s.add_variable(b, 2)
    s.add_clause((-1,))
    s.assume(1)
    s.assume(2)
    assert s.solve() is False
    assert s.relevant_assumptions() == [1]
    s.assume(1)
    assert s.solve() is False


def test_relevant_assumptions_unsat_needs_existential_front():
    s = Solver()
    b = s.new_block(FORALL)
    s.add_variable(b, 1)
    b = s.new_block(EXISTS)
    s.add_variable(b, 2)
    s.add_clause((1, 2))
    s.add_clause((1, -2))
    s.assume(-1)
    assert s.solve() is False
    with pytest.raises(UsageError):
        s.relevant_assumptions()


def test_relevant_assumptions_sat():
    s = Solver()
    b = s.new_block(FORALL)
    s.add_variable(b, 1)
    s.add_variable(b, 2)
    b = s.new_block(EXISTS)
    s.add_variable(b, 3)
    s.add_clause((1, 3))
    s.assume(-1)
    s.assume(-2)
    assert s.solve() is True
    rel = s.relevant_assumptions()
    assert rel == [-1, -2]
    for l in rel:
        s.assume(l)
    assert s.solve() is True


def test_relevant_assumptions_sat_needs_universal_front():
    s = Solver()
    b = s.new_block(EXISTS)
    s.add_variable(b, 1)
    s.add_clause((1,))
    s.assume(1)
    assert s.solve() is True
    with pytest.raises(UsageError):
        s.relevant_assumptions()


def test_learned_clause_from_frame_dies_with_it():
    # base lacks one clause of the worked example; the frame supplies it
    s = worked_solver()
    for c in WORKED_CLAUSES[:3] + WORKED_CLAUSES[4:]:
        s.add_clause(c)
    s.push()
    s.add_clause(WORKED_CLAUSES[3])
    sel = s._frames.frames[0].selector
    assert s.solve() is True
    st = s._state
    # a unit consequence of the framed clause, properly tagged
    st.register_clause((-1, sel), selector=sel, learned=True)
    s.pop()
    s.add_clause((1,))
    assert s.solve() is True
    # any surviving copy must still carry its guard literal
    assert all(sel in c.lits for c in st.learned_clauses if c.selector == sel)


def test_unguarded_retention_would_be_unsound():
    st = SolverState()
    b = st.declare_block(EXISTS)
    st.declare_variable(b, 1)
    b = st.declare_block(FORALL)
    st.declare_variable(b, 8)
    b = st.declare_block(EXISTS)
    for v in (5, 2, 6, 4):
        st.declare_variable(b, v)
    for c in WORKED_CLAUSES[:3] + WORKED_CLAUSES[4:]:
        st.register_clause(c)
    st.register_clause((1,))
    assert st.solve_core([]) is True
    # the same unit kept without its selector guard flips the verdict
    st.register_clause((-1,), learned=True)
    assert st.solve_core([]) is False


def test_manual_selector_mode():
    s = Solver()
    b = s.new_block(EXISTS)
    s.add_variable(b, 10)
    s.add_variable(b, 11)
    b = s.new_block(FORALL)
    s.add_variable(b, 1)
    b = s.new_block(EXISTS)
    s.add_variable(b, 2)
    s.declare_selector(10)
    s.declare_selector(11)
    with pytest.raises(UsageError):
        s.push()
    with pytest.raises(UsageError):
        s.pop()
    s.add_clause((10, 2))
    s.add_clause((11, -2))
    s.assume(-10)
    s.assume(-11)
    assert s.solve() is False
    assert s.relevant_assumptions() == [-10, -11]
    s.assume(10)
    s.assume(-11)
    assert s.solve() is True
    s.assume(-10)
    s.assume(11)
    assert s.solve() is True


def test_declare_selector_validation():
    s = three_level()
    with pytest.raises(UsageError):
        s.declare_selector(9)
    with pytest.raises(UsageError):
        s.declare_selector(3)
    with pytest.raises(UsageError):
        s.declare_selector(2)
    s2 = three_level()
    s2.push()
    with pytest.raises(UsageError):
        s2.declare_selector(1)


def test_enabled_pcnf_view():
    s = three_level()
    s.add_clause((1, 2, 3))
    s.push()
    s.add_clause((3,))
    s.push()
    s.add_clause((-3,))
    s.pop()
    f = s.enabled_pcnf()
    assert f.prefix.as_pairs() == [(EXISTS, (1,)), (FORALL, (2,)),
                                   (EXISTS, (3,))]
    assert sorted(f.clauses) == [(1, 2, 3), (3,)]
    assert s.frame_depth() == 1


def test_stats_and_sizes():
    s = worked_solver()
    for c in WORKED_CLAUSES:
        s.add_clause(c)
    assert s.solve() is True
    assert s.stats.wall_time > 0.0
    assert s.stats.assignments > 0
    lc, cubes, models = s.learned_sizes()
    assert cubes > 0 and models > 0
