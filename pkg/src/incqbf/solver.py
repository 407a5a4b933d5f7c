"""Public incremental solver facade.

A Solver wraps a quantifier prefix, a clause stack, and the QCDCL engine.
Typical use:

    s = Solver()
    b1 = s.new_block("e")
    s.add_variable(b1, 1)
    s.push()
    s.add_clause([1])
    s.solve()            # True
    s.pop()
    s.assume(-1)
    s.solve()            # True, the clause is gone

solve() returns the module constants SAT (True) or UNSAT (False).  Learned
constraints are retained across calls unless keep_learned is switched off,
in which case every call starts from a bare constraint database.
"""

from __future__ import annotations

from .formula import EXISTS, FORALL, Pcnf, UsageError, normalize_clause
from .incremental import FrameStack
from .qcdcl import CLAUSE, CUBE, SolverState, Stats

SAT = True
UNSAT = False


class Solver:
    """Incremental QCDCL solver for prenex-CNF formulas."""

    def __init__(self, keep_learned: bool = True,
                 cube_list_capacity: int = 128,
                 cube_list_max: int = 2 ** 16,
                 gc_min_disabled: int = 4096,
                 gc_fraction: float = 0.25):
        self._state = SolverState(cube_list_capacity, cube_list_max)
        self._frames = FrameStack(self._state, gc_min_disabled, gc_fraction)
        self.keep_learned = keep_learned
        self._manual_selectors: set[int] = set()
        self._used_push = False
        self._assumptions: list[int] = []
        self._last_verdict: bool | None = None
        self._last_final: frozenset[int] = frozenset()
        self._last_assumed: list[int] = []

    # ---- prefix construction ----

    def new_block(self, quantifier: str, position: int | None = None) -> int:
        """Open a quantifier block and return its position.  Appends by
        default.  Positions can shift when pops retire variables, so hold on
        to them only between structural edits."""
        return self._state.declare_block(quantifier, position)

    def add_variable(self, block: int, vid: int) -> None:
        self._state.declare_variable(block, vid)

    # ---- clause stack ----

    def push(self) -> int:
        if self._manual_selectors:
            raise UsageError("push/pop unavailable with user-managed selectors")
        self._used_push = True
        return self._frames.push()

    def pop(self) -> None:
        if self._manual_selectors:
            raise UsageError("push/pop unavailable with user-managed selectors")
        self._frames.pop()

    def add_clause(self, lits) -> None:
        """Add an original clause under the topmost frame.  Tautologies are
        dropped; free variables are adopted into a leftmost existential
        block."""
        norm = normalize_clause(lits)
        if norm is None:
            return
        for l in norm:
            if not self._state.declared(abs(l)):
                self._state.adopt_variable(abs(l))
        self._frames.add_clause(norm)

    def declare_selector(self, vid: int) -> None:
        """Latch manual selector mode: vid is a user variable the caller will
        assume each solve to enable or disable its clauses.  Mutually
        exclusive with push/pop.  Requires an outermost existential variable."""
        if self._used_push:
            raise UsageError("user-managed selectors unavailable after push")
        st = self._state
        if not st.declared(vid):
            raise UsageError("selector variable %d not declared" % vid)
        if st.quantifier(vid) != EXISTS or st.prefix.order_key(vid) != 0:
            raise UsageError("selector %d must sit in an outermost existential block" % vid)
        self._manual_selectors.add(vid)

    # ---- assumptions ----

    def assume(self, lit: int) -> None:
        """Queue a single-shot level-0 assumption for the next solve call.

        Every block outer to the literal's block must already be fully
        covered by queued assumptions, so assume outermost first.
        """
        if not isinstance(lit, int) or lit == 0:
            raise UsageError("assumption must be a nonzero literal")
        v = abs(lit)
        st = self._state
        if not st.declared(v) or st.vars[v].is_selector:
            raise UsageError("assumption on undeclared variable %d" % v)
        if -lit in self._assumptions:
            raise UsageError("contradictory assumption on variable %d" % v)
        if lit in self._assumptions:
            return
        pending = {abs(a) for a in self._assumptions}
        pending.add(v)
        pos = st.prefix.order_key(v)
        for q in range(pos):
            for w in st.prefix.blocks[q].variables:
                if w not in pending:
                    raise UsageError(
                        "assumption on %d leaves outer variable %d unassumed" % (v, w))
        self._assumptions.append(lit)

    # ---- solving ----

    def solve(self, timeout_s: float | None = None) -> bool:
        keep_vars = {abs(l) for l in self._assumptions}
        selector_assumptions = self._frames.prepare_solve(self.keep_learned,
                                                          keep_vars)
        assumptions = selector_assumptions + list(self._assumptions)
        verdict = self._state.solve_core(assumptions, timeout_s)
        self._last_verdict = verdict
        self._last_final = frozenset(self._state.final_lits or ())
        self._last_assumed = list(self._assumptions)
        self._assumptions = []
        return verdict

    @property
    def stats(self) -> Stats:
        """Counters of the most recent solve call."""
        return self._state.stats

    def relevant_assumptions(self) -> list[int]:
        """Subset of the last call's assumptions sufficient for its verdict.

        Available after an unsatisfiable call when the outermost block is
        existential, or a satisfiable call when it is universal.
        """
        if self._last_verdict is None:
            raise UsageError("no solve call yet")
        blocks = self._state.prefix.blocks
        if self._last_verdict is UNSAT:
            if not blocks or blocks[0].quantifier != EXISTS:
                raise UsageError("unsat relevance needs an existential outer block")
            return [a for a in self._last_assumed if -a in self._last_final]
        if not blocks or blocks[0].quantifier != FORALL:
            raise UsageError("sat relevance needs a universal outer block")
        return [a for a in self._last_assumed if a in self._last_final]

    # ---- inspection ----

    def enabled_pcnf(self) -> Pcnf:
        """Copy of the currently enabled formula (selector literals stripped)."""
        f = Pcnf(self._state.prefix.copy())
        for lits in self._frames.enabled_clauses():
            f.add_clause(lits)
        return f

    def frame_depth(self) -> int:
        return len(self._frames.active)

    def learned_sizes(self) -> tuple[int, int, int]:
        """(learned clauses, learned cubes, stored models) right now."""
        st = self._state
        return (len([c for c in st.learned_clauses if not c.deleted]),
                len([c for c in st.cubes if not c.deleted]),
                len(st.models))
