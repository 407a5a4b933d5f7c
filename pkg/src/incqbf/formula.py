"""Prenex-CNF data model: quantifier prefix, clauses, assignments.

Variables are positive integers, literals are signed integers (a negative
literal is the negation of its variable).  A prefix is an ordered list of
quantifier blocks; block order induces the ordering on variables and literals
used by universal/existential reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

EXISTS = "e"
FORALL = "a"


class UsageError(ValueError):
    """An operation was called with its preconditions violated."""


def var_of(lit: int) -> int:
    return abs(lit)


def negate(lit: int) -> int:
    return -lit


def normalize_clause(lits) -> tuple[int, ...] | None:
    """Deduplicate literals and sort by variable id.

    Returns None for tautological clauses (containing both x and -x), which
    callers silently drop.
    """
    seen = set(lits)
    for l in seen:
        if l == 0:
            raise UsageError("literal 0 is not allowed in a clause")
        if -l in seen:
            return None
    return tuple(sorted(seen, key=lambda l: (abs(l), l)))


def as_assignment(lits) -> dict[int, bool]:
    """Turn an iterable of literals into a var -> value map.

    Raises UsageError if some variable appears with both signs.
    """
    a: dict[int, bool] = {}
    for l in lits:
        v = abs(l)
        val = l > 0
        if a.get(v, val) != val:
            raise UsageError("assignment sets variable %d both ways" % v)
        a[v] = val
    return a


@dataclass
class Block:
    quantifier: str
    variables: list[int] = field(default_factory=list)

    def __post_init__(self):
        if self.quantifier not in (EXISTS, FORALL):
            raise UsageError("bad quantifier %r" % (self.quantifier,))


class Prefix:
    """Ordered quantifier blocks plus a variable -> block position index."""

    def __init__(self, blocks=None):
        self.blocks: list[Block] = []
        self._pos: dict[int, int] = {}
        for blk in blocks or []:
            if isinstance(blk, Block):
                q, vs = blk.quantifier, blk.variables
            else:
                q, vs = blk
            i = self.add_block(q)
            for v in vs:
                self.add_variable(i, v)

    def add_block(self, quantifier: str, position: int | None = None) -> int:
        """Insert an empty block; later block indices shift by one."""
        blk = Block(quantifier)
        if position is None:
            position = len(self.blocks)
        if not 0 <= position <= len(self.blocks):
            raise UsageError("block position %d out of range" % position)
        self.blocks.insert(position, blk)
        if position < len(self.blocks) - 1:
            self._reindex()
        return position

    def add_variable(self, block_index: int, vid: int) -> None:
        if not isinstance(vid, int) or vid <= 0:
            raise UsageError("variable id must be a positive integer")
        if vid in self._pos:
            raise UsageError("variable %d already declared" % vid)
        if not 0 <= block_index < len(self.blocks):
            raise UsageError("no block with index %d" % block_index)
        self.blocks[block_index].variables.append(vid)
        self._pos[vid] = block_index

    def _reindex(self) -> None:
        self._pos = {}
        for i, blk in enumerate(self.blocks):
            for v in blk.variables:
                self._pos[v] = i

    def declared(self, vid: int) -> bool:
        return vid in self._pos

    def order_key(self, vid: int) -> int:
        return self._pos[vid]

    def quantifier(self, vid: int) -> str:
        return self.blocks[self._pos[vid]].quantifier

    def variables(self):
        for blk in self.blocks:
            yield from blk.variables

    def num_variables(self) -> int:
        return len(self._pos)

    def copy(self) -> "Prefix":
        return Prefix((b.quantifier, list(b.variables)) for b in self.blocks)

    def as_pairs(self) -> list[tuple[str, tuple[int, ...]]]:
        return [(b.quantifier, tuple(b.variables)) for b in self.blocks]

    def __eq__(self, other):
        return isinstance(other, Prefix) and self.as_pairs() == other.as_pairs()

    def __repr__(self):
        return "Prefix(%r)" % (self.as_pairs(),)


def compare_literals(prefix: Prefix, l1: int, l2: int) -> int:
    """Order two literals by their variables' block positions.

    Returns -1 if l1's block is outer to l2's, 0 if they share a block,
    1 otherwise.  Both variables must be declared.
    """
    k1, k2 = prefix.order_key(abs(l1)), prefix.order_key(abs(l2))
    return (k1 > k2) - (k1 < k2)


class Pcnf:
    """A closed prenex-CNF formula.

    Clauses are normalized on construction: duplicate literals collapse and
    tautological clauses are silently dropped.  Every variable occurring in a
    clause must be declared in the prefix unless adopt_free is set, in which
    case free variables are declared in a leftmost existential block.
    """

    def __init__(self, prefix: Prefix | None = None, clauses=None, adopt_free: bool = False):
        self.prefix = prefix if prefix is not None else Prefix()
        self.clauses: list[tuple[int, ...]] = []
        for c in clauses or []:
            self.add_clause(c, adopt_free=adopt_free)

    def add_clause(self, lits, adopt_free: bool = False) -> tuple[int, ...] | None:
        c = normalize_clause(lits)
        if c is None:
            return None
        for l in c:
            v = abs(l)
            if not self.prefix.declared(v):
                if not adopt_free:
                    raise UsageError("variable %d not declared in the prefix" % v)
                self._adopt(v)
        self.clauses.append(c)
        return c

    def _adopt(self, vid: int) -> None:
        # Free variables go to a leftmost existential block.
        if not self.prefix.blocks or self.prefix.blocks[0].quantifier != EXISTS:
            self.prefix.add_block(EXISTS, 0)
        self.prefix.add_variable(0, vid)

    def copy(self) -> "Pcnf":
        f = Pcnf(self.prefix.copy())
        f.clauses = list(self.clauses)
        return f

    def __eq__(self, other):
        return (isinstance(other, Pcnf)
                and self.prefix == other.prefix
                and self.clauses == other.clauses)

    def __repr__(self):
        return "Pcnf(%r, %r)" % (self.prefix.as_pairs(), self.clauses)


def _compact_prefix(prefix: Prefix, keep: set[int]) -> tuple[Prefix, set[int]]:
    """Prefix without the variables outside keep; empty blocks dropped and
    adjacent same-quantifier blocks merged.  Returns (new prefix, removed ids)."""
    removed = set()
    new = Prefix()
    for blk in prefix.blocks:
        vs = [v for v in blk.variables if v in keep]
        removed.update(v for v in blk.variables if v not in keep)
        if not vs:
            continue
        if new.blocks and new.blocks[-1].quantifier == blk.quantifier:
            i = len(new.blocks) - 1
        else:
            i = new.add_block(blk.quantifier)
        for v in vs:
            new.add_variable(i, v)
    return new, removed


def compact(f: Pcnf) -> tuple[Pcnf, set[int]]:
    """Drop zero-occurrence variables, empty blocks, and merge adjacent
    same-quantifier blocks.  Returns the compacted formula and the removed
    variable ids (V_del)."""
    occurring = {abs(l) for c in f.clauses for l in c}
    new_prefix, removed = _compact_prefix(f.prefix, occurring)
    out = Pcnf(new_prefix)
    out.clauses = list(f.clauses)
    return out, removed


def apply_assignment(f: Pcnf, assignment):
    """Substitute an assignment into a formula and simplify.

    assignment is an iterable of literals (or a var -> bool map).  Satisfied
    clauses are removed, falsified literals are dropped, and the residual
    prefix loses assigned and no-longer-occurring variables.

    Returns True if every clause is satisfied, False if some clause is
    falsified outright, and the residual Pcnf otherwise.
    """
    a = assignment if isinstance(assignment, dict) else as_assignment(assignment)
    for v in a:
        if not f.prefix.declared(v):
            raise UsageError("assigned variable %d not in the prefix" % v)
    new_clauses = []
    for c in f.clauses:
        keep_lits = []
        satisfied = False
        for l in c:
            val = a.get(abs(l))
            if val is None:
                keep_lits.append(l)
            elif (l > 0) == val:
                satisfied = True
                break
        if satisfied:
            continue
        if not keep_lits:
            return False
        new_clauses.append(tuple(keep_lits))
    if not new_clauses:
        return True
    occurring = {abs(l) for c in new_clauses for l in c}
    new_prefix, _ = _compact_prefix(f.prefix, occurring)
    out = Pcnf(new_prefix)
    out.clauses = new_clauses
    return out
