"""Semi-cellular automata over cell spaces and their windowed dynamics.

An automaton is a cell space, a finite state range ``q`` (states are
``0..q-1``), a stabiliser-closed neighbourhood of cosets, and a local rule.
Full configurations never exist here: the global step is always applied in its
windowed form, mapping a pattern on A to a pattern on the neighbourhood
interior of A (where every neighbour is available).  This keeps all semantics
exact on finite windows.

Local rules are total tables over local state vectors listed in canonical
coset order; the table index is the big-endian base-q value of the vector.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Optional, Sequence

from . import geometry
from .errors import BudgetExceededError, PreconditionViolation
from .geometry import CellSet, CosetSet, close_coset_set, make_coset_set
from .spaces import CellSpace, DihedralSpace, GridSpace, SquareSymmetrySpace


class Pattern:
    """A finite partial configuration: an ordered cell domain plus states."""

    __slots__ = ("domain", "states")

    def __init__(self, domain, states: Sequence[int]):
        if not isinstance(domain, CellSet):
            domain = CellSet(domain)
        states = tuple(states)
        if len(states) != len(domain):
            raise ValueError(
                f"{len(domain)} cells but {len(states)} states"
            )
        self.domain = domain
        self.states = states

    @classmethod
    def from_map(cls, assignment: dict) -> "Pattern":
        domain = CellSet(assignment)
        return cls(domain, tuple(assignment[c] for c in domain))

    def at(self, cell) -> int:
        return self.states[self.domain.position(cell)]

    def restrict(self, cells: CellSet) -> "Pattern":
        return Pattern(cells, tuple(self.at(c) for c in cells))

    def agrees_on(self, other: "Pattern", cells) -> bool:
        return all(self.at(c) == other.at(c) for c in cells)

    def key(self):
        """Canonical encoding: domain in canonical order, then the states."""
        return (self.domain.cells, self.states)

    def __eq__(self, other):
        return isinstance(other, Pattern) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __len__(self):
        return len(self.domain)

    def __repr__(self):
        return f"Pattern({list(self.domain.cells)!r}, {self.states!r})"

    def as_json(self, space: CellSpace) -> dict:
        from .spaces import cell_to_json

        return {"cells": [cell_to_json(space, c) for c in self.domain],
                "states": list(self.states)}


class LocalRule:
    """A total map from local state vectors to states, stored as a table."""

    __slots__ = ("name", "q", "arity", "table", "_weights")

    def __init__(self, name: str, q: int, arity: int, table: Sequence[int]):
        if q < 1:
            raise ValueError("q must be >= 1")
        table = tuple(table)
        if len(table) != q ** arity:
            raise ValueError(f"table needs {q ** arity} entries, got {len(table)}")
        if any(not (0 <= v < q) for v in table):
            raise ValueError("table values must lie in range(q)")
        self.name = name
        self.q = q
        self.arity = arity
        self.table = table
        self._weights = tuple(q ** (arity - 1 - i) for i in range(arity))

    @classmethod
    def from_function(cls, name: str, q: int, arity: int, fn) -> "LocalRule":
        table = [fn(vec) for vec in product(range(q), repeat=arity)]
        return cls(name, q, arity, table)

    def __call__(self, local: Sequence[int]) -> int:
        idx = 0
        for v, w in zip(local, self._weights):
            idx += v * w
        return self.table[idx]

    def __repr__(self):
        return f"LocalRule({self.name!r}, q={self.q}, arity={self.arity})"


def eca_rule(code: int) -> LocalRule:
    """Elementary rule table for the window (-1, 0, 1) in canonical order."""
    if not 0 <= code <= 255:
        raise ValueError("elementary rule codes are 0..255")
    return LocalRule(f"eca:{code}", 2, 3, [(code >> i) & 1 for i in range(8)])


class SemiCellularAutomaton:
    """Cell space + states + stabiliser-closed neighbourhood + local rule."""

    def __init__(self, space: CellSpace, q: int, neighborhood: CosetSet,
                 rule: LocalRule, closure_added: tuple = ()):
        if q < 1:
            raise ValueError("q must be >= 1")
        if len(neighborhood) == 0:
            raise ValueError("neighbourhood must be non-empty")
        if not neighborhood.g0_closed:
            raise ValueError("neighbourhood is not closed under the stabiliser; "
                             "use SemiCellularAutomaton.create")
        if rule.q != q or rule.arity != len(neighborhood):
            raise ValueError("rule shape does not match q and neighbourhood size")
        self.space = space
        self.q = q
        self.neighborhood = neighborhood
        self.rule = rule
        self.closure_added = closure_added

    @property
    def name(self) -> str:
        return self.rule.name

    @classmethod
    def create(cls, space: CellSpace, q: int, cosets: Iterable, rule: LocalRule,
               on_unclosed: str = "reject") -> "SemiCellularAutomaton":
        """Build an automaton, handling a non-stabiliser-closed neighbourhood.

        ``on_unclosed="reject"`` raises; ``"close"`` extends the neighbourhood
        and wraps the rule to ignore the added cosets (the added ones are
        recorded on ``closure_added``).
        """
        ns = make_coset_set(space, cosets)
        if ns.g0_closed:
            return cls(space, q, ns, rule)
        if on_unclosed == "reject":
            raise ValueError("neighbourhood is not closed under the stabiliser")
        if on_unclosed != "close":
            raise ValueError("on_unclosed must be 'reject' or 'close'")
        closed, added = close_coset_set(space, ns.cosets)
        keep = [closed.cosets.index(c) for c in ns.cosets]
        wrapped = LocalRule.from_function(
            rule.name, q, len(closed),
            lambda vec: rule(tuple(vec[i] for i in keep)),
        )
        return cls(space, q, closed, wrapped, closure_added=added)

    def descriptor(self) -> dict:
        """Self-contained JSON form: space, q, neighbourhood offsets, table."""
        from .spaces import cell_to_json

        offsets = [cell_to_json(self.space, self.space.coset_to_cell(n))
                   for n in self.neighborhood]
        return {
            "space": self.space.describe(),
            "q": self.q,
            "neighborhood": offsets,
            "rule": {"name": self.rule.name, "table": list(self.rule.table)},
        }

    def __repr__(self):
        return (f"SemiCellularAutomaton({self.space.kind}, q={self.q}, "
                f"|N|={len(self.neighborhood)}, rule={self.rule.name})")


def automaton_from_descriptor(doc: dict) -> SemiCellularAutomaton:
    from .spaces import normalize_cell, space_from_json

    space = space_from_json(doc["space"])
    offsets = [normalize_cell(space, c) for c in doc["neighborhood"]]
    cosets = space.cosets_of_offsets(offsets)
    rule = LocalRule(doc["rule"].get("name", "rule"), int(doc["q"]),
                     len(cosets), doc["rule"]["table"])
    return SemiCellularAutomaton.create(space, int(doc["q"]), cosets, rule)


# ---------------------------------------------------------------- built-ins


def builtin_rule(space: CellSpace, spec: str):
    """Resolve a built-in rule name to (LocalRule, neighbourhood offsets).

    ``eca:K`` -- elementary rule K on the integer line;
    ``life``  -- the 2-state totalistic birth-3 / survive-2-3 rule on a
    two-dimensional lattice (plain or with square symmetries);
    ``majority`` -- per-cell majority over the radius-1 window, ties resolved
    by the centre state.
    """
    if spec.startswith("eca:"):
        if not (isinstance(space, GridSpace) and space.dims == 1):
            raise ValueError("eca rules need a 1-dimensional lattice space")
        return eca_rule(int(spec.split(":", 1)[1])), [(-1,), (0,), (1,)]

    if spec == "life":
        if isinstance(space, SquareSymmetrySpace) or (
                isinstance(space, GridSpace) and space.dims == 2):
            offsets = [(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)]
            center = sorted(offsets).index((0, 0))

            def life(vec):
                alive = vec[center]
                n = sum(vec) - alive
                return 1 if n == 3 or (alive and n == 2) else 0

            return LocalRule.from_function("life", 2, 9, life), offsets
        raise ValueError("life needs a 2-dimensional lattice space")

    if spec == "majority":
        if isinstance(space, GridSpace):
            offsets = [c for c in _box_offsets(space.dims)]
        elif isinstance(space, DihedralSpace):
            offsets = [(space.n - 1), 0, 1]
        else:
            raise ValueError("majority needs a lattice or dihedral space")
        arity = len(offsets)
        center = sorted(space.cosets_of_offsets(offsets)).index(
            space.stabiliser_coset())

        def majority(vec):
            ones = sum(vec)
            if 2 * ones > arity:
                return 1
            if 2 * ones < arity:
                return 0
            return vec[center]

        return LocalRule.from_function("majority", 2, arity, majority), offsets

    raise ValueError(f"unknown builtin rule {spec!r}")


def _box_offsets(dims):
    return [c for c in product((-1, 0, 1), repeat=dims)]


def make_automaton(space: CellSpace, rule_doc: dict) -> SemiCellularAutomaton:
    """Build an automaton from a rule JSON document.

    Either ``{"builtin": "eca:90"}`` or
    ``{"q": 2, "neighborhood": [offsets...], "table": [...]}`` with the table
    listed over local vectors in canonical coset order.
    """
    from .spaces import normalize_cell

    if "builtin" in rule_doc:
        rule, offsets = builtin_rule(space, rule_doc["builtin"])
        q = rule.q
    else:
        q = int(rule_doc["q"])
        offsets = [normalize_cell(space, c) for c in rule_doc["neighborhood"]]
        cosets = space.cosets_of_offsets(offsets)
        if len(cosets) != len(offsets):
            raise ValueError("neighborhood offsets map to duplicate cosets")
        rule = LocalRule(rule_doc.get("name", "rule"), q, len(cosets),
                         rule_doc["table"])
        return SemiCellularAutomaton.create(
            space, q, cosets, rule,
            on_unclosed=rule_doc.get("on_unclosed", "reject"))
    cosets = space.cosets_of_offsets(offsets)
    return SemiCellularAutomaton.create(space, q, cosets, rule,
                                        on_unclosed="reject")


# -------------------------------------------------------------- invariance


def stabiliser_invariance(ca: SemiCellularAutomaton, budget: Optional[int] = None):
    """Exhaustively test the local rule against the stabiliser action on
    local vectors.

    Returns ``(True, None, checks)`` when the rule is invariant (the automaton
    is then a genuine cellular automaton) or ``(False, (g0, vector), checks)``
    with an explicit counterexample.
    """
    space = ca.space
    N = ca.neighborhood.cosets
    pos = {c: i for i, c in enumerate(N)}
    perms = []
    for g0 in space.stabiliser:
        g0_inv = space.inv(g0)
        perms.append((g0, tuple(pos[space.coset_mul(g0_inv, n)] for n in N)))
    total = (ca.q ** len(N)) * len(perms)
    if budget is not None and total > budget:
        raise BudgetExceededError(total, budget)
    checks = 0
    for vec in product(range(ca.q), repeat=len(N)):
        base = ca.rule(vec)
        for g0, perm in perms:
            checks += 1
            moved = tuple(vec[perm[i]] for i in range(len(N)))
            if ca.rule(moved) != base:
                return False, (g0, vec), checks
    return True, None, checks


# ------------------------------------------------------------------ stepping


def restricted_step(ca: SemiCellularAutomaton, p: Pattern) -> Pattern:
    """Apply the global rule wherever the whole neighbourhood is present.

    The output domain is the exact neighbourhood interior of the input
    domain, which may be empty.
    """
    space = ca.space
    out_cells = geometry.interior_cells(space, p.domain, ca.neighborhood)
    pos = p.domain.position
    states = p.states
    rule = ca.rule
    vals = [
        rule([states[pos(space.semi_act(m, n))] for n in ca.neighborhood])
        for m in out_cells
    ]
    return Pattern(out_cells, vals)


def act_on_pattern(space: CellSpace, g, p: Pattern) -> Pattern:
    """Move a pattern by a group element: domain mapped, values pulled back."""
    moved = {space.act(g, a): v for a, v in zip(p.domain, p.states)}
    return Pattern.from_map(moved)


def semi_act_on_pattern(space: CellSpace, m, p: Pattern) -> Pattern:
    """Move a pattern to sit at ``m``: the transporter of ``m`` acting on it."""
    return act_on_pattern(space, space.transporter(m), p)


def occurs_at(space: CellSpace, p: Pattern, m, c: Pattern) -> bool:
    """Whether the translate of ``p`` to ``m`` agrees with ``c`` there.

    The translated domain must lie inside c's domain, otherwise occurrence is
    undecidable on the window and a ValueError is raised.  Empty patterns
    occur everywhere.
    """
    moved = semi_act_on_pattern(space, m, p)
    if not moved.domain.issubset(c.domain):
        raise ValueError("translated pattern leaves the configuration window")
    return all(c.at(cell) == v for cell, v in zip(moved.domain, moved.states))


# ---------------------------------------------------------------- replacement


def derive_overlap_set(space: CellSpace, N) -> CosetSet:
    """Cosets inv(g) * n' over all n, n' in N and g in n.

    This is the interaction range of two overlapping neighbourhoods: a cell
    whose neighbourhood touches a set A reads only cells in the overlap-set
    closure of A.  The result is always stabiliser-closed.
    """
    stab = space.stabiliser
    out = set()
    for n in N:
        members = [space.mul(n.rep, g0) for g0 in stab]
        for n2 in N:
            for g in members:
                out.add(space.coset(space.mul(space.inv(g), n2.rep)))
    cs = make_coset_set(space, out)
    assert cs.g0_closed, "overlap set must be stabiliser-closed"
    return cs


def replace_occurrences(ca: SemiCellularAutomaton, c: Pattern, sites: CellSet,
                        core: CellSet, p: Pattern, p_new: Pattern) -> Pattern:
    """Swap ``p`` for ``p_new`` at every site, leaving the window step intact.

    ``p`` and ``p_new`` live on the overlap-set closure of ``core``, agree
    outside ``core``, and have equal restricted steps; the translated domains
    at the sites must be pairwise disjoint and lie inside the window of ``c``;
    ``p`` must occur at every site.  Violations raise
    :class:`PreconditionViolation` naming the failing clause.
    """
    space = ca.space
    overlap = derive_overlap_set(space, ca.neighborhood)
    dom = geometry.closure_cells(space, core, overlap)
    if p.domain != dom or p_new.domain != dom:
        raise PreconditionViolation("domain",
                                    "patterns must live on the overlap closure of the core")
    rim = dom.difference(core)
    if not p.agrees_on(p_new, rim):
        raise PreconditionViolation("outside-core equality")
    if restricted_step(ca, p) != restricted_step(ca, p_new):
        raise PreconditionViolation("step equality")
    seen = set()
    moved_new = {}
    for s in sites:
        moved = semi_act_on_pattern(space, s, p_new)
        if not moved.domain.issubset(c.domain):
            raise PreconditionViolation("window", f"site {s!r} leaves the window")
        if any(cell in seen for cell in moved.domain):
            raise PreconditionViolation("disjoint sites", f"site {s!r} overlaps")
        seen.update(moved.domain.cells)
        moved_new[s] = moved
        if not occurs_at(space, p, s, c):
            raise PreconditionViolation("occurrence", f"pattern absent at {s!r}")
    values = {cell: v for cell, v in zip(c.domain, c.states)}
    for moved in moved_new.values():
        for cell, v in zip(moved.domain, moved.states):
            values[cell] = v
    return Pattern(c.domain, tuple(values[cell] for cell in c.domain))
