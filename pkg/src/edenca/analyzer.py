"""Surjectivity / pre-injectivity analysis and pattern entropy.

Two kinds of evidence are produced and kept strictly apart:

* *witness searches* are semi-decisions under explicit budgets: a found
  witness (a pattern missing from every window image, or a mutually erasable
  pattern pair) refutes the property; an exhausted budget proves nothing;
* *exact oracles* decide the properties outright where that is possible at
  desk scale: on the integer line via the labelled de Bruijn graph (subset
  construction for surjectivity, pair-graph reachability for mutual
  erasability) and on finite spaces by exhausting all configurations.

Entropy rows are exact statements about finite windows: the per-index count
of distinct patterns, never an extrapolation to the limit.  Sampled mode
reports certified lower bounds only.

Every reported witness re-verifies from scratch through the automaton engine;
no search state is trusted.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

from . import geometry
from .automaton import Pattern, SemiCellularAutomaton, derive_overlap_set, restricted_step
from .errors import BudgetExceededError
from .folner import FolnerSequence, folner_box, folner_sequence
from .geometry import CellSet
from .spaces import CellSpace, GridSpace, cell_to_json, normalize_cell

DEFAULT_PATTERN_BUDGET = 1 << 20


def out_neighborhood(ca_or_space, F: CellSet, N=None) -> CellSet:
    """The union of the neighbourhoods of all cells of ``F``.

    Any pattern on the result determines the step on all of ``F``; that is
    asserted via the exact interior.
    """
    if N is None:
        space, N = ca_or_space.space, ca_or_space.neighborhood
    else:
        space = ca_or_space
    out = set()
    for m in F:
        for n in N:
            out.add(space.semi_act(m, n))
    result = CellSet(out)
    assert F.issubset(geometry.interior_cells(space, result, N))
    return result


def _step_plan(ca: SemiCellularAutomaton, sources: CellSet, targets: CellSet):
    """Per-target (source-index, weight) pairs: the rule-table index of a
    target under a source assignment is the paired weighted sum."""
    space = ca.space
    pos = sources.position
    weights = ca.rule._weights
    plan = []
    for m in targets:
        idxs = [pos(space.semi_act(m, n)) for n in ca.neighborhood]
        plan.append(tuple(zip(idxs, weights)))
    return plan


def _enumerate_images(ca, plan, n_sources, first_states, threads=1):
    table = ca.rule.table
    q = ca.q

    def run(first_range):
        seen = set()
        for head in first_range:
            for rest in product(range(q), repeat=n_sources - 1):
                src = (head,) + rest
                seen.add(tuple(table[sum(src[i] * w for i, w in pairs)]
                               for pairs in plan))
        return seen
    if n_sources == 0:
        # empty out-neighbourhood forces an empty target window
        assert not plan
        return {()}
    if threads <= 1 or n_sources == 1:
        return run(first_states)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(run, [[s] for s in first_states])
    out = set()
    for part in parts:
        out |= part
    return out


def image_patterns(ca: SemiCellularAutomaton, F: CellSet,
                   budget: Optional[int] = DEFAULT_PATTERN_BUDGET,
                   threads: int = 1) -> set:
    """Exactly the set of step images restricted to ``F``, as state tuples in
    canonical cell order.

    Enumerates all assignments on the out-neighbourhood of ``F``; raises
    :class:`BudgetExceededError` when that exceeds the budget.
    """
    A = out_neighborhood(ca, F)
    total = ca.q ** len(A)
    if budget is not None and total > budget:
        raise BudgetExceededError(total, budget)
    plan = _step_plan(ca, A, F)
    return _enumerate_images(ca, plan, len(A), range(ca.q), threads)


# ---------------------------------------------------------------- witnesses


@dataclass(frozen=True)
class GoeWitness:
    """A re-verifiable refutation: either a pattern missing from every window
    image, or a mutually erasable pattern pair."""

    kind: str                      # "goe-pattern" | "mutually-erasable"
    window: tuple                  # goe: the window F; me: the pair's domain
    states: Optional[tuple] = None         # goe: the missing pattern
    core: Optional[tuple] = None           # me: cells where the pair may differ
    states_a: Optional[tuple] = None
    states_b: Optional[tuple] = None

    def as_json(self, space: CellSpace) -> dict:
        doc = {"kind": self.kind,
               "window": [cell_to_json(space, c) for c in self.window]}
        if self.kind == "goe-pattern":
            doc["states"] = list(self.states)
        else:
            doc["core"] = [cell_to_json(space, c) for c in self.core]
            doc["states_a"] = list(self.states_a)
            doc["states_b"] = list(self.states_b)
        return doc

    @classmethod
    def from_json(cls, space: CellSpace, doc: dict) -> "GoeWitness":
        window = tuple(normalize_cell(space, c) for c in doc["window"])
        if doc["kind"] == "goe-pattern":
            return cls("goe-pattern", window, states=tuple(doc["states"]))
        return cls("mutually-erasable", window,
                   core=tuple(normalize_cell(space, c) for c in doc["core"]),
                   states_a=tuple(doc["states_a"]),
                   states_b=tuple(doc["states_b"]))


def find_goe_pattern(ca: SemiCellularAutomaton, schedule: Sequence[CellSet],
                     budget: int = DEFAULT_PATTERN_BUDGET, threads: int = 1):
    """Scan windows for a pattern missing from the step image.

    Returns ``(witness, statuses)``: the witness is the lexicographically
    least missing pattern on the first window that has one, or None when the
    schedule is exhausted -- which proves nothing about surjectivity.
    Windows over budget are recorded and skipped.
    """
    statuses = []
    for F in schedule:
        try:
            imgs = image_patterns(ca, F, budget, threads)
        except BudgetExceededError:
            statuses.append({"window": len(F), "status": "budget-exceeded"})
            continue
        if len(imgs) < ca.q ** len(F):
            missing = next(states for states in product(range(ca.q), repeat=len(F))
                           if states not in imgs)
            statuses.append({"window": len(F), "status": "witness"})
            return GoeWitness("goe-pattern", F.cells, states=missing), statuses
        statuses.append({"window": len(F), "status": "complete"})
    return None, statuses


def find_mutually_erasable(ca: SemiCellularAutomaton, cores: Sequence[CellSet],
                           budget: int = DEFAULT_PATTERN_BUDGET):
    """Search pattern pairs that differ only on a core yet step identically.

    For each core A the pair domain is the overlap-set closure of A.  Returns
    the lexicographically least pair on the first core that has one; None at
    an exhausted schedule is inconclusive.
    """
    space = ca.space
    overlap = derive_overlap_set(space, ca.neighborhood)
    statuses = []
    for A in cores:
        D = geometry.closure_cells(space, A, overlap)
        total = ca.q ** len(D)
        if budget is not None and total > budget:
            statuses.append({"core": len(A), "status": "budget-exceeded"})
            continue
        targets = geometry.interior_cells(space, D, ca.neighborhood)
        plan = _step_plan(ca, D, targets)
        table = ca.rule.table
        outside = tuple(i for i, cell in enumerate(D) if cell not in A)
        groups = {}
        for src in product(range(ca.q), repeat=len(D)):
            img = tuple(table[sum(src[i] * w for i, w in pairs)] for pairs in plan)
            key = (tuple(src[i] for i in outside), img)
            bucket = groups.setdefault(key, [])
            if len(bucket) < 2:
                bucket.append(src)
        pairs = [tuple(b) for b in groups.values() if len(b) == 2]
        if pairs:
            a, b = min(pairs)
            statuses.append({"core": len(A), "status": "witness"})
            witness = GoeWitness("mutually-erasable", D.cells, core=A.cells,
                                 states_a=a, states_b=b)
            return witness, statuses
        statuses.append({"core": len(A), "status": "none"})
    return None, statuses


def verify_witness(ca: SemiCellularAutomaton, w: GoeWitness) -> bool:
    """Re-validate a witness from scratch through the automaton engine."""
    space = ca.space
    if w.kind == "goe-pattern":
        F = CellSet(w.window)
        if len(w.states) != len(F):
            return False
        target = Pattern(F, w.states)
        A = out_neighborhood(ca, F)
        for src in product(range(ca.q), repeat=len(A)):
            stepped = restricted_step(ca, Pattern(A, src))
            if stepped.restrict(F) == target:
                return False
        return True
    if w.kind == "mutually-erasable":
        D = CellSet(w.window)
        core = CellSet(w.core)
        overlap = derive_overlap_set(space, ca.neighborhood)
        if D != geometry.closure_cells(space, core, overlap):
            return False
        pa = Pattern(D, w.states_a)
        pb = Pattern(D, w.states_b)
        if pa == pb:
            return False
        if not pa.agrees_on(pb, D.difference(core)):
            return False
        return restricted_step(ca, pa) == restricted_step(ca, pb)
    return False


# ------------------------------------------------------------------ entropy


@dataclass(frozen=True)
class EntropyRow:
    index: int
    size: int
    count: Optional[int]
    bits_per_cell: Optional[float]
    status: str                    # "ok" | "budget-exceeded"
    mode: str                      # "exact" | "sampled-lower-bound"

    def as_json(self):
        return {"index": self.index, "size": self.size,
                "count": None if self.count is None else str(self.count),
                "bits_per_cell": self.bits_per_cell,
                "status": self.status, "mode": self.mode}


@dataclass(frozen=True)
class EntropySeries:
    """Per-window pattern counts along a Følner sequence (log base 2).

    Rows are exact statements about their windows; nothing here approximates
    the limit value.
    """

    subject: str
    rows: tuple = field(default_factory=tuple)

    def as_json(self):
        return {"subject": self.subject, "rows": [r.as_json() for r in self.rows]}


def entropy_series(space: CellSpace, folner: FolnerSequence, indices,
                   ca: Optional[SemiCellularAutomaton] = None,
                   q: Optional[int] = None, mode: str = "exact",
                   budget: int = DEFAULT_PATTERN_BUDGET, samples: int = 4096,
                   seed: int = 0, threads: int = 1) -> EntropySeries:
    """Count patterns with window domains along a Følner sequence.

    Full shift (``ca=None``: all patterns of ``q`` states) or the step image
    of an automaton.  Exact mode enumerates; sampled mode draws random source
    assignments and reports the number of distinct images seen, a certified
    lower bound on the true count.
    """
    if ca is None:
        if q is None:
            raise ValueError("full-shift series needs q")
        subject = f"full-shift(q={q})"
    else:
        q = ca.q
        subject = f"image({ca.name})"
    rows = []
    for i in indices:
        F = folner(i)
        size = len(F)
        if ca is None:
            rows.append(EntropyRow(i, size, q ** size, math.log2(q), "ok", "exact"))
            continue
        if mode == "exact":
            try:
                count = len(image_patterns(ca, F, budget, threads))
            except BudgetExceededError:
                rows.append(EntropyRow(i, size, None, None, "budget-exceeded", "exact"))
                continue
            rows.append(EntropyRow(i, size, count, math.log2(count) / size,
                                   "ok", "exact"))
        elif mode == "sampled":
            rng = random.Random((seed, i))
            A = out_neighborhood(ca, F)
            plan = _step_plan(ca, A, F)
            table = ca.rule.table
            seen = set()
            for _ in range(samples):
                src = tuple(rng.randrange(q) for _ in range(len(A)))
                seen.add(tuple(table[sum(src[j] * w for j, w in pairs)]
                               for pairs in plan))
            count = len(seen)
            rows.append(EntropyRow(i, size, count, math.log2(count) / size,
                                   "ok", "sampled-lower-bound"))
        else:
            raise ValueError("mode must be 'exact' or 'sampled'")
    return EntropySeries(subject, tuple(rows))


# ------------------------------------------------------------------- oracles


def _line_window(ca: SemiCellularAutomaton):
    """Window span and per-offset positions for a 1-D automaton.

    The neighbourhood is padded to its contiguous hull; the padded rule reads
    only the original offsets, so the global map is unchanged.
    """
    space = ca.space
    if not (isinstance(space, GridSpace) and space.dims == 1):
        raise ValueError("line oracles need a 1-dimensional lattice space")
    offsets = [n.rep[0] for n in ca.neighborhood]
    lo, hi = min(offsets), max(offsets)
    width = hi - lo + 1
    positions = [o - lo for o in offsets]
    return width, positions


def _line_label(ca, positions):
    table = ca.rule.table
    weights = ca.rule._weights

    def label(window):
        idx = 0
        for p, w in zip(positions, weights):
            idx += window[p] * w
        return table[idx]
    return label


def surjectivity_oracle_1d(ca: SemiCellularAutomaton) -> bool:
    """Decide surjectivity on the line exactly.

    Subset construction over the labelled de Bruijn graph: the step image
    misses some finite word iff the empty node set is reachable from the full
    one.
    """
    width, positions = _line_window(ca)
    label = _line_label(ca, positions)
    q = ca.q
    nodes = [tuple(v) for v in product(range(q), repeat=width - 1)]
    succ = {u: [(u[1:] + (a,), label(u + (a,))) for a in range(q)] for u in nodes}
    start = frozenset(nodes)
    seen = {start}
    stack = [start]
    while stack:
        S = stack.pop()
        for sym in range(q):
            T = frozenset(v for u in S for v, lab in succ[u] if lab == sym)
            if not T:
                return False
            if T not in seen:
                seen.add(T)
                stack.append(T)
    return True


def pre_injectivity_oracle_1d(ca: SemiCellularAutomaton) -> bool:
    """Decide pre-injectivity on the line exactly.

    Pair-graph reachability: a mutually erasable pair exists iff some
    label-equal path runs diagonal-to-diagonal through an edge whose two
    symbols differ.
    """
    width, positions = _line_window(ca)
    label = _line_label(ca, positions)
    q = ca.q
    nodes = [tuple(v) for v in product(range(q), repeat=width - 1)]
    pair_succ = {}
    pair_pred = {}
    edges = []
    for u in nodes:
        for v in nodes:
            for a in range(q):
                la = label(u + (a,))
                ua = u[1:] + (a,)
                for b in range(q):
                    if la != label(v + (b,)):
                        continue
                    vb = v[1:] + (b,)
                    pair_succ.setdefault((u, v), []).append((ua, vb))
                    pair_pred.setdefault((ua, vb), []).append((u, v))
                    if a != b:
                        edges.append(((u, v), (ua, vb)))
    diag = [(u, u) for u in nodes]
    forward = _reach(diag, pair_succ)
    backward = _reach(diag, pair_pred)
    for src, dst in edges:
        if src in forward and dst in backward:
            return False
    return True


def _reach(starts, adjacency):
    seen = set(starts)
    stack = list(starts)
    while stack:
        x = stack.pop()
        for y in adjacency.get(x, ()):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def finite_space_oracle(ca: SemiCellularAutomaton,
                        budget: int = DEFAULT_PATTERN_BUDGET):
    """Exhaust all configurations of a finite space.

    Returns ``(surjective, pre_injective)``.  On a finite cell set the step is
    a self-map of a finite set and every difference is finite, so both answers
    coincide with bijectivity.
    """
    space = ca.space
    if not space.finite:
        raise ValueError("finite_space_oracle needs a finite space")
    M = CellSet(space.cells())
    total = ca.q ** len(M)
    if budget is not None and total > budget:
        raise BudgetExceededError(total, budget)
    plan = _step_plan(ca, M, M)
    table = ca.rule.table
    images = set()
    for src in product(range(ca.q), repeat=len(M)):
        images.add(tuple(table[sum(src[i] * w for i, w in pairs)] for pairs in plan))
    bijective = len(images) == total
    return bijective, bijective


# -------------------------------------------------------------------- report


@dataclass
class AnalysisBudgets:
    pattern_budget: int = DEFAULT_PATTERN_BUDGET
    goe_indices: tuple = (1, 2, 3, 4, 5, 6, 7, 8)
    me_indices: tuple = (1, 2, 3, 4, 5, 6, 7, 8)
    entropy_indices: tuple = (1, 2, 3, 4, 5, 6)
    entropy_mode: str = "exact"
    samples: int = 4096
    seed: int = 0
    threads: int = 1

    def as_json(self):
        return {"pattern_budget": self.pattern_budget,
                "goe_indices": list(self.goe_indices),
                "me_indices": list(self.me_indices),
                "entropy_indices": list(self.entropy_indices),
                "entropy_mode": self.entropy_mode,
                "samples": self.samples, "seed": self.seed,
                "threads": self.threads}


@dataclass
class AnalysisReport:
    ca: SemiCellularAutomaton
    surjective: str                 # "yes" | "no" | "unknown"
    pre_injective: str
    methods: dict
    goe_witness: Optional[GoeWitness]
    me_witness: Optional[GoeWitness]
    entropy: EntropySeries
    budgets: AnalysisBudgets
    search_log: dict
    consistency_flag: bool

    def as_json(self):
        space = self.ca.space
        return {
            "schema": 1,
            "ca": self.ca.descriptor(),
            "surjective": self.surjective,
            "pre_injective": self.pre_injective,
            "methods": self.methods,
            "witness": {
                "goe": self.goe_witness.as_json(space) if self.goe_witness else None,
                "mutually_erasable":
                    self.me_witness.as_json(space) if self.me_witness else None,
            },
            "entropy": self.entropy.as_json(),
            "budgets": self.budgets.as_json(),
            "search_log": self.search_log,
            "consistency_flag": self.consistency_flag,
        }


def goe_report(ca: SemiCellularAutomaton,
               budgets: Optional[AnalysisBudgets] = None) -> AnalysisReport:
    """Run both witness searches plus every applicable exact oracle.

    Verdicts are "yes"/"no" only when proven (oracle) or refuted (re-verified
    witness); otherwise "unknown".  The consistency flag trips when, on these
    built-in (all amenable) spaces, one property is refuted while the other is
    proven -- which would mean a bug, never new mathematics.
    """
    if budgets is None:
        budgets = AnalysisBudgets()
    space = ca.space
    surjective, pre_injective = "unknown", "unknown"
    methods = {"surjective": "budget-exhausted", "pre_injective": "budget-exhausted"}

    schedule = _unique([folner_box(space, i) for i in budgets.goe_indices])
    goe_w, goe_log = find_goe_pattern(ca, schedule, budgets.pattern_budget,
                                      budgets.threads)
    if goe_w is not None:
        if not verify_witness(ca, goe_w):
            raise RuntimeError("found GOE witness failed re-verification")
        surjective = "no"
        methods["surjective"] = "witness-search"

    cores = _unique([folner_box(space, i) for i in budgets.me_indices])
    me_w, me_log = find_mutually_erasable(ca, cores, budgets.pattern_budget)
    if me_w is not None:
        if not verify_witness(ca, me_w):
            raise RuntimeError("found erasable pair failed re-verification")
        pre_injective = "no"
        methods["pre_injective"] = "witness-search"

    oracle = {}
    if isinstance(space, GridSpace) and space.dims == 1:
        s = surjectivity_oracle_1d(ca)
        p = pre_injectivity_oracle_1d(ca)
        oracle = {"surjective": s, "pre_injective": p, "kind": "line"}
    elif space.finite:
        try:
            s, p = finite_space_oracle(ca, budgets.pattern_budget)
            oracle = {"surjective": s, "pre_injective": p, "kind": "exhaustive"}
        except BudgetExceededError:
            oracle = {}
    if oracle:
        s_verdict = "yes" if oracle["surjective"] else "no"
        p_verdict = "yes" if oracle["pre_injective"] else "no"
        if surjective != "unknown" and surjective != s_verdict:
            raise RuntimeError("witness search contradicts the exact oracle "
                               "on surjectivity")
        if pre_injective != "unknown" and pre_injective != p_verdict:
            raise RuntimeError("witness search contradicts the exact oracle "
                               "on pre-injectivity")
        surjective, pre_injective = s_verdict, p_verdict
        methods["surjective"] = f"{oracle['kind']}-oracle"
        methods["pre_injective"] = f"{oracle['kind']}-oracle"

    series = entropy_series(space, folner_sequence(space),
                            budgets.entropy_indices, ca=ca,
                            mode=budgets.entropy_mode,
                            budget=budgets.pattern_budget,
                            samples=budgets.samples, seed=budgets.seed,
                            threads=budgets.threads)

    flag = ((surjective == "yes" and pre_injective == "no")
            or (surjective == "no" and pre_injective == "yes"))
    return AnalysisReport(ca, surjective, pre_injective, methods, goe_w, me_w,
                          series, budgets,
                          {"goe": goe_log, "mutually_erasable": me_log}, flag)


def _unique(cell_sets):
    seen = set()
    out = []
    for cs in cell_sets:
        if cs not in seen:
            seen.add(cs)
            out.append(cs)
    return out
