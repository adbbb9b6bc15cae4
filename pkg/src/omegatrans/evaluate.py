"""Exact evaluation of machines on ultimately periodic words.

Two-way runs are classified by simulation with two loop detectors: an exact
configuration repeat proves the run never reads the whole word, and a
guarded shift loop (same state, positive position shift by a multiple of
the period length, head staying inside the periodic region in between)
proves the run continues forever as shifted copies of one segment.  The
transitions of that segment are exactly those taken infinitely often, which
decides parity acceptance and yields an exact output lasso.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .lasso import LassoWord, lasso_canonicalize, lasso_equal
from .machines import (
    LEFT_END,
    CopylessParitySST,
    SstTransition,
    State,
    Substitution,
    TwoWayParityTransducer,
)

ACCEPTED = "accepted"
ACCEPTED_FINITE = "accepted-finite-output"
REJECTED_PARITY = "rejected-parity"
REJECTED_STUCK = "rejected-stuck"
REJECTED_LOOP = "rejected-loop"
BUDGET_EXCEEDED = "budget-exceeded"


@dataclass(frozen=True, slots=True)
class EvalBudget:
    max_steps: int = 100_000
    max_output: int = 100_000

    def __post_init__(self):
        if self.max_steps <= 0 or self.max_output <= 0:
            raise ValueError("budgets must be positive")


def default_budget() -> EvalBudget:
    """Budget from the OMEGA_TRANS_BUDGET environment variable, if set."""
    raw = os.environ.get("OMEGA_TRANS_BUDGET")
    if raw:
        n = int(raw)
        return EvalBudget(max_steps=n, max_output=n)
    return EvalBudget()


@dataclass(frozen=True, slots=True)
class Configuration:
    """Head state and position; a forward state reads the letter at
    ``position``, a backward state the letter at ``position - 1`` (the
    endmarker when that is negative)."""

    state: State
    position: int


@dataclass(frozen=True)
class RunOutcome:
    """Verdict of evaluating a machine on a lasso.

    ``output`` is the exact output lasso for accepted runs with infinite
    output; ``output_prefix`` always carries the produced finite prefix (up
    to the output budget).  ``prefix_only`` marks accepted runs whose
    output could only be certified as a prefix.
    """

    verdict: str
    output: Optional[LassoWord] = None
    output_prefix: tuple[str, ...] = ()
    prefix_only: bool = False
    min_colors: Optional[tuple[int, ...]] = None
    steps: int = 0

    def automaton_accepts(self) -> bool:
        return self.verdict in (ACCEPTED, ACCEPTED_FINITE)

    def in_domain(self) -> bool:
        """Membership in the transducer domain: accepted with infinite output."""
        return self.verdict == ACCEPTED

    def domain_class(self) -> str:
        if self.verdict == ACCEPTED:
            return "inf"
        if self.verdict == ACCEPTED_FINITE:
            return "fin"
        if self.verdict == BUDGET_EXCEEDED:
            return "inconclusive"
        return "reject"


def step_two_way(
    machine: TwoWayParityTransducer, word: LassoWord, config: Configuration
):
    """One successor step; None when the needed transition is undefined.

    Returns (next configuration, output word, colors).  Forward-to-forward
    moves right, backward-to-backward moves left, polarity flips keep the
    head in place; on the endmarker the head never moves.
    """
    state, pos = config.state, config.position
    if state.forward:
        letter = word.letter(pos)
    else:
        letter = word.letter(pos - 1) if pos > 0 else LEFT_END
    tr = machine.transitions.get((state, letter))
    if tr is None:
        return None
    if letter == LEFT_END:
        new_pos = pos
    elif state.forward:
        new_pos = pos + 1 if tr.target.forward else pos
    else:
        new_pos = pos if tr.target.forward else pos - 1
    return Configuration(tr.target, new_pos), tr.output, tr.colors


@dataclass
class TwoWayRun:
    """Full record of a classified two-way simulation (testing hook)."""

    kind: str  # one of the verdict constants
    configs: list[Configuration] = field(default_factory=list)
    outputs: list[tuple[str, ...]] = field(default_factory=list)
    colors: list[tuple[int, ...]] = field(default_factory=list)
    loop_start: int = -1
    loop_end: int = -1


def simulate_two_way(
    machine: TwoWayParityTransducer, word: LassoWord, max_steps: int
) -> TwoWayRun:
    """Simulate until the run is classified or ``max_steps`` transitions ran."""
    word = lasso_canonicalize(word)
    plen = len(word.prefix)
    vlen = len(word.period)
    run = TwoWayRun(kind=BUDGET_EXCEEDED)
    config = Configuration(machine.initial, 0)
    run.configs.append(config)
    visited = {config: 0}
    # Earliest periodic-region visit per (state, residue) since the head
    # last dipped below the prefix; cleared on every dip so the shift-loop
    # guard (head stays in the periodic region) holds by construction.
    anchors: dict[tuple[State, int], tuple[int, int]] = {}
    for t in range(max_steps):
        stepped = step_two_way(machine, word, config)
        if stepped is None:
            run.kind = REJECTED_STUCK
            return run
        config, output, colors = stepped
        run.outputs.append(output)
        run.colors.append(colors)
        run.configs.append(config)
        if config in visited:
            run.kind = REJECTED_LOOP
            run.loop_start = visited[config]
            run.loop_end = t + 1
            return run
        visited[config] = t + 1
        # The loop argument needs every letter read inside the candidate
        # segment to come from the periodic region, and a backward state at
        # position p reads p - 1.
        read_pos = config.position if config.state.forward else config.position - 1
        if read_pos < plen:
            anchors.clear()
            continue
        key = (config.state, (config.position - plen) % vlen)
        prev = anchors.get(key)
        if prev is None:
            anchors[key] = (t + 1, config.position)
        elif config.position > prev[1]:
            run.kind = "shift-loop"
            run.loop_start = prev[0]
            run.loop_end = t + 1
            return run
        elif config.position < prev[1]:
            anchors[key] = (t + 1, config.position)
    return run


def _classify(machine: TwoWayParityTransducer, run: TwoWayRun, budget: EvalBudget) -> RunOutcome:
    steps = len(run.outputs)
    flat_prefix: list[str] = []
    for out in run.outputs[: run.loop_start if run.loop_start >= 0 else steps]:
        flat_prefix.extend(out)
    if run.kind in (REJECTED_STUCK, REJECTED_LOOP, BUDGET_EXCEEDED):
        return RunOutcome(
            run.kind,
            output_prefix=tuple(flat_prefix[: budget.max_output]),
            steps=steps,
        )
    # Shift loop: transitions in [loop_start, loop_end) repeat forever.
    mins = tuple(
        min(run.colors[t][i] for t in range(run.loop_start, run.loop_end))
        for i in range(machine.k)
    )
    if any(m % 2 == 1 for m in mins):
        return RunOutcome(REJECTED_PARITY, min_colors=mins, steps=steps)
    loop_out: list[str] = []
    for t in range(run.loop_start, run.loop_end):
        loop_out.extend(run.outputs[t])
    if not loop_out:
        return RunOutcome(
            ACCEPTED_FINITE,
            output_prefix=tuple(flat_prefix[: budget.max_output]),
            min_colors=mins,
            steps=steps,
        )
    lasso = lasso_canonicalize(LassoWord(tuple(flat_prefix), tuple(loop_out)))
    prefix = (tuple(flat_prefix) + tuple(loop_out))[: budget.max_output]
    return RunOutcome(ACCEPTED, output=lasso, output_prefix=prefix, min_colors=mins, steps=steps)


def eval_two_way(
    machine: TwoWayParityTransducer, w: LassoWord, budget: Optional[EvalBudget] = None
) -> RunOutcome:
    """Classify the run of a two-way machine on ``w`` exactly."""
    budget = budget or default_budget()
    run = simulate_two_way(machine, w, budget.max_steps)
    return _classify(machine, run, budget)


def eval_one_way(machine: TwoWayParityTransducer, w: LassoWord) -> RunOutcome:
    """One-way specialization; the loop shows up within |u| + |Q|·|v| steps."""
    if not machine.is_one_way():
        raise ValueError("eval_one_way requires a one-way machine")
    w = lasso_canonicalize(w)
    steps = len(w.prefix) + (len(machine.states) + 2) * len(w.period) + 2
    run = simulate_two_way(machine, w, steps)
    return _classify(machine, run, EvalBudget(max_steps=steps, max_output=10**9))


# ---------------------------------------------------------------------------
# Register machines


def _sst_automaton_loop(sst: CopylessParitySST, w: LassoWord):
    """Run the underlying one-way automaton; return (trace, loop bounds) or
    a stuck step index."""
    plen, vlen = len(w.prefix), len(w.period)
    state = sst.initial
    trace: list[SstTransition] = []
    seen: dict[tuple[State, int], int] = {}
    t = 0
    while True:
        if t >= plen:
            key = (state, (t - plen) % vlen)
            if key in seen:
                return trace, seen[key], t
            seen[key] = t
        tr = sst.transitions.get((state, w.letter(t)))
        if tr is None:
            return trace, None, t
        trace.append(tr)
        state = tr.target
        t += 1


def _nonempty_after(update: Substitution, nonempty: frozenset[str], registers) -> frozenset[str]:
    new = set()
    for r in registers:
        for kind, value in update.image(r):
            if kind == "sym" or value in nonempty:
                new.add(r)
                break
    return frozenset(new)


def eval_sst(
    sst: CopylessParitySST, w: LassoWord, budget: Optional[EvalBudget] = None
) -> RunOutcome:
    """Classify an SST run: exact parity verdict, exact unboundedness verdict
    for the out register, and an exact output lasso whenever the non-out
    register contents become literally periodic over the automaton loop."""
    budget = budget or default_budget()
    w = lasso_canonicalize(w)
    trace, loop_start, loop_end = _sst_automaton_loop(sst, w)
    valuation: dict[str, tuple[str, ...]] = {r: () for r in sst.registers}
    produced = 0
    for i, tr in enumerate(trace[: loop_start if loop_start is not None else len(trace)]):
        valuation = tr.update.apply(valuation)
        produced = sum(len(v) for v in valuation.values())
        if produced > budget.max_output:
            return RunOutcome(BUDGET_EXCEEDED, output_prefix=valuation[sst.out][: budget.max_output], steps=i)
    if loop_start is None:
        return RunOutcome(
            REJECTED_STUCK, output_prefix=valuation[sst.out][: budget.max_output], steps=loop_end
        )
    mins = tuple(
        min(trace[t].colors[i] for t in range(loop_start, loop_end))
        for i in range(sst.k)
    )
    if any(m % 2 == 1 for m in mins):
        return RunOutcome(REJECTED_PARITY, min_colors=mins, steps=loop_end)

    loop_update = trace[loop_start].update
    for t in range(loop_start + 1, loop_end):
        loop_update = loop_update.then(trace[t].update)
    out_tail = loop_update.image(sst.out)[1:]  # image is out · tail

    # Decide unboundedness of out on the emptiness abstraction of the loop.
    nonempty = frozenset(r for r, v in valuation.items() if v)
    seen_vectors = {nonempty: 0}
    vectors = [nonempty]
    while True:
        nxt = _nonempty_after(loop_update, vectors[-1], sst.registers)
        if nxt in seen_vectors:
            cycle_from = seen_vectors[nxt]
            break
        seen_vectors[nxt] = len(vectors)
        vectors.append(nxt)
    gains = [
        any(kind == "sym" or value in vec for kind, value in out_tail) for vec in vectors
    ]
    unbounded = any(gains[cycle_from:])

    # Registers feeding out, closed under the loop update's own flow; their
    # contents evolve autonomously, so a literal repeat proves the appended
    # blocks periodic forever.
    feeding = {value for kind, value in out_tail if kind == "reg"}
    while True:
        grown = set(feeding)
        for r in feeding:
            grown.update(v for kind, v in loop_update.image(r) if kind == "reg")
        if grown == feeding:
            break
        feeding = grown
    others = tuple(r for r in sst.registers if r in feeding and r != sst.out)
    if not unbounded:
        # Out stabilizes once the emptiness vector enters its cycle.
        settle = len(vectors) + 1
        for _ in range(settle):
            valuation = loop_update.apply(valuation)
        return RunOutcome(
            ACCEPTED_FINITE,
            output_prefix=valuation[sst.out][: budget.max_output],
            min_colors=mins,
            steps=loop_end,
        )

    # Try for an exact lasso: literal repetition of the non-out contents
    # across loop iterations makes the appended blocks periodic forever.
    seen_contents: dict[tuple, int] = {tuple(valuation[r] for r in others): 0}
    boundary_outputs = [valuation[sst.out]]
    max_iters = max(2 ** len(sst.registers) + 4, 16)
    it = 0
    while it < max_iters:
        valuation = loop_update.apply(valuation)
        it += 1
        boundary_outputs.append(valuation[sst.out])
        key = tuple(valuation[r] for r in others)
        if key in seen_contents:
            j1 = seen_contents[key]
            prefix = boundary_outputs[j1]
            block = boundary_outputs[it][len(prefix):]
            lasso = lasso_canonicalize(LassoWord(prefix, block))
            shown = min(budget.max_output, max(2000, len(prefix) + len(block)))
            return RunOutcome(
                ACCEPTED,
                output=lasso,
                output_prefix=lasso.unroll(shown),
                min_colors=mins,
                steps=loop_end,
            )
        seen_contents[key] = it
        if sum(len(valuation[r]) for r in sst.registers) > budget.max_output:
            break
    # Certified prefix only; iterate further so comparisons have enough
    # letters to be meaningful, without chasing the whole output budget.
    target = min(budget.max_output, max(5 * MIN_PREFIX_COMPARE, 2000))
    hard_cap = it + 4 * target
    while len(valuation[sst.out]) < target and it < hard_cap:
        valuation = loop_update.apply(valuation)
        it += 1
    return RunOutcome(
        ACCEPTED,
        output=None,
        output_prefix=valuation[sst.out][: budget.max_output],
        prefix_only=True,
        min_colors=mins,
        steps=loop_end,
    )


# ---------------------------------------------------------------------------
# Equivalence on lasso batches


def eval_machine(machine, w: LassoWord, budget: Optional[EvalBudget] = None) -> RunOutcome:
    """Dispatch on the machine kind."""
    if isinstance(machine, CopylessParitySST):
        return eval_sst(machine, w, budget)
    if machine.is_one_way():
        return eval_one_way(machine, w)
    return eval_two_way(machine, w, budget)


@dataclass
class EquivReport:
    checked: int = 0
    passed: int = 0
    disagreements: list[tuple[LassoWord, str]] = field(default_factory=list)
    inconclusive: list[tuple[LassoWord, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def summary(self) -> str:
        return (
            f"checked={self.checked} passed={self.passed} "
            f"disagreements={len(self.disagreements)} inconclusive={len(self.inconclusive)}"
        )


MIN_PREFIX_COMPARE = 1000


def _compare_outputs(o1: RunOutcome, o2: RunOutcome):
    """None when outputs agree, 'inconclusive:...' or a disagreement string."""
    if not o1.prefix_only and not o2.prefix_only:
        if lasso_equal(o1.output, o2.output):
            return None
        return f"outputs differ: {o1.output} vs {o2.output}"
    n = min(
        len(o1.output_prefix) if o1.prefix_only else MIN_PREFIX_COMPARE + len(o1.output_prefix),
        len(o2.output_prefix) if o2.prefix_only else MIN_PREFIX_COMPARE + len(o2.output_prefix),
    )
    p1 = o1.output_prefix[:n] if o1.prefix_only else o1.output.unroll(n)
    p2 = o2.output_prefix[:n] if o2.prefix_only else o2.output.unroll(n)
    if n < MIN_PREFIX_COMPARE:
        return "inconclusive:prefix too short to certify"
    if p1 != p2:
        return f"output prefixes differ at length {n}"
    return None


def equiv_on_lassos(
    m1,
    m2,
    lassos: Iterable[LassoWord],
    budget: Optional[EvalBudget] = None,
    require_class: bool = False,
) -> EquivReport:
    """Compare the two machines' domains and outputs on each lasso.

    The domain is the transducer domain (accepted with infinite output);
    machines agreeing there must produce equal outputs.  With
    ``require_class`` the finer verdict class must match too, i.e. accepted
    runs with finite output may not become rejections; meaningful between
    machines sharing an acceptance mechanism, but wrong across a fold that
    trades the acceptance condition for output finiteness.

    Budget exhaustion on either side marks the lasso inconclusive, never a
    pass; prefix-only outputs are compared up to the shorter certified
    prefix and require at least MIN_PREFIX_COMPARE letters.
    """
    budget = budget or default_budget()
    report = EquivReport()
    for w in lassos:
        report.checked += 1
        o1 = eval_machine(m1, w, budget)
        o2 = eval_machine(m2, w, budget)
        c1, c2 = o1.domain_class(), o2.domain_class()
        if "inconclusive" in (c1, c2):
            report.inconclusive.append((w, "budget exceeded"))
            continue
        if (c1 == "inf") != (c2 == "inf"):
            report.disagreements.append((w, f"domains differ: {c1} vs {c2}"))
            continue
        if require_class and c1 != c2:
            report.disagreements.append((w, f"verdict classes differ: {c1} vs {c2}"))
            continue
        if c1 == "inf":
            diff = _compare_outputs(o1, o2)
            if diff is None:
                report.passed += 1
            elif diff.startswith("inconclusive:"):
                report.inconclusive.append((w, diff.split(":", 1)[1]))
            else:
                report.disagreements.append((w, diff))
        else:
            report.passed += 1
    return report
