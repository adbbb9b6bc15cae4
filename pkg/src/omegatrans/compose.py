"""Product composition of reversible two-way transducers.

The composed machine drives the first machine to feed a simulation of the
second: when the second machine moves forward over its input (the first
machine's production), the first machine is simulated forward; when it
moves backward, the first machine's run is rewound co-deterministically.
Each composed transition consumes one transition of the first machine and
runs the second machine across that transition's finite production.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .machines import (
    LEFT_END,
    State,
    Transition,
    TwoWayParityTransducer,
    drop_left_end_into_initial,
    odd_sentinels,
    unique_names,
    validate_reversible,
)

LOOPING = "looping"
STUCK = "stuck"


class AlphabetMismatch(ValueError):
    pass


class NotReversible(ValueError):
    pass


@dataclass(frozen=True)
class FiniteRunSummary:
    """Result of running a two-way machine across a finite word.

    ``exit`` is the state in which the head leaves the word (forward exits
    right, backward exits left), or LOOPING / STUCK.  ``min_colors`` is the
    per-coloring minimum over the transitions taken; the empty run carries
    the machine's odd sentinel so it can never pose as an accepting
    infinite minimum.
    """

    exit: Union[State, str]
    production: tuple[str, ...] = ()
    min_colors: tuple[int, ...] = ()


def run_on_finite(
    machine: TwoWayParityTransducer,
    word: tuple[str, ...],
    entry: State,
    sentinels: Optional[tuple[int, ...]] = None,
) -> FiniteRunSummary:
    """Maximal run of ``machine`` inside ``word`` from ``entry``.

    A forward entry state walks in from the left end, a backward one from
    the right end.  The word floats in the middle of a larger input, so
    there is no endmarker: leaving either end terminates the run.
    """
    if sentinels is None:
        sentinels = odd_sentinels(machine)
    state = entry
    pos = 0 if entry.forward else len(word)
    production: list[str] = []
    mins = list(sentinels)
    visited = set()
    while True:
        if state.forward and pos == len(word):
            return FiniteRunSummary(state, tuple(production), tuple(mins))
        if not state.forward and pos == 0:
            return FiniteRunSummary(state, tuple(production), tuple(mins))
        if (state, pos) in visited:
            return FiniteRunSummary(LOOPING)
        visited.add((state, pos))
        letter = word[pos] if state.forward else word[pos - 1]
        tr = machine.transitions.get((state, letter))
        if tr is None:
            return FiniteRunSummary(STUCK)
        production.extend(tr.output)
        mins = [min(m, c) for m, c in zip(mins, tr.colors)]
        if state.forward:
            pos = pos + 1 if tr.target.forward else pos
        else:
            pos = pos if tr.target.forward else pos - 1
        state = tr.target


def _pair_polarity(q: State, p: State) -> bool:
    return q.forward == p.forward


def compose(
    first: TwoWayParityTransducer, second: TwoWayParityTransducer
) -> TwoWayParityTransducer:
    """Composition running ``first`` and piping its output into ``second``.

    Both machines must be reversible and second's input alphabet must match
    first's output alphabet.  The result has exactly |Q|·|P| states (junk
    pairs included; prune separately if wanted), k1 + k2 colorings, and is
    itself reversible.
    """
    if set(first.output_alphabet) != set(second.input_alphabet):
        raise AlphabetMismatch(
            "first machine's output alphabet must equal second machine's input alphabet"
        )
    if not validate_reversible(first):
        raise NotReversible("first machine is not reversible")
    if not validate_reversible(second):
        raise NotReversible("second machine is not reversible")
    first = drop_left_end_into_initial(first)
    second = drop_left_end_into_initial(second)

    first_sentinels = odd_sentinels(first)
    second_sentinels = odd_sentinels(second)
    # Co-deterministic predecessor lookup for rewinding the first machine.
    predecessor: dict[tuple[str, State], tuple[State, Transition]] = {}
    for (src, letter), tr in first.transitions.items():
        predecessor[(letter, tr.target)] = (src, tr)

    names = unique_names(f"{q.name}.{p.name}" for q in first.states for p in second.states)
    pair_state: dict[tuple[State, State], State] = {}
    it = iter(names)
    for q in first.states:
        for p in second.states:
            pair_state[(q, p)] = State(next(it), _pair_polarity(q, p))

    letters = tuple(first.input_alphabet) + (LEFT_END,)
    transitions: dict = {}
    for (q, p), src in pair_state.items():
        for a in letters:
            if a == LEFT_END and src.forward:
                continue  # the endmarker is read by backward states only
            built = _compose_transition(
                first, second, q, p, a, pair_state, predecessor,
                first_sentinels, second_sentinels,
            )
            if built is not None:
                transitions[(src, a)] = built

    all_colors = [c for tr in transitions.values() for c in tr.colors]
    ell = 1 + max(all_colors) if all_colors else 1
    return TwoWayParityTransducer(
        input_alphabet=first.input_alphabet,
        output_alphabet=second.output_alphabet,
        states=tuple(pair_state[(q, p)] for q in first.states for p in second.states),
        initial=pair_state[(first.initial, second.initial)],
        transitions=transitions,
        k=first.k + second.k,
        ell=ell,
    )


def _compose_transition(
    first, second, q, p, a, pair_state, predecessor, first_sentinels, second_sentinels
):
    if p.forward:
        tr1 = first.transitions.get((q, a))
        if tr1 is None:
            return None
        summary = run_on_finite(second, tr1.output, p, second_sentinels)
        if not isinstance(summary.exit, State):
            return None
        p2 = summary.exit
        target = pair_state[(tr1.target, p2)] if p2.forward else pair_state[(q, p2)]
        return Transition(target, summary.production, tr1.colors + summary.min_colors)

    # Second machine walks backward: consume the production of the first
    # machine's transition arriving at q, found co-deterministically.
    if a == LEFT_END and q == first.initial:
        # The first machine's run is fully rewound; the second machine reads
        # its own (virtual) endmarker at the start of the production stream.
        tr2 = second.transitions.get((p, LEFT_END))
        if tr2 is None:
            return None
        target = pair_state[(q, tr2.target)]
        return Transition(target, tr2.output, first_sentinels + tr2.colors)
    pred = predecessor.get((a, q))
    if pred is None:
        return None
    q_prev, tr1 = pred
    summary = run_on_finite(second, tr1.output, p, second_sentinels)
    if not isinstance(summary.exit, State):
        return None
    p2 = summary.exit
    target = pair_state[(q, p2)] if p2.forward else pair_state[(q_prev, p2)]
    return Transition(target, summary.production, tr1.colors + summary.min_colors)
