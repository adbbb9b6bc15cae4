"""From copyless register machines back to reversible two-way transducers.

Two machines in series do the job: a one-way transducer that re-emits each
input letter as the whole substitution it triggers, and a reversible walker
over that substitution stream which reconstructs the out register's content
by following where register contents flow.  Making the first machine
reversible and composing yields the result.
"""

from __future__ import annotations

from .compose import compose
from .machines import (
    LEFT_END,
    CopylessParitySST,
    State,
    Substitution,
    Transition,
    TwoWayParityTransducer,
    prune_unreachable,
    validate_sst,
)
from .oneway import one_way_to_reversible


class InvalidSst(ValueError):
    pass


def substitution_alphabet(sst: CopylessParitySST) -> tuple[Substitution, ...]:
    """Distinct updates in transition declaration order; the intermediate
    alphabet is exactly the substitutions the machine actually uses."""
    seen: dict[Substitution, None] = {}
    for tr in sst.transitions.values():
        seen.setdefault(tr.update, None)
    return tuple(seen)


def sst_to_substitution_stream(sst: CopylessParitySST) -> TwoWayParityTransducer:
    """Same automaton as the register machine, each transition emitting its
    own update as a single letter of the substitution alphabet."""
    problems = validate_sst(sst)
    if problems:
        raise InvalidSst("; ".join(problems))
    transitions = {
        key: Transition(tr.target, (tr.update,), tr.colors)
        for key, tr in sst.transitions.items()
    }
    return TwoWayParityTransducer(
        input_alphabet=sst.input_alphabet,
        output_alphabet=substitution_alphabet(sst),
        states=sst.states,
        initial=sst.initial,
        transitions=transitions,
        k=sst.k,
        ell=sst.ell,
    )


def _occurrence(update: Substitution, register: str):
    """Where ``register`` occurs across the images: (holder, index) or None.
    Copylessness makes the occurrence unique."""
    for holder, img in update.images:
        for i, (kind, value) in enumerate(img):
            if kind == "reg" and value == register:
                return holder, img, i
    return None


def build_register_walker(sst: CopylessParitySST) -> TwoWayParityTransducer:
    """Reversible two-way transducer over the substitution stream producing
    the out register's content.

    State (r, fetch) walks backward to compute r's content; (r, done) walks
    forward having just produced it.  The endmarker behaves as the
    substitution mapping every register to the empty word, so a fetch
    bouncing off it simply yields nothing.  The walker needs no acceptance
    condition of its own.
    """
    problems = validate_sst(sst)
    if problems:
        raise InvalidSst("; ".join(problems))
    alphabet = substitution_alphabet(sst)
    fetch = {r: State(f"{r}.fetch", False) for r in sst.registers}
    done = {r: State(f"{r}.done", True) for r in sst.registers}
    transitions: dict = {}
    for r in sst.registers:
        transitions[(fetch[r], LEFT_END)] = Transition(done[r], (), ())
        for sigma in alphabet:
            img = sigma.image(r)
            first_reg = next((i for i, tok in enumerate(img) if tok[0] == "reg"), None)
            if first_reg is None:
                word = tuple(v for _, v in img)
                transitions[(fetch[r], sigma)] = Transition(done[r], word, ())
            else:
                word = tuple(v for _, v in img[:first_reg])
                succ = img[first_reg][1]
                transitions[(fetch[r], sigma)] = Transition(fetch[succ], word, ())
        for sigma in alphabet:
            occ = _occurrence(sigma, r)
            if occ is None:
                continue  # register dropped: the walk stops and rejects
            holder, img, i = occ
            next_reg = next(
                (j for j in range(i + 1, len(img)) if img[j][0] == "reg"), None
            )
            if next_reg is None:
                word = tuple(v for _, v in img[i + 1 :])
                transitions[(done[r], sigma)] = Transition(done[holder], word, ())
            else:
                word = tuple(v for _, v in img[i + 1 : next_reg])
                succ = img[next_reg][1]
                transitions[(done[r], sigma)] = Transition(fetch[succ], word, ())
    states = tuple(done[r] for r in sst.registers) + tuple(fetch[r] for r in sst.registers)
    return TwoWayParityTransducer(
        input_alphabet=alphabet,
        output_alphabet=sst.output_alphabet,
        states=states,
        initial=done[sst.out],
        transitions=transitions,
        k=0,
        ell=1,
    )


def sst_to_reversible(sst: CopylessParitySST) -> TwoWayParityTransducer:
    """Reversible two-way transducer computing the register machine's
    function, pruned to reachable states; keeps the machine's colorings."""
    stream = one_way_to_reversible(sst_to_substitution_stream(sst))
    walker = build_register_walker(sst)
    return prune_unreachable(compose(stream, walker))
