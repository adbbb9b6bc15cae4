"""Machine data model and structural validators.

Letters are ordinary hashable values; in practice they are one-character
strings, except for the substitution-stream machines where whole
substitutions act as letters.  The reserved left endmarker ``LEFT_END``
lives outside every alphabet: transitions keyed on it must go from a
backward state to a forward state and never move the head.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Hashable, Iterable, Mapping

# Reserved endmarker token; rejected by the loader as an alphabet letter.
LEFT_END = "$lend"

Letter = Hashable


@dataclass(frozen=True, slots=True)
class State:
    """A control state with a head-direction polarity."""

    name: str
    forward: bool

    def __repr__(self) -> str:
        return f"{self.name}{'+' if self.forward else '-'}"


@dataclass(frozen=True, slots=True)
class Transition:
    target: State
    output: tuple[str, ...]
    colors: tuple[int, ...]


@dataclass(frozen=True)
class TwoWayParityTransducer:
    """Deterministic two-way transducer with a conjunction of parity conditions.

    Determinism is representational: ``transitions`` is keyed by
    (state, letter).  ``k`` coloring functions assign each transition a
    color vector of naturals below ``ell``; a run is accepting when it
    reads the whole word and, for every coloring index, the minimum color
    among transitions taken infinitely often is even.  Machines with
    ``k == 0`` accept exactly the whole-word-reading runs.

    Instances are immutable after construction and safe to share.
    """

    input_alphabet: tuple[Letter, ...]
    output_alphabet: tuple[str, ...]
    states: tuple[State, ...]
    initial: State
    transitions: dict[tuple[State, Letter], Transition]
    k: int
    ell: int

    def is_one_way(self) -> bool:
        return all(s.forward for s in self.states)

    def state_index(self) -> dict[State, int]:
        return {s: i for i, s in enumerate(self.states)}


# A one-way machine is a two-way machine with no backward states and no
# endmarker transitions; see validate_one_way.
OneWayParityTransducer = TwoWayParityTransducer


# ---------------------------------------------------------------------------
# Substitutions and copyless register machines


Token = tuple[str, str]  # ("reg", register-name) or ("sym", output-letter)


def reg(name: str) -> Token:
    return ("reg", name)


def sym(letter: str) -> Token:
    return ("sym", letter)


@dataclass(frozen=True)
class Substitution:
    """Register update mapping each register to a word over registers and letters.

    Stored as a sorted tuple of (register, image) pairs so that values are
    hashable; this lets whole substitutions serve as input letters for the
    register-walking machines.
    """

    images: tuple[tuple[str, tuple[Token, ...]], ...]

    @classmethod
    def from_dict(cls, images: Mapping[str, Iterable[Token]]) -> "Substitution":
        return cls(tuple(sorted((r, tuple(img)) for r, img in images.items())))

    def image(self, register: str) -> tuple[Token, ...]:
        for r, img in self.images:
            if r == register:
                return img
        return ()

    def registers(self) -> tuple[str, ...]:
        return tuple(r for r, _ in self.images)

    def is_copyless(self) -> bool:
        seen: set[str] = set()
        for _, img in self.images:
            for kind, value in img:
                if kind == "reg":
                    if value in seen:
                        return False
                    seen.add(value)
        return True

    def apply(self, valuation: Mapping[str, tuple[str, ...]]) -> dict[str, tuple[str, ...]]:
        """New register contents after applying this update to ``valuation``."""
        new: dict[str, tuple[str, ...]] = {}
        for r, img in self.images:
            parts: list[str] = []
            for kind, value in img:
                if kind == "reg":
                    parts.extend(valuation.get(value, ()))
                else:
                    parts.append(value)
            new[r] = tuple(parts)
        return new

    def then(self, later: "Substitution") -> "Substitution":
        """Sequential composition: apply ``self`` first, then ``later``."""
        images = {}
        for r, img in later.images:
            expanded: list[Token] = []
            for kind, value in img:
                if kind == "reg":
                    expanded.extend(self.image(value))
                else:
                    expanded.append((kind, value))
            images[r] = tuple(expanded)
        return Substitution.from_dict(images)

    def display(self) -> str:
        parts = []
        for r, img in self.images:
            body = "".join(v if kind == "sym" else f"<{v}>" for kind, v in img)
            parts.append(f"{r}:={body or 'ε'}")
        return "{" + ", ".join(parts) + "}"

    def __repr__(self) -> str:
        return self.display()


@dataclass(frozen=True, slots=True)
class SstTransition:
    target: State
    update: Substitution
    colors: tuple[int, ...]


@dataclass(frozen=True)
class CopylessParitySST:
    """One-way parity automaton with copyless register updates.

    The distinguished ``out`` register may only grow: every update's image
    of ``out`` starts with ``out`` itself, so its contents form a weakly
    increasing word sequence whose limit is the machine's output.
    """

    input_alphabet: tuple[Letter, ...]
    output_alphabet: tuple[str, ...]
    states: tuple[State, ...]
    initial: State
    transitions: dict[tuple[State, Letter], SstTransition]
    registers: tuple[str, ...]
    out: str
    k: int
    ell: int

    def state_index(self) -> dict[State, int]:
        return {s: i for i, s in enumerate(self.states)}


# ---------------------------------------------------------------------------
# Validators


def _transition_triples(machine_or_triples):
    if isinstance(machine_or_triples, (TwoWayParityTransducer, CopylessParitySST)):
        return [(src, letter, t.target) for (src, letter), t in machine_or_triples.transitions.items()]
    return list(machine_or_triples)


def validate_deterministic(machine_or_triples) -> bool:
    """True iff no (source, letter) pair has two distinct targets.

    Accepts a machine (where the map representation makes this hold by
    construction) or raw (source, letter, target) triples as found in a
    document before loading.
    """
    seen: dict[tuple, object] = {}
    for src, letter, tgt in _transition_triples(machine_or_triples):
        key = (src, letter)
        if key in seen and seen[key] != tgt:
            return False
        seen[key] = tgt
    return True


def validate_codeterministic(machine_or_triples) -> bool:
    """True iff no (letter, target) pair has two distinct sources."""
    seen: dict[tuple, object] = {}
    for src, letter, tgt in _transition_triples(machine_or_triples):
        key = (letter, tgt)
        if key in seen and seen[key] != src:
            return False
        seen[key] = src
    return True


def validate_reversible(machine_or_triples) -> bool:
    return validate_deterministic(machine_or_triples) and validate_codeterministic(machine_or_triples)


def validate_one_way(machine: TwoWayParityTransducer) -> bool:
    if not machine.is_one_way():
        return False
    return all(letter != LEFT_END for (_, letter) in machine.transitions)


def validate_sst(sst: CopylessParitySST) -> list[str]:
    """Empty iff every update is copyless and respects the out discipline."""
    violations = []
    for (src, letter), tr in sorted(sst.transitions.items(), key=lambda kv: (kv[0][0].name, str(kv[0][1]))):
        where = f"({src.name}, {letter!r})"
        if not tr.update.is_copyless():
            violations.append(f"{where}: update is not copyless")
        out_img = tr.update.image(sst.out)
        if not out_img or out_img[0] != ("reg", sst.out):
            violations.append(f"{where}: image of {sst.out!r} must start with {sst.out!r}")
        else:
            for kind, value in out_img[1:]:
                if kind == "reg" and value == sst.out:
                    violations.append(f"{where}: {sst.out!r} appears twice in its own image")
        for r, img in tr.update.images:
            if r != sst.out and ("reg", sst.out) in img:
                violations.append(f"{where}: {sst.out!r} appears in the image of {r!r}")
    return violations


def validate_machine(machine: TwoWayParityTransducer) -> list[str]:
    """Structural well-formedness check; empty list means valid."""
    problems = []
    states = set(machine.states)
    names = [s.name for s in machine.states]
    if len(set(names)) != len(names):
        problems.append("state names are not unique")
    if machine.initial not in states:
        problems.append("initial state not declared")
    elif not machine.initial.forward:
        problems.append("initial state must be forward")
    alphabet = set(machine.input_alphabet)
    if LEFT_END in alphabet or LEFT_END in set(machine.output_alphabet):
        problems.append("the endmarker is reserved and cannot be an alphabet letter")
    if not machine.input_alphabet:
        problems.append("input alphabet is empty")
    for (src, letter), tr in machine.transitions.items():
        where = f"({src.name}, {letter!r})"
        if src not in states:
            problems.append(f"{where}: unknown source state")
        if tr.target not in states:
            problems.append(f"{where}: unknown target state")
        if letter == LEFT_END:
            if src.forward:
                problems.append(f"{where}: endmarker transitions need a backward source")
            if not tr.target.forward:
                problems.append(f"{where}: endmarker transitions need a forward target")
        elif letter not in alphabet:
            problems.append(f"{where}: letter not in the input alphabet")
        for b in tr.output:
            if b not in machine.output_alphabet:
                problems.append(f"{where}: output letter {b!r} not in the output alphabet")
        if len(tr.colors) != machine.k:
            problems.append(f"{where}: expected {machine.k} colors, got {len(tr.colors)}")
        if any(c < 0 or c >= machine.ell for c in tr.colors):
            problems.append(f"{where}: colors must lie below {machine.ell}")
    return problems


def validate_sst_machine(sst: CopylessParitySST) -> list[str]:
    """Structural check for register machines, including validate_sst."""
    problems = []
    states = set(sst.states)
    names = [s.name for s in sst.states]
    if len(set(names)) != len(names):
        problems.append("state names are not unique")
    if any(not s.forward for s in sst.states):
        problems.append("register machines are one-way: all states must be forward")
    if sst.initial not in states:
        problems.append("initial state not declared")
    if len(set(sst.registers)) != len(sst.registers):
        problems.append("register names are not unique")
    if sst.out not in sst.registers:
        problems.append("the out register is not declared")
    alphabet = set(sst.input_alphabet)
    if LEFT_END in alphabet:
        problems.append("the endmarker is reserved and cannot be an alphabet letter")
    regs = set(sst.registers)
    for (src, letter), tr in sst.transitions.items():
        where = f"({src.name}, {letter!r})"
        if src not in states or tr.target not in states:
            problems.append(f"{where}: unknown state")
        if letter == LEFT_END:
            problems.append(f"{where}: register machines cannot read the endmarker")
        elif letter not in alphabet:
            problems.append(f"{where}: letter not in the input alphabet")
        for r, img in tr.update.images:
            if r not in regs:
                problems.append(f"{where}: update writes unknown register {r!r}")
            for kind, value in img:
                if kind == "reg" and value not in regs:
                    problems.append(f"{where}: update reads unknown register {value!r}")
                if kind == "sym" and value not in sst.output_alphabet:
                    problems.append(f"{where}: output letter {value!r} not in the output alphabet")
        if len(tr.colors) != sst.k:
            problems.append(f"{where}: expected {sst.k} colors, got {len(tr.colors)}")
        if any(c < 0 or c >= sst.ell for c in tr.colors):
            problems.append(f"{where}: colors must lie below {sst.ell}")
    problems.extend(validate_sst(sst))
    return problems


# ---------------------------------------------------------------------------
# Shared helpers used by the constructions


def odd_sentinels(machine: TwoWayParityTransducer) -> tuple[int, ...]:
    """Per-coloring odd value exceeding every color the machine uses.

    Used as the color of empty sub-runs when composing: an odd value above
    the whole used range can never masquerade as an accepting infinite
    minimum, and when it genuinely is the minimum the run deserves
    rejection.
    """
    sentinels = []
    for i in range(machine.k):
        used = max((t.colors[i] for t in machine.transitions.values()), default=0)
        sentinels.append(used if used % 2 == 1 else used + 1)
    return tuple(sentinels)


def max_colors(machine: TwoWayParityTransducer) -> tuple[int, ...]:
    """Per-coloring maximum over all transitions (0 when unused)."""
    return tuple(
        max((t.colors[i] for t in machine.transitions.values()), default=0)
        for i in range(machine.k)
    )


def drop_left_end_into_initial(machine: TwoWayParityTransducer) -> TwoWayParityTransducer:
    """Remove endmarker transitions targeting the initial state.

    Any run using such a transition revisits the initial configuration and
    therefore loops without reading the whole word, so removal preserves
    the recognized function.  The constructions rely on the initial
    configuration having no predecessor.
    """
    doomed = [
        key
        for key, tr in machine.transitions.items()
        if key[1] == LEFT_END and tr.target == machine.initial
    ]
    if not doomed:
        return machine
    transitions = {k: v for k, v in machine.transitions.items() if k not in doomed}
    return replace(machine, transitions=transitions)


def prune_unreachable(machine: TwoWayParityTransducer) -> TwoWayParityTransducer:
    """Restrict to states reachable from the initial state in the transition graph."""
    succ: dict[State, list[State]] = {}
    for (src, _), tr in machine.transitions.items():
        succ.setdefault(src, []).append(tr.target)
    reached = {machine.initial}
    frontier = [machine.initial]
    while frontier:
        s = frontier.pop()
        for t in succ.get(s, ()):
            if t not in reached:
                reached.add(t)
                frontier.append(t)
    states = tuple(s for s in machine.states if s in reached)
    transitions = {
        (src, letter): tr
        for (src, letter), tr in machine.transitions.items()
        if src in reached and tr.target in reached
    }
    return replace(machine, states=states, transitions=transitions)


def unique_names(names: Iterable[str]) -> list[str]:
    """Disambiguate duplicates by appending ~2, ~3, ... suffixes."""
    seen: dict[str, int] = {}
    result = []
    for name in names:
        if name not in seen:
            seen[name] = 1
            result.append(name)
        else:
            seen[name] += 1
            candidate = f"{name}~{seen[name]}"
            while candidate in seen:
                seen[name] += 1
                candidate = f"{name}~{seen[name]}"
            seen[candidate] = 1
            result.append(candidate)
    return result
