"""Graphviz DOT rendering of machines.

Forward states are circles, backward states boxes; edge labels read
``letter|output : colors`` with the endmarker shown as a turnstile and the
empty word as epsilon.
"""

from __future__ import annotations

from .machines import LEFT_END, CopylessParitySST


def _letter(a) -> str:
    if a == LEFT_END:
        return "⊢"
    return str(a)


def _word(w: tuple[str, ...]) -> str:
    return "".join(w) if w else "ε"


def _esc(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def machine_to_dot(machine) -> str:
    lines = ["digraph machine {", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for s in machine.states:
        shape = "circle" if s.forward else "box"
        lines.append(f'  "{_esc(s.name)}" [shape={shape}];')
    lines.append(f'  __start -> "{_esc(machine.initial.name)}";')
    order = {s: i for i, s in enumerate(machine.states)}
    entries = sorted(machine.transitions.items(), key=lambda kv: (order[kv[0][0]], str(kv[0][1])))
    is_sst = isinstance(machine, CopylessParitySST)
    for (src, letter), tr in entries:
        colors = ",".join(str(c) for c in tr.colors)
        if is_sst:
            body = tr.update.display()
            label = f"{_letter(letter)} {body}"
        else:
            label = f"{_letter(letter)}|{_word(tr.output)}"
        if colors:
            label += f" : {colors}"
        lines.append(f'  "{_esc(src.name)}" -> "{_esc(tr.target.name)}" [label="{_esc(label)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
