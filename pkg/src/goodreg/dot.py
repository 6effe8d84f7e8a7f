"""DOT export of the coupled transition graph.

One node per joint state labeled "agent-label,env-label", one edge per
transition, emitted x-major so the output is byte-stable.  Nodes inside the
good set get a double outline; nodes inside the regulating set are filled.
"""

from __future__ import annotations

from .machines import CoupledSystem
from .sets import StateSet


def _quote(s: str) -> str:
    return '"{}"'.format(s.replace('"', r"\""))


def export_dot(
    system: CoupledSystem,
    good: StateSet | None = None,
    regulating: StateSet | None = None,
) -> str:
    lines = ["digraph coupled_system {", "  rankdir=LR;"]
    for w in range(system.n_joint):
        xl, yl = system.joint_labels(w)
        name = _quote(f"{xl},{yl}")
        attrs = []
        if good is not None and w in good:
            attrs.append("peripheries=2")
        if regulating is not None and w in regulating:
            attrs.append("style=filled")
            attrs.append("fillcolor=lightgrey")
        if attrs:
            lines.append(f"  {name} [{', '.join(attrs)}];")
        else:
            lines.append(f"  {name};")
    for w in range(system.n_joint):
        xl, yl = system.joint_labels(w)
        tx, ty = system.joint_labels(system.step_table[w])
        lines.append(f"  {_quote(f'{xl},{yl}')} -> {_quote(f'{tx},{ty}')};")
    lines.append("}")
    return "\n".join(lines) + "\n"
