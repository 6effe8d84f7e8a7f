"""Matplotlib renderings for the report path: state-space map and belief tables."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Circle, Rectangle

from .interpretation import BeliefMap
from .machines import CoupledSystem
from .sets import StateSet

GOOD_EDGE = "#1f5fbf"
FILL = "#9ecae1"


def render_state_space(
    system: CoupledSystem,
    good: StateSet | None,
    regulating: StateSet | None,
    path,
) -> None:
    """Draw the joint state space as a grid with one arrow per transition.

    Good-set cells get a heavy outline, regulating-set cells a fill, matching
    the DOT export conventions.
    """
    nx, ny = len(system.agent.states), len(system.environment.states)
    fig, ax = plt.subplots(figsize=(1.6 * nx + 2.0, 1.6 * ny + 1.5))
    for w in range(system.n_joint):
        x, y = system.joint_state(w)
        filled = regulating is not None and w in regulating
        outlined = good is not None and w in good
        ax.add_patch(
            Rectangle(
                (x - 0.42, y - 0.42),
                0.84,
                0.84,
                facecolor=FILL if filled else "white",
                edgecolor=GOOD_EDGE if outlined else "#999999",
                linewidth=2.5 if outlined else 1.0,
            )
        )
        xl, yl = system.joint_labels(w)
        ax.text(x, y - 0.30, f"{xl},{yl}", ha="center", va="center", fontsize=9)
    for w in range(system.n_joint):
        x, y = system.joint_state(w)
        tx, ty = system.joint_state(system.step_table[w])
        if (tx, ty) == (x, y):
            ax.add_patch(
                Circle((x + 0.28, y + 0.28), 0.10, fill=False, color="#444444")
            )
            continue
        ax.annotate(
            "",
            xy=(tx, ty),
            xytext=(x, y),
            arrowprops=dict(
                arrowstyle="->", color="#444444", shrinkA=14, shrinkB=14,
                connectionstyle="arc3,rad=0.12",
            ),
        )
    ax.set_xlim(-0.7, nx - 0.3)
    ax.set_ylim(-0.7, ny - 0.3)
    ax.set_xticks(range(nx), system.agent.states)
    ax.set_yticks(range(ny), system.environment.states)
    ax.set_xlabel("agent state")
    ax.set_ylabel("environment state")
    ax.set_title("coupled dynamics (outline: good set, fill: regulating set)")
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _membership_matrix(bmap: BeliefMap) -> list[list[int]]:
    return [
        [1 if z in bmap[x] else 0 for z in range(bmap.model_size)]
        for x in range(bmap.agent_size)
    ]


def render_belief_maps(
    agent_labels: tuple[str, ...],
    model_labels: tuple[str, ...],
    psi: BeliefMap,
    phi: BeliefMap,
    path,
) -> None:
    """Side-by-side membership matrices of the belief and normative maps."""
    fig, axes = plt.subplots(
        1, 2, figsize=(1.2 * len(model_labels) + 4.0, 0.7 * len(agent_labels) + 2.0)
    )
    for ax, bmap, title in (
        (axes[0], psi, "belief map"),
        (axes[1], phi, "normative map"),
    ):
        ax.imshow(
            _membership_matrix(bmap), cmap="Blues", vmin=0, vmax=1, aspect="auto"
        )
        ax.set_xticks(range(len(model_labels)), model_labels)
        ax.set_yticks(range(len(agent_labels)), agent_labels)
        ax.set_xlabel("environment state")
        ax.set_title(title)
    axes[0].set_ylabel("agent state")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
