"""Good sets, regulating sets, and greatest-fixpoint synthesis.

A subset of the joint state space is forward-closed when the joint update
never leaves it.  A regulating set is a non-empty forward-closed subset of
the good set; exhibiting one makes the agent a good regulator.  The maximal
forward-closed subset of the good set is unique (forward-closed sets are
closed under union), so "the largest regulating set" is well defined and can
be computed by iteratively pruning states whose successor escapes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .machines import CoupledSystem
from .sets import StateSet

# 2^16 candidate subsets keep the exhaustive oracle well under a second.
MAX_ORACLE_UNIVERSE = 16


class UniverseTooLargeError(ValueError):
    """Raised when the exhaustive-enumeration oracle is asked for too large a space."""


@dataclass(frozen=True)
class RegulationSituation:
    """A coupled system together with the good set an observer imposes on it."""

    system: CoupledSystem
    good: StateSet

    def __post_init__(self) -> None:
        if self.good.size != self.system.n_joint:
            raise ValueError(
                f"good set sized {self.good.size} for a joint space of"
                f" {self.system.n_joint} states"
            )


def _check_joint_sized(system: CoupledSystem, subset: StateSet, name: str) -> None:
    if subset.size != system.n_joint:
        raise ValueError(
            f"{name} sized {subset.size} for a joint space of {system.n_joint} states"
        )


def is_forward_closed(system: CoupledSystem, subset: StateSet) -> bool:
    """True iff the joint update maps every member of ``subset`` back into it."""
    _check_joint_sized(system, subset, "state set")
    bits = subset.bits
    table = system.step_table
    for w in subset:
        if not (bits >> table[w]) & 1:
            return False
    return True


def is_regulating_set(situation: RegulationSituation, candidate: StateSet) -> bool:
    """True iff ``candidate`` is non-empty, forward-closed, and inside the good set."""
    _check_joint_sized(situation.system, candidate, "candidate set")
    return (
        bool(candidate)
        and candidate.is_subset_of(situation.good)
        and is_forward_closed(situation.system, candidate)
    )


def _prune_to_fixpoint(system: CoupledSystem, good: StateSet) -> tuple[int, int]:
    """Greatest-fixpoint pruning; returns (stable bit pattern, sweep count).

    Starts from the good set and repeatedly discards every state whose
    successor lies outside the current candidate.  Each sweep either strictly
    shrinks the candidate or terminates the loop, so at most |joint space| + 1
    sweeps run.
    """
    table = system.step_table
    kept = good.bits
    sweeps = 0
    while True:
        sweeps += 1
        survivors = 0
        bits = kept
        while bits:
            low = bits & -bits
            w = low.bit_length() - 1
            bits ^= low
            if (kept >> table[w]) & 1:
                survivors |= low
        if survivors == kept:
            return kept, sweeps
        kept = survivors


def largest_regulating_set(situation: RegulationSituation) -> StateSet | None:
    """The unique maximal forward-closed subset of the good set, or None.

    Returns None exactly when no regulating set exists, keeping the
    non-emptiness requirement explicit in the API rather than encoding it as
    an empty set.
    """
    bits, _ = _prune_to_fixpoint(situation.system, situation.good)
    if bits == 0:
        return None
    return StateSet(situation.good.size, bits)


def is_good_regulator(situation: RegulationSituation) -> bool:
    """True iff some regulating set exists for this situation."""
    return largest_regulating_set(situation) is not None


def _resolve_goal(goal: StateSet | Iterable[int], n: int, kind: str) -> StateSet:
    if isinstance(goal, StateSet):
        if goal.size != n:
            raise ValueError(
                f"{kind} goal sized {goal.size} for a state space of {n} states"
            )
        return goal
    return StateSet.from_indices(n, goal)


def lift_environment_goal(
    env_goal: StateSet | Iterable[int], system: CoupledSystem
) -> StateSet:
    """Lift a goal over environment states to the joint space: all (x, y) with y in goal."""
    ny = len(system.environment.states)
    goal = _resolve_goal(env_goal, ny, "environment")
    bits = 0
    for y in goal:
        for x in range(len(system.agent.states)):
            bits |= 1 << (x * ny + y)
    return StateSet(system.n_joint, bits)


def lift_agent_goal(
    agent_goal: StateSet | Iterable[int], system: CoupledSystem
) -> StateSet:
    """Lift a goal over agent states to the joint space: all (x, y) with x in goal."""
    ny = len(system.environment.states)
    goal = _resolve_goal(agent_goal, len(system.agent.states), "agent")
    bits = 0
    for x in goal:
        for y in range(ny):
            bits |= 1 << (x * ny + y)
    return StateSet(system.n_joint, bits)


def enumerate_forward_closed_subsets(
    situation: RegulationSituation, cap: int = MAX_ORACLE_UNIVERSE
) -> list[StateSet]:
    """All forward-closed subsets of the good set, by brute force.

    Walks every one of the 2^|joint space| candidate subsets, keeps those
    inside the good set, and filters by the forward-closure definition.  This
    is the independent oracle the fixpoint synthesis is tested against; it is
    deliberately naive and refuses universes larger than ``cap``.
    """
    n = situation.system.n_joint
    if n > cap:
        raise UniverseTooLargeError(
            f"joint space of {n} states exceeds the enumeration cap of {cap}"
        )
    good_bits = situation.good.bits
    table = situation.system.step_table
    found = []
    for bits in range(1 << n):
        if bits & ~good_bits:
            continue
        candidate = StateSet(n, bits)
        if all((bits >> table[w]) & 1 for w in candidate):
            found.append(candidate)
    return found
