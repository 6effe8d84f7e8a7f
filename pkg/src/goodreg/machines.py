"""Finite deterministic machines and their closed-loop coupling.

An agent is a Moore machine: the action it emits depends only on its current
state, and its state advances on every sensor reading.  An environment is a
Mealy machine: fed an action, it moves to a new state and emits a sensor
value.  Wiring one of each together over a shared interface yields a closed
deterministic dynamical system on the product state space.

States, sensors and actions are dense indices 0..n-1 internally; the label
tables exist only for I/O.  All machines are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence


class InterfaceMismatchError(ValueError):
    """Raised when coupling machines built over different interfaces."""


def _check_labels(labels: tuple[str, ...], kind: str) -> None:
    if not labels:
        raise ValueError(f"{kind} label set must be non-empty")
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate {kind} labels: {labels!r}")


def _label_index(labels: tuple[str, ...], label: str, kind: str) -> int:
    try:
        return labels.index(label)
    except ValueError:
        raise ValueError(f"unknown {kind} label {label!r}") from None


@dataclass(frozen=True)
class Interface:
    """Shared alphabet of sensor values and actions."""

    sensors: tuple[str, ...]
    actions: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sensors", tuple(self.sensors))
        object.__setattr__(self, "actions", tuple(self.actions))
        _check_labels(self.sensors, "sensor")
        _check_labels(self.actions, "action")

    def sensor_index(self, label: str) -> int:
        return _label_index(self.sensors, label, "sensor")

    def action_index(self, label: str) -> int:
        return _label_index(self.actions, label, "action")


@dataclass(frozen=True)
class MooreMachine:
    """Agent machine: a state set with an action readout and a sensor-driven update.

    ``readout[x]`` is the action index emitted in state ``x``; ``update[x][s]``
    is the successor state after reading sensor ``s`` in state ``x``.  Both
    tables must be total and every entry in range.
    """

    states: tuple[str, ...]
    readout: tuple[int, ...]
    update: tuple[tuple[int, ...], ...]
    interface: Interface

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "readout", tuple(self.readout))
        object.__setattr__(self, "update", tuple(tuple(row) for row in self.update))
        _check_labels(self.states, "agent state")
        n, n_sensors = len(self.states), len(self.interface.sensors)
        n_actions = len(self.interface.actions)
        if len(self.readout) != n:
            raise ValueError(
                f"readout table has {len(self.readout)} entries for {n} states"
            )
        for x, a in enumerate(self.readout):
            if not 0 <= a < n_actions:
                raise ValueError(f"readout[{x}] = {a} is not an action index")
        if len(self.update) != n:
            raise ValueError(
                f"update table has {len(self.update)} rows for {n} states"
            )
        for x, row in enumerate(self.update):
            if len(row) != n_sensors:
                raise ValueError(
                    f"update row for state {x} has {len(row)} entries for"
                    f" {n_sensors} sensors"
                )
            for s, x2 in enumerate(row):
                if not 0 <= x2 < n:
                    raise ValueError(f"update[{x}][{s}] = {x2} is not a state index")

    def state_index(self, label: str) -> int:
        return _label_index(self.states, label, "agent state")


@dataclass(frozen=True)
class MealyMachine:
    """Environment (or model) machine: a state set with an evolution table.

    ``evolve[y][a]`` is the pair ``(successor state, emitted sensor)`` after
    receiving action ``a`` in state ``y``.  The table must be total and every
    entry in range.
    """

    states: tuple[str, ...]
    evolve: tuple[tuple[tuple[int, int], ...], ...]
    interface: Interface

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(
            self,
            "evolve",
            tuple(tuple((int(y2), int(s2)) for y2, s2 in row) for row in self.evolve),
        )
        _check_labels(self.states, "environment state")
        n, n_sensors = len(self.states), len(self.interface.sensors)
        n_actions = len(self.interface.actions)
        if len(self.evolve) != n:
            raise ValueError(
                f"evolve table has {len(self.evolve)} rows for {n} states"
            )
        for y, row in enumerate(self.evolve):
            if len(row) != n_actions:
                raise ValueError(
                    f"evolve row for state {y} has {len(row)} entries for"
                    f" {n_actions} actions"
                )
            for a, (y2, s2) in enumerate(row):
                if not 0 <= y2 < n:
                    raise ValueError(f"evolve[{y}][{a}] state {y2} is out of range")
                if not 0 <= s2 < n_sensors:
                    raise ValueError(f"evolve[{y}][{a}] sensor {s2} is out of range")

    def state_index(self, label: str) -> int:
        return _label_index(self.states, label, "environment state")


class JointState(NamedTuple):
    """A point of the product state space: (agent-state index, env-state index)."""

    x: int
    y: int


@dataclass(frozen=True)
class CoupledSystem:
    """Closed dynamics on the product of an agent's and an environment's states.

    The joint update first reads the agent's action, then evolves the
    environment, then updates the agent on the emitted sensor value.  The
    composite is precomputed into ``step_table``, indexed x-major
    (``w = x * |Y| + y``).
    """

    agent: MooreMachine
    environment: MealyMachine
    step_table: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.agent.interface != self.environment.interface:
            raise InterfaceMismatchError(
                "agent and environment are built over different interfaces"
            )
        ny = len(self.environment.states)
        table = []
        for x, a in enumerate(self.agent.readout):
            for y in range(ny):
                y2, s = self.environment.evolve[y][a]
                table.append(self.agent.update[x][s] * ny + y2)
        object.__setattr__(self, "step_table", tuple(table))

    @property
    def n_joint(self) -> int:
        return len(self.agent.states) * len(self.environment.states)

    def joint_index(self, w: Sequence[int]) -> int:
        x, y = w
        if not 0 <= x < len(self.agent.states):
            raise ValueError(f"agent state index {x} out of range")
        if not 0 <= y < len(self.environment.states):
            raise ValueError(f"environment state index {y} out of range")
        return x * len(self.environment.states) + y

    def joint_state(self, index: int) -> JointState:
        if not 0 <= index < self.n_joint:
            raise ValueError(f"joint state index {index} out of range")
        ny = len(self.environment.states)
        return JointState(index // ny, index % ny)

    def joint_labels(self, index: int) -> tuple[str, str]:
        w = self.joint_state(index)
        return self.agent.states[w.x], self.environment.states[w.y]


def readout(agent: MooreMachine, x: int) -> int:
    """Action index the agent emits in state ``x``."""
    if not 0 <= x < len(agent.states):
        raise ValueError(f"agent state index {x} out of range")
    return agent.readout[x]


def moore_update(agent: MooreMachine, x: int, s: int) -> int:
    """Successor agent state after reading sensor ``s`` in state ``x``."""
    if not 0 <= x < len(agent.states):
        raise ValueError(f"agent state index {x} out of range")
    if not 0 <= s < len(agent.interface.sensors):
        raise ValueError(f"sensor index {s} out of range")
    return agent.update[x][s]


def mealy_evolve(env: MealyMachine, y: int, a: int) -> tuple[int, int]:
    """Pair (successor env state, emitted sensor) after action ``a`` in state ``y``."""
    if not 0 <= y < len(env.states):
        raise ValueError(f"environment state index {y} out of range")
    if not 0 <= a < len(env.interface.actions):
        raise ValueError(f"action index {a} out of range")
    return env.evolve[y][a]


def couple(agent: MooreMachine, env: MealyMachine) -> CoupledSystem:
    """Wire an agent to an environment sharing its interface."""
    return CoupledSystem(agent, env)


def step(sys: CoupledSystem, w: Sequence[int]) -> JointState:
    """One tick of the closed loop: readout, evolve, then update."""
    return sys.joint_state(sys.step_table[sys.joint_index(w)])


def trajectory(sys: CoupledSystem, w0: Sequence[int], n: int) -> list[JointState]:
    """The n+1 joint states visited starting from ``w0``, including it."""
    if n < 0:
        raise ValueError(f"step count must be >= 0, got {n}")
    w = JointState(*w0)
    sys.joint_index(w)
    out = [w]
    for _ in range(n):
        w = step(sys, w)
        out.append(w)
    return out
