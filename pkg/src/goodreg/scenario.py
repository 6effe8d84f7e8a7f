"""YAML scenario files: machines, goal sets, and optional interpretations.

A scenario is a single YAML document (``format_version: 1``) naming the
interface, the agent's readout/update tables, the environment's evolve
table, and optionally a good set, a regulating set, a model machine, and a
belief map.  All external values are labels; indices never appear in files.
The exact schema is documented in the README.

Good sets are either explicit ``[agent-state, env-state]`` pair lists or one
of the goal-lift shorthands ``env-goal`` / ``agent-goal``.  Regulating sets
are always explicit pair lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import yaml

from .interpretation import BeliefMap
from .machines import CoupledSystem, Interface, MealyMachine, MooreMachine, couple
from .regulation import lift_agent_goal, lift_environment_goal
from .sets import StateSet

FORMAT_VERSION = 1


class ScenarioError(Exception):
    """Base for scenario-file problems; ``code`` names the error class."""

    code = "invalid"


class ScenarioSyntaxError(ScenarioError):
    code = "syntax"


class ScenarioFormatError(ScenarioError):
    code = "format"


class UnknownLabelError(ScenarioError):
    code = "unknown-label"


class NonTotalTableError(ScenarioError):
    code = "non-total"


class DuplicateLabelError(ScenarioError):
    code = "duplicate-label"


@dataclass(frozen=True)
class AgentSpec:
    states: tuple[str, ...]
    readout: tuple[str, ...]  # action label per state
    update: tuple[tuple[str, ...], ...]  # successor label per (state, sensor)


@dataclass(frozen=True)
class EnvironmentSpec:
    states: tuple[str, ...]
    evolve: tuple[tuple[tuple[str, str], ...], ...]  # (state, sensor) per (state, action)


@dataclass(frozen=True)
class GoalSpec:
    """Either explicit joint pairs or a one-sided goal to be lifted."""

    kind: str  # "pairs" | "env-goal" | "agent-goal"
    pairs: tuple[tuple[str, str], ...] = ()
    labels: tuple[str, ...] = ()


@dataclass(frozen=True)
class ScenarioFile:
    format_version: int
    sensors: tuple[str, ...]
    actions: tuple[str, ...]
    agent: AgentSpec
    environment: EnvironmentSpec
    good_set: GoalSpec | None = None
    regulating_set: tuple[tuple[str, str], ...] | None = None
    model: EnvironmentSpec | None = None
    belief_map: tuple[tuple[str, ...], ...] | None = None  # model labels per agent state


def _require_str(value: Any, where: str) -> str:
    if not isinstance(value, str):
        raise ScenarioFormatError(
            f"{where}: expected a string label, got {value!r}"
            " (quote labels like 'on' or '1' that YAML would otherwise retype)"
        )
    return value


def _require_mapping(value: Any, where: str) -> dict:
    if not isinstance(value, dict):
        raise ScenarioFormatError(f"{where}: expected a mapping, got {type(value).__name__}")
    return value


def _require_list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise ScenarioFormatError(f"{where}: expected a list, got {type(value).__name__}")
    return value


def _label_list(value: Any, where: str) -> tuple[str, ...]:
    labels = tuple(_require_str(v, where) for v in _require_list(value, where))
    seen = set()
    for label in labels:
        if label in seen:
            raise DuplicateLabelError(f"{where}: duplicate label {label!r}")
        seen.add(label)
    return labels


def _lookup(label: Any, universe: tuple[str, ...], where: str, kind: str) -> str:
    label = _require_str(label, where)
    if label not in universe:
        raise UnknownLabelError(f"{where}: unknown {kind} label {label!r}")
    return label


def _table_rows(
    table: Any, row_labels: tuple[str, ...], where: str, kind: str
) -> list[tuple[str, Any]]:
    """Validate a label-keyed table for totality and resolve row labels, in row order."""
    mapping = _require_mapping(table, where)
    for key in mapping:
        _lookup(key, row_labels, where, kind)
    missing = [label for label in row_labels if label not in mapping]
    if missing:
        raise NonTotalTableError(f"{where}: missing row for {missing[0]!r}")
    return [(label, mapping[label]) for label in row_labels]


def _parse_agent(
    section: Any, sensors: tuple[str, ...], actions: tuple[str, ...]
) -> AgentSpec:
    mapping = _require_mapping(section, "agent")
    states = _label_list(mapping.get("states"), "agent.states")
    readout_rows = _table_rows(mapping.get("readout"), states, "agent.readout", "agent state")
    readout = tuple(
        _lookup(action, actions, f"agent.readout[{state}]", "action")
        for state, action in readout_rows
    )
    update_rows = _table_rows(mapping.get("update"), states, "agent.update", "agent state")
    update = []
    for state, row in update_rows:
        where = f"agent.update[{state}]"
        cells = _table_rows(row, sensors, where, "sensor")
        update.append(
            tuple(
                _lookup(target, states, f"{where}[{sensor}]", "agent state")
                for sensor, target in cells
            )
        )
    return AgentSpec(states=states, readout=readout, update=tuple(update))


def _parse_environment(
    section: Any, sensors: tuple[str, ...], actions: tuple[str, ...], name: str
) -> EnvironmentSpec:
    mapping = _require_mapping(section, name)
    states = _label_list(mapping.get("states"), f"{name}.states")
    evolve_rows = _table_rows(
        mapping.get("evolve"), states, f"{name}.evolve", f"{name} state"
    )
    evolve = []
    for state, row in evolve_rows:
        where = f"{name}.evolve[{state}]"
        cells = _table_rows(row, actions, where, "action")
        out_row = []
        for action, pair in cells:
            cell = f"{where}[{action}]"
            pair = _require_list(pair, cell)
            if len(pair) != 2:
                raise ScenarioFormatError(
                    f"{cell}: expected a [state, sensor] pair, got {len(pair)} items"
                )
            out_row.append(
                (
                    _lookup(pair[0], states, cell, f"{name} state"),
                    _lookup(pair[1], sensors, cell, "sensor"),
                )
            )
        evolve.append(tuple(out_row))
    return EnvironmentSpec(states=states, evolve=tuple(evolve))


def _parse_pairs(
    value: Any,
    agent_states: tuple[str, ...],
    env_states: tuple[str, ...],
    where: str,
) -> tuple[tuple[str, str], ...]:
    pairs = []
    for i, item in enumerate(_require_list(value, where)):
        cell = f"{where}[{i}]"
        item = _require_list(item, cell)
        if len(item) != 2:
            raise ScenarioFormatError(
                f"{cell}: expected an [agent-state, env-state] pair"
            )
        pairs.append(
            (
                _lookup(item[0], agent_states, cell, "agent state"),
                _lookup(item[1], env_states, cell, "environment state"),
            )
        )
    return tuple(pairs)


def _parse_good_set(
    value: Any,
    agent_states: tuple[str, ...],
    env_states: tuple[str, ...],
) -> GoalSpec:
    if isinstance(value, list):
        return GoalSpec(
            kind="pairs", pairs=_parse_pairs(value, agent_states, env_states, "good-set")
        )
    mapping = _require_mapping(value, "good-set")
    keys = set(mapping)
    if keys == {"env-goal"}:
        labels = tuple(
            _lookup(v, env_states, "good-set.env-goal", "environment state")
            for v in _require_list(mapping["env-goal"], "good-set.env-goal")
        )
        return GoalSpec(kind="env-goal", labels=labels)
    if keys == {"agent-goal"}:
        labels = tuple(
            _lookup(v, agent_states, "good-set.agent-goal", "agent state")
            for v in _require_list(mapping["agent-goal"], "good-set.agent-goal")
        )
        return GoalSpec(kind="agent-goal", labels=labels)
    raise ScenarioFormatError(
        "good-set: expected a pair list or exactly one of 'env-goal'/'agent-goal',"
        f" got keys {sorted(keys)}"
    )


def _parse_belief_map(
    value: Any,
    agent_states: tuple[str, ...],
    model_states: tuple[str, ...],
) -> tuple[tuple[str, ...], ...]:
    rows = _table_rows(value, agent_states, "belief-map", "agent state")
    out = []
    for state, labels in rows:
        where = f"belief-map[{state}]"
        resolved = [
            _lookup(label, model_states, where, "model state")
            for label in _require_list(labels, where)
        ]
        if len(set(resolved)) != len(resolved):
            raise DuplicateLabelError(f"{where}: duplicate model state")
        out.append(tuple(sorted(resolved, key=model_states.index)))
    return tuple(out)


class _StrictLoader(yaml.SafeLoader):
    """SafeLoader that rejects duplicate mapping keys instead of keeping the last."""


def _construct_mapping(loader, node, deep=False):
    seen = set()
    for key_node, _ in node.value:
        key = loader.construct_object(key_node, deep=deep)
        if key in seen:
            raise DuplicateLabelError(
                f"duplicate mapping key {key!r} at line {key_node.start_mark.line + 1}"
            )
        seen.add(key)
    return yaml.SafeLoader.construct_mapping(loader, node, deep)


_StrictLoader.add_constructor(
    yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping
)


def parse_scenario(text: str) -> ScenarioFile:
    """Parse and fully validate a scenario document."""
    try:
        raw = yaml.load(text, Loader=_StrictLoader)
    except ScenarioError:
        raise
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        position = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ScenarioSyntaxError(f"malformed YAML{position}: {exc}") from exc
    mapping = _require_mapping(raw, "scenario")
    version = mapping.get("format_version")
    if version != FORMAT_VERSION:
        raise ScenarioFormatError(
            f"format_version must be {FORMAT_VERSION}, got {version!r}"
        )
    for key in ("interface", "agent", "environment"):
        if key not in mapping:
            raise ScenarioFormatError(f"missing required section {key!r}")
    known = {
        "format_version",
        "interface",
        "agent",
        "environment",
        "good-set",
        "regulating-set",
        "model",
        "belief-map",
    }
    for key in mapping:
        if key not in known:
            raise ScenarioFormatError(f"unknown section {key!r}")

    interface = _require_mapping(mapping["interface"], "interface")
    sensors = _label_list(interface.get("sensors"), "interface.sensors")
    actions = _label_list(interface.get("actions"), "interface.actions")
    agent = _parse_agent(mapping["agent"], sensors, actions)
    environment = _parse_environment(mapping["environment"], sensors, actions, "environment")

    good_set = None
    if "good-set" in mapping:
        good_set = _parse_good_set(mapping["good-set"], agent.states, environment.states)
    regulating_set = None
    if "regulating-set" in mapping:
        regulating_set = _parse_pairs(
            mapping["regulating-set"], agent.states, environment.states, "regulating-set"
        )
    model = None
    if "model" in mapping:
        model = _parse_environment(mapping["model"], sensors, actions, "model")
    belief_map = None
    if "belief-map" in mapping:
        model_states = model.states if model is not None else environment.states
        belief_map = _parse_belief_map(mapping["belief-map"], agent.states, model_states)

    return ScenarioFile(
        format_version=version,
        sensors=sensors,
        actions=actions,
        agent=agent,
        environment=environment,
        good_set=good_set,
        regulating_set=regulating_set,
        model=model,
        belief_map=belief_map,
    )


def _environment_data(spec: EnvironmentSpec, actions: tuple[str, ...]) -> dict:
    return {
        "states": list(spec.states),
        "evolve": {
            state: {
                action: list(pair)
                for action, pair in zip(actions, row)
            }
            for state, row in zip(spec.states, spec.evolve)
        },
    }


def serialize_scenario(sc: ScenarioFile) -> str:
    """Render a scenario back to YAML; parsing the result reproduces ``sc`` exactly."""
    data: dict[str, Any] = {
        "format_version": sc.format_version,
        "interface": {"sensors": list(sc.sensors), "actions": list(sc.actions)},
        "agent": {
            "states": list(sc.agent.states),
            "readout": dict(zip(sc.agent.states, sc.agent.readout)),
            "update": {
                state: dict(zip(sc.sensors, row))
                for state, row in zip(sc.agent.states, sc.agent.update)
            },
        },
        "environment": _environment_data(sc.environment, sc.actions),
    }
    if sc.good_set is not None:
        if sc.good_set.kind == "pairs":
            data["good-set"] = [list(pair) for pair in sc.good_set.pairs]
        else:
            data["good-set"] = {sc.good_set.kind: list(sc.good_set.labels)}
    if sc.regulating_set is not None:
        data["regulating-set"] = [list(pair) for pair in sc.regulating_set]
    if sc.model is not None:
        data["model"] = _environment_data(sc.model, sc.actions)
    if sc.belief_map is not None:
        data["belief-map"] = {
            state: list(labels)
            for state, labels in zip(sc.agent.states, sc.belief_map)
        }
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=None)


def load_scenario(path) -> ScenarioFile:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_scenario(handle.read())


def _build_mealy(spec: EnvironmentSpec, interface: Interface) -> MealyMachine:
    state_index = {label: i for i, label in enumerate(spec.states)}
    sensor_index = {label: i for i, label in enumerate(interface.sensors)}
    return MealyMachine(
        states=spec.states,
        evolve=tuple(
            tuple((state_index[y2], sensor_index[s2]) for y2, s2 in row)
            for row in spec.evolve
        ),
        interface=interface,
    )


def build_interface(sc: ScenarioFile) -> Interface:
    return Interface(sensors=sc.sensors, actions=sc.actions)


def build_machines(sc: ScenarioFile) -> tuple[MooreMachine, MealyMachine]:
    interface = build_interface(sc)
    state_index = {label: i for i, label in enumerate(sc.agent.states)}
    action_index = {label: i for i, label in enumerate(sc.actions)}
    agent = MooreMachine(
        states=sc.agent.states,
        readout=tuple(action_index[a] for a in sc.agent.readout),
        update=tuple(
            tuple(state_index[target] for target in row) for row in sc.agent.update
        ),
        interface=interface,
    )
    return agent, _build_mealy(sc.environment, interface)


def build_system(sc: ScenarioFile) -> CoupledSystem:
    agent, env = build_machines(sc)
    return couple(agent, env)


def build_model(sc: ScenarioFile) -> MealyMachine | None:
    if sc.model is None:
        return None
    return _build_mealy(sc.model, build_interface(sc))


def _pairs_to_state_set(
    pairs: tuple[tuple[str, str], ...], system: CoupledSystem
) -> StateSet:
    agent, env = system.agent, system.environment
    return StateSet.from_indices(
        system.n_joint,
        (
            system.joint_index((agent.state_index(xl), env.state_index(yl)))
            for xl, yl in pairs
        ),
    )


def resolve_good_set(sc: ScenarioFile, system: CoupledSystem) -> StateSet | None:
    if sc.good_set is None:
        return None
    goal = sc.good_set
    if goal.kind == "pairs":
        return _pairs_to_state_set(goal.pairs, system)
    if goal.kind == "env-goal":
        indices = [system.environment.state_index(label) for label in goal.labels]
        return lift_environment_goal(indices, system)
    indices = [system.agent.state_index(label) for label in goal.labels]
    return lift_agent_goal(indices, system)


def resolve_regulating_set(sc: ScenarioFile, system: CoupledSystem) -> StateSet | None:
    if sc.regulating_set is None:
        return None
    return _pairs_to_state_set(sc.regulating_set, system)


def build_belief_map(sc: ScenarioFile) -> BeliefMap | None:
    if sc.belief_map is None:
        return None
    model_states = (sc.model or sc.environment).states
    model_index = {label: i for i, label in enumerate(model_states)}
    n_model = len(model_states)
    return BeliefMap(
        agent_size=len(sc.agent.states),
        model_size=n_model,
        beliefs=tuple(
            StateSet.from_indices(n_model, (model_index[label] for label in labels))
            for labels in sc.belief_map
        ),
    )
