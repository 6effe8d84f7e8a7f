"""Possibilistic belief machinery.

An observer can interpret an agent as holding beliefs about a model machine:
each agent state is assigned the subset of model states the agent "considers
possible".  Beliefs update by keeping exactly the model states reachable from
some currently-possible state under the taken action and the observed sensor
value.  A belief map is consistent when the beliefs assigned to the next
agent state always include that update (supersets are allowed: the observer
may attribute forgetting, never invention).

A normative map has the same shape but carries no consistency condition: it
records, per agent state, which model states would count as the goal being
satisfied.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import fmean
from typing import NamedTuple, Sequence

from .machines import MealyMachine, MooreMachine, couple, step
from .sets import StateSet


class InconsistentBeliefError(ValueError):
    """Raised when an operation requires a consistent belief map but got a witness against it."""

    def __init__(self, witness: "ConsistencyWitness") -> None:
        self.witness = witness
        super().__init__(
            f"belief map is inconsistent: in state {witness.x} on sensor"
            f" {witness.s}, updated beliefs contain model state {witness.z_next}"
            f" but the successor's beliefs do not"
        )


@dataclass(frozen=True)
class BeliefMap:
    """Total assignment of a model-state subset to every agent state."""

    agent_size: int
    model_size: int
    beliefs: tuple[StateSet, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "beliefs", tuple(self.beliefs))
        if self.agent_size < 1:
            raise ValueError("agent state space must be non-empty")
        if len(self.beliefs) != self.agent_size:
            raise ValueError(
                f"{len(self.beliefs)} belief sets for {self.agent_size} agent states"
            )
        for x, b in enumerate(self.beliefs):
            if b.size != self.model_size:
                raise ValueError(
                    f"belief set for agent state {x} sized {b.size}, expected"
                    f" {self.model_size}"
                )

    def __getitem__(self, x: int) -> StateSet:
        return self.beliefs[x]


class NormativeMap(BeliefMap):
    """Same shape as a belief map; no consistency condition applies."""


@dataclass(frozen=True)
class InterpretationBundle:
    """An agent, the model it is interpreted against, and the interpretation maps."""

    agent: MooreMachine
    model: MealyMachine
    psi: BeliefMap
    phi: NormativeMap | None = None

    def __post_init__(self) -> None:
        if self.agent.interface != self.model.interface:
            raise ValueError("agent and model are built over different interfaces")
        for name, m in (("belief", self.psi), ("normative", self.phi)):
            if m is None:
                continue
            if m.agent_size != len(self.agent.states):
                raise ValueError(
                    f"{name} map covers {m.agent_size} agent states,"
                    f" expected {len(self.agent.states)}"
                )
            if m.model_size != len(self.model.states):
                raise ValueError(
                    f"{name} map ranges over {m.model_size} model states,"
                    f" expected {len(self.model.states)}"
                )


def possibilistic_update(
    model: MealyMachine, beliefs: StateSet, action: int, sensor: int
) -> StateSet:
    """Posterior beliefs after taking ``action`` and observing ``sensor``.

    Keeps exactly the model states z' for which some currently-possible state
    z evolves to z' while emitting the observed sensor value.  The result may
    be empty: then the sensor value was subjectively impossible.
    """
    n = len(model.states)
    if beliefs.size != n:
        raise ValueError(
            f"belief set sized {beliefs.size} for a model of {n} states"
        )
    if not 0 <= action < len(model.interface.actions):
        raise ValueError(f"action index {action} out of range")
    if not 0 <= sensor < len(model.interface.sensors):
        raise ValueError(f"sensor index {sensor} out of range")
    bits = 0
    for z in beliefs:
        z2, s2 = model.evolve[z][action]
        if s2 == sensor:
            bits |= 1 << z2
    return StateSet(n, bits)


def subjectively_possible_sensors(
    model: MealyMachine, beliefs: StateSet, action: int
) -> StateSet:
    """Sensor values with a non-empty posterior; non-empty whenever beliefs are."""
    if beliefs.size != len(model.states):
        raise ValueError(
            f"belief set sized {beliefs.size} for a model of {len(model.states)} states"
        )
    if not 0 <= action < len(model.interface.actions):
        raise ValueError(f"action index {action} out of range")
    bits = 0
    for z in beliefs:
        _, s2 = model.evolve[z][action]
        bits |= 1 << s2
    return StateSet(len(model.interface.sensors), bits)


class ConsistencyWitness(NamedTuple):
    """A violation of belief consistency: updated beliefs at (x, s) leak state z_next."""

    x: int
    s: int
    z_next: int


@dataclass(frozen=True)
class ConsistencyResult:
    consistent: bool
    witness: ConsistencyWitness | None = None

    def __bool__(self) -> bool:
        return self.consistent


def is_consistent_belief_map(bundle: InterpretationBundle) -> ConsistencyResult:
    """Check the belief-update inclusion at every (agent state, sensor) pair.

    For each pair, the possibilistic update of the current beliefs under the
    agent's own action must be contained in the beliefs of the successor
    state.  Scanning ascending in x, then s, then model state makes the
    reported witness the lexicographically first counterexample.
    """
    agent, model, psi = bundle.agent, bundle.model, bundle.psi
    for x in range(len(agent.states)):
        a = agent.readout[x]
        for s in range(len(agent.interface.sensors)):
            updated = possibilistic_update(model, psi[x], a, s)
            allowed = psi[agent.update[x][s]]
            leaked = updated.bits & ~allowed.bits
            if leaked:
                z_next = (leaked & -leaked).bit_length() - 1
                return ConsistencyResult(False, ConsistencyWitness(x, s, z_next))
    return ConsistencyResult(True)


def belief_map_from_regulating_set(
    subset: StateSet, n_agent: int, n_env: int
) -> BeliefMap:
    """Slice a joint-space subset into per-agent-state environment subsets.

    Agent states whose slice is empty get absurd (empty) beliefs; such states
    cannot be entered while sensor values stay subjectively possible.
    """
    if subset.size != n_agent * n_env:
        raise ValueError(
            f"subset sized {subset.size} for a joint space of {n_agent * n_env} states"
        )
    rows = []
    for x in range(n_agent):
        rows.append(StateSet(n_env, (subset.bits >> (x * n_env)) & ((1 << n_env) - 1)))
    return BeliefMap(n_agent, n_env, tuple(rows))


def normative_map_from_good_set(
    subset: StateSet, n_agent: int, n_env: int
) -> NormativeMap:
    """Slice a good set into per-agent-state goal subsets, same layout as beliefs."""
    base = belief_map_from_regulating_set(subset, n_agent, n_env)
    return NormativeMap(base.agent_size, base.model_size, base.beliefs)


@dataclass(frozen=True)
class SubjectiveReport:
    """Verdict plus the evidence: admissible start states and any norm violations."""

    subjective_good_regulator: bool
    admissible_states: tuple[int, ...]
    norm_violations: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.subjective_good_regulator


def is_subjective_good_regulator(bundle: InterpretationBundle) -> SubjectiveReport:
    """Decide subjective regulation: beliefs inside norms, with a non-absurd start.

    Requires a normative map and presupposes a consistent belief map; an
    inconsistent one raises with its witness.  Admissible start states are
    those with non-empty beliefs; norm violations are states whose beliefs
    are not contained in their norms.
    """
    if bundle.phi is None:
        raise ValueError("subjective regulation needs a normative map")
    consistency = is_consistent_belief_map(bundle)
    if not consistency:
        raise InconsistentBeliefError(consistency.witness)
    psi, phi = bundle.psi, bundle.phi
    admissible = tuple(x for x in range(psi.agent_size) if psi[x])
    violations = tuple(
        x for x in range(psi.agent_size) if not psi[x].is_subset_of(phi[x])
    )
    return SubjectiveReport(
        subjective_good_regulator=bool(admissible) and not violations,
        admissible_states=admissible,
        norm_violations=violations,
    )


class TraceRecord(NamedTuple):
    t: int
    x: int
    y: int
    beliefs: StateSet
    contained: bool


@dataclass(frozen=True)
class BeliefTrace:
    records: tuple[TraceRecord, ...]

    @property
    def violations(self) -> tuple[int, ...]:
        """Time steps whose true environment state escaped the attributed beliefs."""
        return tuple(r.t for r in self.records if not r.contained)


def belief_trace(
    bundle: InterpretationBundle,
    env: MealyMachine,
    w0: Sequence[int],
    n: int,
) -> BeliefTrace:
    """Run the agent in ``env`` for ``n`` steps, recording beliefs against truth.

    The start state must already be believed possible.  With a consistent
    belief map sliced from a forward-closed set this containment then holds
    at every step; a violation therefore falsifies consistency (or the start
    precondition).
    """
    if n < 0:
        raise ValueError(f"step count must be >= 0, got {n}")
    if bundle.psi.model_size != len(env.states):
        raise ValueError(
            "belief map ranges over a model of a different size than the environment"
        )
    system = couple(bundle.agent, env)
    w = system.joint_state(system.joint_index(w0))
    if w.y not in bundle.psi[w.x]:
        raise ValueError("start state outside believed set")
    records = [TraceRecord(0, w.x, w.y, bundle.psi[w.x], True)]
    for t in range(1, n + 1):
        w = step(system, w)
        beliefs = bundle.psi[w.x]
        records.append(TraceRecord(t, w.x, w.y, beliefs, w.y in beliefs))
    return BeliefTrace(tuple(records))


@dataclass(frozen=True)
class TrivialityReport:
    """Descriptive statistics of how belief sets vary with the agent's state."""

    distinct_beliefs: int
    constant: bool
    absurd_states: int
    min_size: int
    max_size: int
    mean_size: float


def triviality_report(psi: BeliefMap) -> TrivialityReport:
    """Summarise whether an interpretation is trivial (state-independent) or not."""
    sizes = [len(b) for b in psi.beliefs]
    distinct = len({b.bits for b in psi.beliefs})
    return TrivialityReport(
        distinct_beliefs=distinct,
        constant=distinct == 1,
        absurd_states=sum(1 for b in psi.beliefs if not b),
        min_size=min(sizes),
        max_size=max(sizes),
        mean_size=fmean(sizes),
    )
