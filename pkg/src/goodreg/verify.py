"""Randomized instances and dual-route checks of the regulator correspondences.

Two facts get machine-checked here, each by computing both sides of an
"if and only if" through disjoint code paths and comparing:

* a joint-space subset is forward-closed exactly when its per-agent-state
  slices form a consistent belief map over the true environment;
* a pair (good set, candidate set) witnesses a good regulator exactly when
  the sliced maps make the agent a subjective good regulator, and the three
  defining conditions correspond pairwise (non-emptiness to a non-absurd
  state, containment to pointwise belief-in-norm inclusion, forward-closure
  to belief consistency).

The left sides run on the coupled system's step function; the right sides run
on the possibilistic update rule.  Neither calls into the other.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .interpretation import (
    InterpretationBundle,
    belief_map_from_regulating_set,
    is_consistent_belief_map,
    normative_map_from_good_set,
)
from .machines import CoupledSystem, Interface, MealyMachine, MooreMachine, couple
from .regulation import RegulationSituation, is_forward_closed, is_regulating_set
from .sets import StateSet

# Exhaustive-subset regime bound: 2^10 candidate subsets per instance.
EXHAUSTIVE_JOINT_LIMIT = 10


@dataclass(frozen=True)
class InstanceSpec:
    """Sizes and seed pinning one reproducible random agent/environment pair."""

    n_agent_states: int
    n_env_states: int
    n_sensors: int
    n_actions: int
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("n_agent_states", "n_env_states", "n_sensors", "n_actions"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


def random_instance(spec: InstanceSpec) -> tuple[MooreMachine, MealyMachine]:
    """Sample an agent and environment with every table entry uniform and independent.

    The same spec always yields the same machines: draws happen in a fixed
    order from a generator seeded by ``spec.seed``.
    """
    rng = random.Random(spec.seed)
    interface = Interface(
        sensors=tuple(f"s{i}" for i in range(spec.n_sensors)),
        actions=tuple(f"a{i}" for i in range(spec.n_actions)),
    )
    agent = MooreMachine(
        states=tuple(f"x{i}" for i in range(spec.n_agent_states)),
        readout=tuple(
            rng.randrange(spec.n_actions) for _ in range(spec.n_agent_states)
        ),
        update=tuple(
            tuple(rng.randrange(spec.n_agent_states) for _ in range(spec.n_sensors))
            for _ in range(spec.n_agent_states)
        ),
        interface=interface,
    )
    env = MealyMachine(
        states=tuple(f"y{i}" for i in range(spec.n_env_states)),
        evolve=tuple(
            tuple(
                (rng.randrange(spec.n_env_states), rng.randrange(spec.n_sensors))
                for _ in range(spec.n_actions)
            )
            for _ in range(spec.n_env_states)
        ),
        interface=interface,
    )
    return agent, env


def random_state_set(size: int, rng: random.Random) -> StateSet:
    """Uniformly random subset of a universe of the given size."""
    return StateSet(size, rng.getrandbits(size))


class ComponentCheck(NamedTuple):
    """One correspondence between a regulation condition and its belief-side twin."""

    name: str
    left_side: bool
    right_side: bool

    @property
    def agree(self) -> bool:
        return self.left_side == self.right_side


@dataclass(frozen=True)
class Verdict:
    """Outcome of one dual-route check; ``agree`` is derived, never stored."""

    left_side: bool
    right_side: bool
    witness: str | None = None
    components: tuple[ComponentCheck, ...] = ()

    @property
    def agree(self) -> bool:
        return self.left_side == self.right_side


def verify_closure_consistency(
    agent: MooreMachine, env: MealyMachine, regulating: StateSet
) -> Verdict:
    """Forward-closure of a subset vs. consistency of its sliced belief map."""
    system = couple(agent, env)
    left = is_forward_closed(system, regulating)
    psi = belief_map_from_regulating_set(
        regulating, len(agent.states), len(env.states)
    )
    consistency = is_consistent_belief_map(
        InterpretationBundle(agent=agent, model=env, psi=psi)
    )
    right = consistency.consistent
    witness = None
    if left != right:
        witness = (
            f"subset {regulating.indices()} forward-closed={left} but"
            f" consistency witness={consistency.witness}"
        )
    return Verdict(left, right, witness)


def verify_regulator_equivalence(
    agent: MooreMachine,
    env: MealyMachine,
    good: StateSet,
    regulating: StateSet,
) -> Verdict:
    """Good-regulator status of (good, candidate) vs. subjective status of the slices.

    The overall sides are compared and so is each of the three defining
    conditions, pairwise.
    """
    system = couple(agent, env)
    left = is_regulating_set(RegulationSituation(system, good), regulating)

    n_agent, n_env = len(agent.states), len(env.states)
    psi = belief_map_from_regulating_set(regulating, n_agent, n_env)
    phi = normative_map_from_good_set(good, n_agent, n_env)
    consistency = is_consistent_belief_map(
        InterpretationBundle(agent=agent, model=env, psi=psi)
    )
    some_non_absurd = any(psi[x] for x in range(n_agent))
    beliefs_in_norms = all(psi[x].is_subset_of(phi[x]) for x in range(n_agent))
    right = consistency.consistent and some_non_absurd and beliefs_in_norms

    components = (
        ComponentCheck(
            "forward-closure",
            is_forward_closed(system, regulating),
            consistency.consistent,
        ),
        ComponentCheck("non-emptiness", bool(regulating), some_non_absurd),
        ComponentCheck(
            "containment", regulating.is_subset_of(good), beliefs_in_norms
        ),
    )
    witness = None
    if left != right or not all(c.agree for c in components):
        broken = [c.name for c in components if not c.agree]
        witness = (
            f"good={good.indices()} candidate={regulating.indices()}"
            f" left={left} right={right} disagreeing-components={broken}"
        )
    return Verdict(left, right, witness, components)


def greedy_minimize(
    still_fails: Callable[[tuple[StateSet, ...]], bool],
    sets: tuple[StateSet, ...],
) -> tuple[StateSet, ...]:
    """Shrink counterexample sets by clearing members one at a time.

    Each set member is dropped greedily whenever the failure predicate keeps
    holding, ascending through indices of each set in turn until no single
    removal preserves the failure.
    """
    current = tuple(sets)
    shrunk = True
    while shrunk:
        shrunk = False
        for which, s in enumerate(current):
            for member in s:
                candidate = list(current)
                candidate[which] = StateSet(s.size, s.bits & ~(1 << member))
                candidate = tuple(candidate)
                if still_fails(candidate):
                    current = candidate
                    shrunk = True
                    break
            if shrunk:
                break
    return current


@dataclass(frozen=True)
class Disagreement:
    """A minimized dual-route failure, ready for reporting."""

    check: str
    description: str


def _labelled_pairs(system: CoupledSystem, subset: StateSet) -> list[list[str]]:
    return sorted(list(system.joint_labels(w)) for w in subset)


def _component_names() -> tuple[str, ...]:
    return ("forward-closure", "non-emptiness", "containment")


def _run_closure_consistency(
    agent: MooreMachine,
    env: MealyMachine,
    subsets,
    tally: dict,
    disagreements: list[Disagreement],
) -> None:
    system = couple(agent, env)
    for subset in subsets:
        verdict = verify_closure_consistency(agent, env, subset)
        tally["checked"] += 1
        if verdict.agree:
            tally["agreed"] += 1
            continue
        tally["disagreed"] += 1
        (minimal,) = greedy_minimize(
            lambda sets: not verify_closure_consistency(agent, env, sets[0]).agree, (subset,)
        )
        disagreements.append(
            Disagreement(
                "closure_consistency",
                f"subset {_labelled_pairs(system, minimal)}: {verdict.witness}",
            )
        )


def _run_regulator_equivalence(
    agent: MooreMachine,
    env: MealyMachine,
    pairs,
    tally: dict,
    disagreements: list[Disagreement],
) -> None:
    system = couple(agent, env)
    for good, candidate in pairs:
        verdict = verify_regulator_equivalence(agent, env, good, candidate)
        tally["checked"] += 1
        if verdict.agree and all(c.agree for c in verdict.components):
            tally["agreed"] += 1
        else:
            tally["disagreed"] += 1
            minimal = greedy_minimize(
                lambda sets: not verify_regulator_equivalence(agent, env, sets[0], sets[1]).agree,
                (good, candidate),
            )
            disagreements.append(
                Disagreement(
                    "regulator_equivalence",
                    f"good {_labelled_pairs(system, minimal[0])} candidate"
                    f" {_labelled_pairs(system, minimal[1])}: {verdict.witness}",
                )
            )
        for check in verdict.components:
            if check.agree:
                tally["components"][check.name] += 1


def _equivalence_pairs(n: int, trials: int, rng: random.Random):
    """Random (good, candidate) pairs, every other one with the candidate forced inside."""
    for trial in range(trials):
        good = random_state_set(n, rng)
        candidate = random_state_set(n, rng)
        if trial % 2 == 0:
            candidate = candidate & good
        yield good, candidate


def verify_machines(
    agent: MooreMachine,
    env: MealyMachine,
    trials: int,
    seed: int,
) -> tuple[dict, list[Disagreement]]:
    """Run both correspondence checks against one fixed agent/environment pair.

    Small joint spaces get every subset checked for the closure/consistency
    correspondence; larger ones fall back to ``trials`` random subsets.  The
    full-equivalence check always uses ``trials`` random (good, candidate)
    pairs.  Returns a JSON-ready tally and any (minimized) disagreements.
    """
    n = len(agent.states) * len(env.states)
    rng = random.Random(seed)
    disagreements: list[Disagreement] = []
    exhaustive = trials > 0 and n <= EXHAUSTIVE_JOINT_LIMIT
    closure_tally = {
        "mode": "exhaustive" if exhaustive else "random",
        "checked": 0,
        "agreed": 0,
        "disagreed": 0,
    }
    if exhaustive:
        subsets = (StateSet(n, bits) for bits in range(1 << n))
    else:
        subsets = (random_state_set(n, rng) for _ in range(max(trials, 0)))
    _run_closure_consistency(agent, env, subsets, closure_tally, disagreements)

    equivalence_tally = {
        "checked": 0,
        "agreed": 0,
        "disagreed": 0,
        "components": {name: 0 for name in _component_names()},
    }
    _run_regulator_equivalence(agent, env, _equivalence_pairs(n, trials, rng), equivalence_tally, disagreements)
    return {"closure_consistency": closure_tally, "regulator_equivalence": equivalence_tally}, disagreements


def verify_random_instances(
    trials: int,
    seed: int,
    max_sizes: tuple[int, int, int, int] = (4, 4, 3, 3),
) -> tuple[dict, list[Disagreement]]:
    """Run both checks across freshly sampled instances instead of a fixed one.

    Each trial draws sizes up to ``max_sizes``, builds a seeded instance, and
    checks one random subset plus one random (good, candidate) pair.
    """
    rng = random.Random(seed)
    disagreements: list[Disagreement] = []
    closure_tally = {"mode": "random-instances", "checked": 0, "agreed": 0, "disagreed": 0}
    equivalence_tally = {
        "checked": 0,
        "agreed": 0,
        "disagreed": 0,
        "components": {name: 0 for name in _component_names()},
    }
    max_x, max_y, max_s, max_a = max_sizes
    for _ in range(trials):
        spec = InstanceSpec(
            n_agent_states=rng.randint(1, max_x),
            n_env_states=rng.randint(1, max_y),
            n_sensors=rng.randint(1, max_s),
            n_actions=rng.randint(1, max_a),
            seed=rng.getrandbits(32),
        )
        agent, env = random_instance(spec)
        n = spec.n_agent_states * spec.n_env_states
        _run_closure_consistency(
            agent, env, [random_state_set(n, rng)], closure_tally, disagreements
        )
        _run_regulator_equivalence(
            agent, env, _equivalence_pairs(n, 1, rng), equivalence_tally, disagreements
        )
    return {
        "instances": trials,
        "closure_consistency": closure_tally,
        "regulator_equivalence": equivalence_tally,
    }, disagreements
