"""Good-regulator analysis for finite agent-environment systems.

Decide whether a finite agent regulates its environment (keeps the coupled
dynamics inside a chosen good set), synthesize the belief and normative maps
that interpretation guarantees, and cross-check the underlying
correspondences by independent brute force.
"""

from .interpretation import (
    BeliefMap,
    BeliefTrace,
    ConsistencyResult,
    ConsistencyWitness,
    InconsistentBeliefError,
    InterpretationBundle,
    NormativeMap,
    SubjectiveReport,
    TraceRecord,
    TrivialityReport,
    belief_map_from_regulating_set,
    belief_trace,
    is_consistent_belief_map,
    is_subjective_good_regulator,
    normative_map_from_good_set,
    possibilistic_update,
    subjectively_possible_sensors,
    triviality_report,
)
from .machines import (
    CoupledSystem,
    Interface,
    InterfaceMismatchError,
    JointState,
    MealyMachine,
    MooreMachine,
    couple,
    mealy_evolve,
    moore_update,
    readout,
    step,
    trajectory,
)
from .regulation import (
    RegulationSituation,
    UniverseTooLargeError,
    enumerate_forward_closed_subsets,
    is_forward_closed,
    is_good_regulator,
    is_regulating_set,
    largest_regulating_set,
    lift_agent_goal,
    lift_environment_goal,
)
from .sets import StateSet
from .verify import (
    ComponentCheck,
    Disagreement,
    InstanceSpec,
    Verdict,
    greedy_minimize,
    random_instance,
    random_state_set,
    verify_closure_consistency,
    verify_machines,
    verify_random_instances,
    verify_regulator_equivalence,
)

__version__ = "0.1.0"

__all__ = [
    "BeliefMap",
    "BeliefTrace",
    "ComponentCheck",
    "ConsistencyResult",
    "ConsistencyWitness",
    "CoupledSystem",
    "Disagreement",
    "InconsistentBeliefError",
    "InstanceSpec",
    "Interface",
    "InterfaceMismatchError",
    "InterpretationBundle",
    "JointState",
    "MealyMachine",
    "MooreMachine",
    "NormativeMap",
    "RegulationSituation",
    "StateSet",
    "SubjectiveReport",
    "TraceRecord",
    "TrivialityReport",
    "UniverseTooLargeError",
    "Verdict",
    "belief_map_from_regulating_set",
    "belief_trace",
    "couple",
    "enumerate_forward_closed_subsets",
    "greedy_minimize",
    "is_consistent_belief_map",
    "is_forward_closed",
    "is_good_regulator",
    "is_regulating_set",
    "is_subjective_good_regulator",
    "largest_regulating_set",
    "lift_agent_goal",
    "lift_environment_goal",
    "mealy_evolve",
    "moore_update",
    "normative_map_from_good_set",
    "possibilistic_update",
    "random_instance",
    "random_state_set",
    "readout",
    "step",
    "subjectively_possible_sensors",
    "trajectory",
    "triviality_report",
    "verify_closure_consistency",
    "verify_machines",
    "verify_random_instances",
    "verify_regulator_equivalence",
]
