"""Analysis report fragments and their JSON/text renderings.

Every fragment is a plain dict carrying ``report_version`` plus the keys the
subcommand produces (``verdict``, ``largest_r``, ``psi``, ``phi``,
``triviality``, ``verification``).  Set values always appear as sorted label
arrays; map keys follow machine state order.  Rendering is deterministic.
"""

from __future__ import annotations

import json

from .interpretation import BeliefMap, SubjectiveReport, TrivialityReport
from .machines import CoupledSystem
from .sets import StateSet

REPORT_VERSION = 1


def set_labels(subset: StateSet, labels: tuple[str, ...]) -> list[str]:
    return sorted(labels[i] for i in subset)


def joint_pairs(subset: StateSet | None, system: CoupledSystem) -> list[list[str]]:
    if subset is None:
        return []
    return sorted(list(system.joint_labels(w)) for w in subset)


def belief_table(bmap: BeliefMap, agent_labels: tuple[str, ...], model_labels: tuple[str, ...]) -> dict:
    return {
        agent_labels[x]: set_labels(bmap[x], model_labels)
        for x in range(bmap.agent_size)
    }


def new_fragment() -> dict:
    return {"report_version": REPORT_VERSION}


def check_fragment(system: CoupledSystem, largest: StateSet | None) -> dict:
    fragment = new_fragment()
    fragment["verdict"] = {"good_regulator": largest is not None}
    fragment["largest_r"] = joint_pairs(largest, system)
    return fragment


def synthesize_fragment(
    system: CoupledSystem,
    used: StateSet,
    largest: StateSet | None,
    psi: BeliefMap,
    phi: BeliefMap,
    subjective: SubjectiveReport | None,
    inconsistency_witness: dict | None,
    triviality: TrivialityReport,
) -> dict:
    agent_labels = system.agent.states
    env_labels = system.environment.states
    fragment = new_fragment()
    verdict: dict = {"good_regulator": largest is not None}
    if subjective is not None:
        verdict["subjective_good_regulator"] = subjective.subjective_good_regulator
        verdict["admissible_states"] = sorted(
            agent_labels[x] for x in subjective.admissible_states
        )
        verdict["norm_violations"] = sorted(
            agent_labels[x] for x in subjective.norm_violations
        )
    else:
        # the supplied regulating set was not forward-closed
        verdict["subjective_good_regulator"] = False
        verdict["inconsistent_belief_witness"] = inconsistency_witness
    fragment["verdict"] = verdict
    fragment["largest_r"] = joint_pairs(largest, system)
    fragment["regulating_set"] = joint_pairs(used, system)
    fragment["psi"] = belief_table(psi, agent_labels, env_labels)
    fragment["phi"] = belief_table(phi, agent_labels, env_labels)
    fragment["triviality"] = {
        "distinct_beliefs": triviality.distinct_beliefs,
        "constant": triviality.constant,
        "absurd_states": triviality.absurd_states,
        "min_size": triviality.min_size,
        "max_size": triviality.max_size,
        "mean_size": triviality.mean_size,
    }
    return fragment


def interpret_fragment(witness: dict | None) -> dict:
    fragment = new_fragment()
    fragment["verdict"] = {
        "consistent_belief_map": witness is None,
        "witness": witness,
    }
    return fragment


def verification_fragment(tally: dict) -> dict:
    fragment = new_fragment()
    fragment["verification"] = tally
    return fragment


def render_json(fragment: dict) -> str:
    return json.dumps(fragment, indent=2) + "\n"


def _yesno(flag: bool) -> str:
    return "yes" if flag else "no"


def _pair_lines(pairs: list[list[str]], indent: str = "  ") -> list[str]:
    if not pairs:
        return [f"{indent}(none)"]
    return [f"{indent}({x}, {y})" for x, y in pairs]


def _belief_lines(table: dict) -> list[str]:
    return [
        "  {}: {{{}}}".format(state, ", ".join(labels))
        for state, labels in table.items()
    ]


def render_text(fragment: dict) -> str:
    """Human-readable rendering of a fragment, line for line deterministic."""
    lines: list[str] = []
    verdict = fragment.get("verdict", {})
    if "good_regulator" in verdict:
        lines.append(f"good regulator: {_yesno(verdict['good_regulator'])}")
    if "largest_r" in fragment:
        lines.append("largest regulating set:")
        lines.extend(_pair_lines(fragment["largest_r"]))
    if "regulating_set" in fragment:
        lines.append("regulating set used:")
        lines.extend(_pair_lines(fragment["regulating_set"]))
    if "psi" in fragment:
        lines.append("belief map (psi):")
        lines.extend(_belief_lines(fragment["psi"]))
    if "phi" in fragment:
        lines.append("normative map (phi):")
        lines.extend(_belief_lines(fragment["phi"]))
    if "triviality" in fragment:
        t = fragment["triviality"]
        lines.append("triviality:")
        lines.append(f"  distinct belief sets: {t['distinct_beliefs']}")
        lines.append(f"  constant: {_yesno(t['constant'])}")
        lines.append(f"  absurd states: {t['absurd_states']}")
        lines.append(
            f"  belief size min/max/mean: {t['min_size']}/{t['max_size']}/{t['mean_size']:g}"
        )
    if "subjective_good_regulator" in verdict:
        lines.append(
            f"subjective good regulator: {_yesno(verdict['subjective_good_regulator'])}"
        )
        if "admissible_states" in verdict:
            lines.append(
                "admissible start states: {}".format(
                    ", ".join(verdict["admissible_states"]) or "(none)"
                )
            )
        if verdict.get("norm_violations"):
            lines.append(
                "norm violations: {}".format(", ".join(verdict["norm_violations"]))
            )
        if verdict.get("inconsistent_belief_witness"):
            lines.append(
                "supplied regulating set yields an inconsistent belief map:"
                " {}".format(verdict["inconsistent_belief_witness"])
            )
    if "consistent_belief_map" in verdict:
        lines.append(
            f"consistent belief map: {_yesno(verdict['consistent_belief_map'])}"
        )
        if verdict.get("witness"):
            w = verdict["witness"]
            lines.append(
                "witness: state {state}, sensor {sensor}, leaked model state"
                " {model_state}".format(**w)
            )
    if "verification" in fragment:
        v = fragment["verification"]
        if not v:
            lines.append("verification: no trials requested")
        if "instances" in v:
            lines.append(f"instances checked: {v['instances']}")
        if "closure_consistency" in v:
            t = v["closure_consistency"]
            lines.append(
                f"closure/consistency correspondence: {t['agreed']}/{t['checked']}"
                f" agree ({t['mode']})"
            )
        if "regulator_equivalence" in v:
            t = v["regulator_equivalence"]
            lines.append(
                f"regulator correspondence: {t['agreed']}/{t['checked']} agree"
            )
            for name, count in t["components"].items():
                lines.append(f"  {name}: {count}/{t['checked']}")
    return "\n".join(lines) + "\n"
