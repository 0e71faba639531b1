"""Regenerate the requirement-to-test matrix for the simulator."""
from __future__ import annotations

from pathlib import Path

MATRIX_ROWS: list[tuple[str, list[str]]] = [
    (
        "Sorted Merkle tree roots, membership and non-membership proofs",
        [
            "tests/merkle/test_tree.py::test_random_root_matches_straight_line_oracle",
            "tests/merkle/test_proofs.py::test_membership_round_trips_thousand_trials",
            "tests/merkle/test_proofs.py::test_non_membership_round_trips_thousand_trials",
            "tests/merkle/test_codec.py::test_single_byte_mutations_are_rejected",
        ],
    ),
    (
        "HSL parsing, unified types and interface files",
        [
            "tests/hsl/test_parser.py",
            "tests/hsl/test_types.py::test_go_string_is_ambiguous_and_resolved_by_context",
            "tests/hsl/test_interfaces.py",
        ],
    ),
    (
        "Semantic validation: cycles, producers, verifiability",
        [
            "tests/hsl/test_validator.py::test_validate_collects_every_violation",
            "tests/hsl/test_validator.py::test_reverse_constraint_reports_cycle",
            "tests/hsl/test_validator.py::test_private_state_is_unverifiable",
        ],
    ),
    (
        "Lowering to a Tdg pinned to the golden file",
        [
            "tests/compiler/test_lowering.py::test_option_tdg_matches_golden",
            "tests/compiler/test_lowering.py::test_value_conservation",
            "tests/compiler/test_lowering.py::test_precedence_soundness",
        ],
    ),
    (
        "Stake requirement over committable subsets",
        [
            "tests/compiler/test_staking.py::test_option_stakes",
            "tests/compiler/test_staking.py::test_matches_exhaustive_enumeration",
        ],
    ),
    (
        "Simulated chains: signatures, nonces, provable state",
        [
            "tests/chain/test_ledger.py::test_replayed_nonce_rejected",
            "tests/chain/test_ledger.py::test_broker_state_is_provable",
            "tests/chain/test_ledger.py::test_replay_reproduces_state_roots",
        ],
    ),
    (
        "NSB action staking, status claims and quorum",
        [
            "tests/nsb/test_ledger.py::test_staked_certificate_is_provable",
            "tests/nsb/test_ledger.py::test_byzantine_peer_cannot_commit_false_claims",
            "tests/nsb/test_ledger.py::test_watching_streams_relevant_blocks_only",
        ],
    ),
    (
        "ISC claims, deadlines, dirty set and blame",
        [
            "tests/isc/test_arbitrator.py",
            "tests/isc/test_rules.py::test_random_dag_dirty_set",
        ],
    ),
    (
        "Party state machines and NSB fallback",
        [
            "tests/parties/test_party.py",
            "tests/parties/test_watchers.py::test_nsb_carries_certificates_when_channels_are_dead",
        ],
    ),
    (
        "Deterministic network and adversary scripts",
        [
            "tests/netsim/test_network.py::test_same_seed_same_trace",
            "tests/netsim/test_network.py::test_rules_on_one_link_do_not_shift_another",
        ],
    ),
    (
        "Scenario files, timers and end-to-end runs",
        [
            "tests/harness/test_scenario.py",
            "tests/harness/test_run.py::test_shipped_scenarios_meet_their_expectations",
        ],
    ),
    (
        "Atomicity under randomized adversaries",
        ["tests/harness/test_atomicity.py::test_randomized_adversaries_never_break_atomicity"],
    ),
    (
        "Accountability fault matrix",
        [
            "tests/harness/test_matrix.py::test_option_fault_matrix_passes_every_cell",
            "tests/harness/test_matrix.py::test_decision_tree_blame",
        ],
    ),
    (
        "Response envelopes, CLI and metrics exporter",
        [
            "tests/api/test_harness_api.py",
            "tests/test_cli.py",
            "tests/infrastructure/test_metrics.py",
        ],
    ),
    (
        "Spec matrix regeneration automation",
        [
            "scripts/generate_spec_matrix.py",
            "tests/test_docs_assets.py::test_spec_matrix_generation",
        ],
    ),
]


def build_table() -> str:
    lines = ["", "| Requirement | Tests / Assets |", "| --- | --- |"]
    for requirement, assets in MATRIX_ROWS:
        lines.append(f"| {requirement} | `{'`, `'.join(assets)}` |")
    lines.append("")
    return "\n".join(lines)


def write_matrix(path: Path) -> None:
    path.write_text(build_table(), encoding="utf-8")


def main() -> int:
    project_root = Path(__file__).resolve().parents[1]
    output_path = project_root / "reports" / "spec_matrix.md"
    output_path.parent.mkdir(parents=True, exist_ok=True)
    write_matrix(output_path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
