from __future__ import annotations

from pathlib import Path

import yaml

from scripts import generate_spec_matrix

from .conftest import PROJECT_ROOT


def test_alert_rules_yaml_valid() -> None:
    alerts_dir = PROJECT_ROOT / "docs" / "dashboard" / "alerts"
    files = sorted(alerts_dir.glob("*.yaml"))
    assert files
    for alert_file in files:
        document = yaml.safe_load(alert_file.read_text(encoding="utf-8"))
        rules = document["groups"][0]["rules"]
        assert all(rule["expr"].count("uip_") >= 1 for rule in rules)


def test_spec_matrix_generation(tmp_path: Path) -> None:
    output = tmp_path / "spec_matrix.md"
    generate_spec_matrix.write_matrix(output)
    content = output.read_text(encoding="utf-8")
    assert "| Requirement | Tests / Assets |" in content


def test_spec_matrix_points_at_existing_files() -> None:
    for _, assets in generate_spec_matrix.MATRIX_ROWS:
        for asset in assets:
            path = asset.split("::", 1)[0]
            assert (PROJECT_ROOT / path).exists(), asset
