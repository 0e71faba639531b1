from __future__ import annotations

from decimal import Decimal
from pathlib import Path

import pytest

from src.core.errors import ConfigError
from src.core.models import Party
from src.domain.compiler import VesConfig, load_ves_config, parse_ves_config


def test_default_config_loads(ves_config: VesConfig) -> None:
    assert ves_config.default_deadline_blocks == 30
    assert ves_config.blocks_per_minute == Decimal(6)
    assert ves_config.refund_accounts[Party.CLIENT] == "0xc11e00"
    assert ves_config.rate_of("ycoin") == Decimal(2)
    assert ves_config.rate_of("qcoin") is None
    assert ves_config.owner_of("a1") is Party.CLIENT


@pytest.mark.parametrize(
    "data",
    [
        {"default_deadline_blocks": 0},
        {"rates": {"xcoin": 0}},
        {"reachable_chains": ["ChainX"], "isc_chain": "ChainN"},
        {"unknown_field": 1},
    ],
)
def test_invalid_config_is_rejected(data: dict[str, object]) -> None:
    with pytest.raises(ConfigError) as excinfo:
        parse_ves_config(data)
    assert excinfo.value.code == "E_CONFIG_INVALID"


def test_missing_and_malformed_files(tmp_path: Path) -> None:
    with pytest.raises(ConfigError):
        load_ves_config(tmp_path / "absent.yaml")
    bad = tmp_path / "bad.yaml"
    bad.write_text("relay_accounts: [unclosed", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_ves_config(bad)
