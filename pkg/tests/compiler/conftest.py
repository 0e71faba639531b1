from __future__ import annotations

from pathlib import Path

import pytest

from src.core.models import Party
from src.domain.compiler import (
    AccountRef,
    PaymentPayload,
    SessionParams,
    Tdg,
    TransactionWrapper,
    VesConfig,
    WrapperMeta,
    load_ves_config,
)
from src.domain.hsl import ValidatedProgram, load_interfaces, parse_hsl, validate

PROJECT_ROOT = Path(__file__).resolve().parents[2]


@pytest.fixture()
def ves_config() -> VesConfig:
    return load_ves_config(PROJECT_ROOT / "data" / "config" / "ves.yaml")


def validated_from(directory: Path, name: str) -> ValidatedProgram:
    program = parse_hsl((directory / name).read_text(encoding="utf-8"))
    return validate(program, load_interfaces(directory, program.import_files))


@pytest.fixture()
def option_validated(fixtures_dir: Path) -> ValidatedProgram:
    return validated_from(fixtures_dir / "option", "option.hsl")


def make_tdg(transfers: list[tuple[Party, int]], edges: list[tuple[int, int]]) -> Tdg:
    """Build a bare Tdg; each transfer is (originator, amt) paid to the counterpart."""
    wrappers = []
    for seq, (origin, amt) in enumerate(transfers, start=1):
        wrappers.append(
            TransactionWrapper(
                from_=AccountRef(chain="ChainX", address=f"0x{seq:02x}", name=f"s{seq}", owner=origin),
                to=AccountRef(chain="ChainX", address=f"0x{seq:02x}ff", name=f"r{seq}", owner=origin.counterpart),
                seq=seq,
                meta=WrapperMeta(
                    amt=amt,
                    dst="0xd5",
                    payload=PaymentPayload(value=max(amt, 1), unit="xcoin"),
                    deadline_blocks=5,
                    chain="ChainX",
                    op=f"op{seq}",
                ),
            )
        )
    return Tdg(
        wrappers=tuple(wrappers),
        edges=tuple(sorted(edges)),
        session=SessionParams(isc_chain="ChainN", isc_unit="ncoin", default_deadline_blocks=30),
    )
