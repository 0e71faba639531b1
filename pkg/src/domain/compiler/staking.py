"""Committable subsets of a Tdg and the per-party stake requirement."""
from __future__ import annotations

from typing import Iterator

import networkx as nx

from src.core.errors import CompileError
from src.core.models import Party

from .tdg import Tdg

DEFAULT_CAP = 20


def committable_subsets(tdg: Tdg, *, cap: int = DEFAULT_CAP) -> Iterator[frozenset[int]]:
    """Yield every down-closed subset of the precedence DAG, the empty set first."""
    if len(tdg.wrappers) > cap:
        raise CompileError(
            "E_CAP_EXCEEDED",
            f"{len(tdg.wrappers)} wrappers exceed the enumeration cap of {cap}",
            details={"wrappers": len(tdg.wrappers), "cap": cap},
        )
    graph = tdg.graph()
    order = list(nx.lexicographical_topological_sort(graph))
    preds = {node: frozenset(graph.predecessors(node)) for node in order}

    def extend(index: int, chosen: frozenset[int]) -> Iterator[frozenset[int]]:
        if index == len(order):
            yield chosen
            return
        node = order[index]
        yield from extend(index + 1, chosen)
        if preds[node] <= chosen:
            yield from extend(index + 1, chosen | {node})

    yield from extend(0, frozenset())


def subset_balance(tdg: Tdg, subset: frozenset[int], party: Party) -> int:
    """Incoming minus outgoing amt for ``party`` over ``subset``."""
    total = 0
    for seq in subset:
        wrapper = tdg.wrapper(seq)
        if wrapper.destination is party:
            total += wrapper.meta.amt
        if wrapper.originator is party:
            total -= wrapper.meta.amt
    return total


def stake_requirement(tdg: Tdg, party: Party, *, cap: int = DEFAULT_CAP) -> int:
    """Largest net gain ``party`` can hold over any committable subset; never negative."""
    return max(subset_balance(tdg, subset, party) for subset in committable_subsets(tdg, cap=cap))


def stake_requirements(tdg: Tdg, *, cap: int = DEFAULT_CAP) -> dict[Party, int]:
    subsets = list(committable_subsets(tdg, cap=cap))
    return {party: max(subset_balance(tdg, subset, party) for subset in subsets) for party in Party}


__all__ = ["DEFAULT_CAP", "committable_subsets", "stake_requirement", "stake_requirements", "subset_balance"]
