"""Run configuration: budgets and search mode."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Budget:
    """Hard limits for enumeration and search.

    Exceeding any limit is a distinct outcome (a ``BudgetExceededError`` from
    enumerations, an ``unknown`` certificate from searches).
    """

    max_tree_size: int = 8          # enumerate_trees bound
    max_vertices: int = 24          # largest tree accepted by Hom enumeration
    max_hom: int = 200_000          # largest Hom-set materialized
    max_nodes: int = 20_000_000     # coloring-search assignment budget
    time_cap: float | None = None   # seconds, checked between search chunks

    def __post_init__(self):
        for name in ("max_tree_size", "max_vertices", "max_hom", "max_nodes"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.time_cap is not None and self.time_cap <= 0:
            raise ValueError("time_cap must be positive")


DEFAULT_BUDGET = Budget()

MODES = ("canonical", "fast")


@dataclass(frozen=True)
class RunConfig:
    """CLI-facing configuration: budgets plus reproducibility mode.

    In ``canonical`` mode searches return the lexicographically least witness
    coloring; ``fast`` mode may return any verified witness.
    """

    budget: Budget = DEFAULT_BUDGET
    mode: str = "canonical"
    output: str = "text"   # text | json | dot

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
