"""Execution bounds that guarantee termination."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ExecutorLimits:
    """Bounds on exploration.

    loop_bound: max body entries per loop site per path (default 3)
    recursion_bound: max simultaneous activations per method (default 2)
    context_budget: cap on explored paths per entry point
    step_limit: per-path instruction safety cap
    """

    loop_bound: int = 3
    recursion_bound: int = 2
    context_budget: int = 4096
    step_limit: int = 1_000_000

    def __post_init__(self):
        if self.loop_bound < 1 or self.recursion_bound < 1 or self.context_budget < 1:
            raise ValueError("executor limits must be >= 1")

    def cache_key(self) -> tuple:
        return (self.loop_bound, self.recursion_bound, self.context_budget)
