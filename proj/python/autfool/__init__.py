"""Deterministic automata-fooling toolkit.

Thin re-export of the pybind11 core. The main operations are the LAP
rounder (`solve_unit` / `solve_real`), the Gale-Berlekamp pipeline
(`run_gb`), MAX-CUT SDP rounding (`round_maxcut`) and their exact oracles.
"""

from _autfool import (  # noqa: F401
    GuardError,
    LapSolution,
    GBResult,
    MaxcutResult,
    ValidationError,
    brute_force_maxcut,
    discrepancy,
    fool_table_automaton,
    gb_expected_weight_oracle,
    imbalance,
    lap_real_bound,
    lap_unit_bound,
    potential,
    round_maxcut,
    run_gb,
    set_worker_count,
    solve_real,
    solve_unit,
    star_product,
)

__all__ = [
    "GuardError",
    "LapSolution",
    "GBResult",
    "MaxcutResult",
    "ValidationError",
    "brute_force_maxcut",
    "discrepancy",
    "fool_table_automaton",
    "gb_expected_weight_oracle",
    "imbalance",
    "lap_real_bound",
    "lap_unit_bound",
    "potential",
    "round_maxcut",
    "run_gb",
    "set_worker_count",
    "solve_real",
    "solve_unit",
    "star_product",
]
