"""Residential demand-response load scheduling on a Tetris-like hour grid."""

__version__ = "0.1.0"

from .scenario import (
    CELL_KW,
    AppliancePowerProfile,
    ConsumerScenario,
    ScenarioError,
    Tariff,
    TariffBand,
    aggregate,
    load_scenario,
    packaged_scenario_path,
    to_blocks,
)
from .env import Action, EnvState, GridState, LoadBlock, SettleReport, render, reset, settle_block, step
from .billing import BillReport, bill_report, daily_cost, incremental_cost, price_at_hour
from .rewards import RewardBreakdown, RewardConfig, complete_lines, compute_reward, spread_term
from .agent import AgentConfig, DqnAgent, EvalResult, ExplorationSchedule, ReplayBuffer, TrainResult, Transition, epsilon_at, evaluate, train
from .oracle import InfeasibleError, Schedule, solve, verify

__all__ = [
    "CELL_KW",
    "AppliancePowerProfile",
    "ConsumerScenario",
    "ScenarioError",
    "Tariff",
    "TariffBand",
    "aggregate",
    "load_scenario",
    "packaged_scenario_path",
    "to_blocks",
    "Action",
    "EnvState",
    "GridState",
    "LoadBlock",
    "SettleReport",
    "render",
    "reset",
    "settle_block",
    "step",
    "BillReport",
    "bill_report",
    "daily_cost",
    "incremental_cost",
    "price_at_hour",
    "RewardBreakdown",
    "RewardConfig",
    "complete_lines",
    "compute_reward",
    "spread_term",
    "AgentConfig",
    "DqnAgent",
    "EvalResult",
    "ExplorationSchedule",
    "ReplayBuffer",
    "TrainResult",
    "Transition",
    "epsilon_at",
    "evaluate",
    "train",
    "InfeasibleError",
    "Schedule",
    "solve",
    "verify",
]
