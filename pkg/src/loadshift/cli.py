"""Command-line interface.

Subcommands: train, evaluate, oracle, report, export-profiles, ablate.
Every run directory is self-describing: ``manifest.json`` captures each
effective hyperparameter, ``checkpoint.bin`` the learned network, and
``log.csv`` one row per training episode.  All randomness flows from the
--seed flag, so identical invocations produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .agent import AgentConfig, EpisodeLog, ExplorationSchedule, evaluate, train
from .billing import DAYS_PER_MONTH, bill_report, profile_kw
from .env import center_position
from .nn import NetworkConfig, load_checkpoint, save_checkpoint
from .nn.checkpoint import CheckpointError
from .nn.network import shallow_config
from .oracle import InfeasibleError, Schedule, schedule_from_assignments, solve, verify
from .rewards import RewardConfig
from .scenario import (
    CELL_KW,
    ConsumerScenario,
    ScenarioError,
    Tariff,
    aggregate,
    load_scenario,
    packaged_scenario_path,
    to_blocks,
)

OBJECTIVE_FLAGS = {"peak": "peak", "peak-cost": "peak_cost"}
SPREAD_FLAGS = {"var": "variance", "std": "stddev"}
ORACLE_FLAGS = {"peak": "min_peak", "cost": "min_cost", "peak-then-cost": "peak_then_cost"}
# Oracle objective used when a report compares against a trained run.
ORACLE_FOR_REWARD = {"peak": "min_peak", "peak_cost": "peak_then_cost"}
BUFFER_ABLATION_SIZES = (3000, 10000, 30000, 50000)


class CliError(Exception):
    """Operator-facing failure; rendered as a structured error line."""

    def __init__(self, category: str, message: str):
        super().__init__(message)
        self.category = category


def _fmt(value) -> str:
    return repr(float(value)) if isinstance(value, float) else str(value)


def _money(cents_per_day: float) -> float:
    return cents_per_day * DAYS_PER_MONTH / 100


def default_placement_path() -> Path:
    return packaged_scenario_path("default_placement.json")


def load_placement(path: str | Path) -> dict[str, dict[str, int]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise CliError("placement", f"{path}: {err}") from err
    if not isinstance(raw, dict):
        raise CliError("placement", f"{path}: top level must be an object")
    for cid, entries in raw.items():
        if not isinstance(entries, dict):
            raise CliError("placement", f"{path}: {cid}: expected an object")
        for name, start in entries.items():
            if not isinstance(start, int) or isinstance(start, bool):
                raise CliError("placement", f"{path}: {cid}.{name}: expected an integer hour")
    return raw


def baseline_assignments(
    consumer: ConsumerScenario,
    blocks,
    placement: dict[str, dict[str, int]],
) -> dict[str, int]:
    """Pre-optimization start hours: placement file entries, else the spawn column.

    Aggregate scenarios prefix appliance names with the consumer id; entries
    are looked up under that consumer's own id in the placement file.
    """
    assignments: dict[str, int] = {}
    for block in blocks:
        entry = placement.get(consumer.consumer_id, {}).get(block.name)
        if entry is None and ":" in block.name:
            prefix, bare = block.name.split(":", 1)
            entry = placement.get(prefix, {}).get(bare)
        assignments[block.name] = (
            entry if entry is not None else center_position(block.width)
        )
    return assignments


def _resolve_consumer(
    scenario_path: str | Path, consumer_id: str
) -> tuple[ConsumerScenario, Tariff]:
    consumers, tariff = load_scenario(scenario_path)
    if consumer_id == "all":
        return aggregate(consumers), tariff
    for consumer in consumers:
        if consumer.consumer_id == consumer_id:
            return consumer, tariff
    known = ", ".join(c.consumer_id for c in consumers)
    raise CliError("config", f"no consumer {consumer_id!r} in scenario (have: {known}, all)")


def write_schedule_csv(path: Path, schedule: Schedule) -> None:
    lines = [f"# quality: {schedule.quality}", "appliance,start_hour"]
    for name, start in sorted(schedule.assignments.items()):
        lines.append(f"{name},{start}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_schedule_csv(path: Path) -> tuple[dict[str, int], str]:
    quality = "unknown"
    assignments: dict[str, int] = {}
    lines = path.read_text(encoding="utf-8").splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            if "quality:" in line:
                quality = line.split("quality:", 1)[1].strip()
        elif line.strip():
            body.append(line)
    if not body or body[0] != "appliance,start_hour":
        raise CliError("io", f"{path}: missing schedule header")
    for line in body[1:]:
        name, _, start = line.partition(",")
        try:
            assignments[name] = int(start)
        except ValueError:
            raise CliError("io", f"{path}: bad start hour {start!r} for {name!r}") from None
    return assignments, quality


def write_profile_csv(path: Path, before_kw, after_kw) -> None:
    lines = ["hour,load_kw_before,load_kw_after"]
    for hour, (before, after) in enumerate(zip(before_kw, after_kw)):
        lines.append(f"{hour},{_fmt(float(before))},{_fmt(float(after))}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_log_csv(path: Path, rows: list[EpisodeLog]) -> None:
    lines = ["episode,steps,total_reward,peak_kw,daily_cost_cents,epsilon"]
    for row in rows:
        lines.append(
            ",".join(
                (
                    str(row.episode),
                    str(row.steps),
                    _fmt(row.total_reward),
                    _fmt(row.peak_kw),
                    _fmt(row.daily_cost_cents),
                    _fmt(row.epsilon),
                )
            )
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _network_for_depth(depth: str) -> NetworkConfig:
    if depth == "deep":
        return NetworkConfig()
    if depth == "shallow":
        return shallow_config()
    raise CliError("config", f"unknown net depth {depth!r}")


def _agent_config_from_args(args) -> AgentConfig:
    return AgentConfig(
        episodes=args.episodes,
        seed=args.seed,
        buffer_capacity=args.buffer_size,
        network=_network_for_depth(args.net_depth),
    )


def _manifest(args, scenario_path: Path, reward: RewardConfig, agent_cfg: AgentConfig) -> dict:
    return {
        "scenario": str(scenario_path),
        "consumer": args.consumer,
        "net_depth": args.net_depth,
        "reward": {
            "alpha1": reward.alpha1,
            "alpha2": reward.alpha2,
            "alpha3": reward.alpha3,
            "alpha4": reward.alpha4,
            "spread_kind": reward.spread_kind,
            "objective": reward.objective,
        },
        "agent": {
            "episodes": agent_cfg.episodes,
            "seed": agent_cfg.seed,
            "gamma": agent_cfg.gamma,
            "batch_size": agent_cfg.batch_size,
            "buffer_capacity": agent_cfg.buffer_capacity,
            "target_sync_steps": agent_cfg.target_sync_steps,
            "learning_rate": agent_cfg.learning_rate,
            "rmsprop_decay": agent_cfg.rmsprop_decay,
            "rmsprop_eps": agent_cfg.rmsprop_eps,
            "double_dqn": agent_cfg.double_dqn,
            "eps_start": agent_cfg.exploration.start,
            "eps_end": agent_cfg.exploration.end,
            "eps_decay_steps": agent_cfg.exploration.decay_steps,
            "max_height": agent_cfg.max_height,
            "lateral_move_cap": agent_cfg.lateral_move_cap,
            "eval_every": agent_cfg.eval_every,
        },
        "network": agent_cfg.network.to_dict(),
    }


def _configs_from_manifest(manifest: dict) -> tuple[RewardConfig, AgentConfig]:
    r = manifest["reward"]
    a = manifest["agent"]
    reward = RewardConfig(
        alpha1=r["alpha1"],
        alpha2=r["alpha2"],
        alpha3=r["alpha3"],
        alpha4=r["alpha4"],
        spread_kind=r["spread_kind"],
        objective=r["objective"],
    )
    agent_cfg = AgentConfig(
        episodes=a["episodes"],
        seed=a["seed"],
        gamma=a["gamma"],
        batch_size=a["batch_size"],
        buffer_capacity=a["buffer_capacity"],
        target_sync_steps=a["target_sync_steps"],
        learning_rate=a["learning_rate"],
        rmsprop_decay=a["rmsprop_decay"],
        rmsprop_eps=a["rmsprop_eps"],
        double_dqn=a["double_dqn"],
        exploration=ExplorationSchedule(
            start=a["eps_start"], end=a["eps_end"], decay_steps=a["eps_decay_steps"]
        ),
        max_height=a["max_height"],
        lateral_move_cap=a["lateral_move_cap"],
        eval_every=a["eval_every"],
        network=NetworkConfig(**manifest["network"]),
    )
    return reward, agent_cfg


def _read_manifest(run_dir: Path) -> dict:
    path = run_dir / "manifest.json"
    if not path.is_file():
        raise CliError("io", f"{run_dir}: no manifest.json (is this a run directory?)")
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def cmd_train(args) -> int:
    scenario_path = Path(args.scenario).resolve()
    consumer, tariff = _resolve_consumer(scenario_path, args.consumer)
    reward = RewardConfig(
        spread_kind=SPREAD_FLAGS[args.spread], objective=OBJECTIVE_FLAGS[args.objective]
    )
    agent_cfg = _agent_config_from_args(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    result = train(consumer, tariff, reward, agent_cfg)
    agent = result.agent

    manifest = _manifest(args, scenario_path, reward, agent_cfg)
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    write_log_csv(out / "log.csv", result.log)
    save_checkpoint(
        out / "checkpoint.bin",
        agent.policy_net,
        optimizer=agent.optimizer,
        rng_state=agent.rng.bit_generator.state,
        extra={"consumer": args.consumer, "steps_done": agent.steps_done},
    )
    last = result.log[-1] if result.log else None
    print(f"trained {agent_cfg.episodes} episodes ({agent.steps_done} steps) -> {out}")
    if last is not None:
        print(
            f"last episode: peak {last.peak_kw} kW, "
            f"daily cost {last.daily_cost_cents} cents, epsilon {last.epsilon:.4f}"
        )
    if result.best_episode is not None:
        print(
            f"kept policy from episode {result.best_episode}: "
            f"greedy peak {result.best_peak_kw} kW, "
            f"daily cost {result.best_daily_cost_cents} cents"
        )
    return 0


def _load_run(run_dir: Path):
    manifest = _read_manifest(run_dir)
    reward, agent_cfg = _configs_from_manifest(manifest)
    consumer, tariff = _resolve_consumer(manifest["scenario"], manifest["consumer"])
    ckpt_path = run_dir / "checkpoint.bin"
    if not ckpt_path.is_file():
        raise CliError("io", f"{run_dir}: no checkpoint.bin")
    checkpoint = load_checkpoint(ckpt_path)
    network = checkpoint.build_network()
    return manifest, reward, agent_cfg, consumer, tariff, network


def cmd_evaluate(args) -> int:
    run_dir = Path(args.run)
    manifest, _, agent_cfg, consumer, tariff, network = _load_run(run_dir)
    result = evaluate(
        network,
        consumer,
        tariff,
        max_height=agent_cfg.max_height,
        lateral_move_cap=agent_cfg.lateral_move_cap,
    )
    if not result.success:
        raise CliError("evaluation", "greedy rollout overflowed the grid cap")
    out = Path(args.out) if args.out else run_dir
    out.mkdir(parents=True, exist_ok=True)
    write_schedule_csv(out / "schedule.csv", result.schedule)
    bill = bill_report(result.profile, tariff)
    with open(out / "eval.json", "w", encoding="utf-8") as fh:
        json.dump(
            {
                "consumer": manifest["consumer"],
                "success": result.success,
                "steps": result.steps,
                "peak_kw": result.peak_kw,
                "daily_cost_cents": result.daily_cost_cents,
                "monthly_cost_dollars": bill.monthly_cost_dollars,
                "assignments": result.schedule.assignments,
            },
            fh,
            indent=2,
        )
        fh.write("\n")
    print(
        f"{manifest['consumer']}: peak {result.peak_kw} kW, "
        f"daily {result.daily_cost_cents} cents, monthly ${bill.monthly_cost_dollars:.2f}"
    )
    return 0


def cmd_oracle(args) -> int:
    scenario_path = Path(args.scenario).resolve()
    consumer, tariff = _resolve_consumer(scenario_path, args.consumer)
    base, blocks = to_blocks(consumer)
    schedule = solve(base, blocks, ORACLE_FLAGS[args.objective], tariff)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_schedule_csv(out / "schedule.csv", schedule)
    print(
        f"{args.consumer} {args.objective}: peak {schedule.peak_kw} kW, "
        f"daily {schedule.daily_cost_cents} cents ({schedule.quality})"
    )
    return 0


def _verified_eval(run_dir: Path):
    """Re-evaluate a run's checkpoint and verify the schedule before reporting."""
    manifest, reward, agent_cfg, consumer, tariff, network = _load_run(run_dir)
    result = evaluate(
        network,
        consumer,
        tariff,
        max_height=agent_cfg.max_height,
        lateral_move_cap=agent_cfg.lateral_move_cap,
    )
    if not result.success:
        raise CliError("verification", f"{run_dir}: greedy rollout overflowed the grid cap")
    base, blocks = to_blocks(consumer)
    ok, metrics = verify(result.schedule, base, blocks, tariff, agent_cfg.max_height)
    if not ok:
        raise CliError("verification", f"{run_dir}: {'; '.join(metrics['mismatches'])}")
    stored = run_dir / "schedule.csv"
    if stored.is_file():
        assignments, _ = read_schedule_csv(stored)
        if assignments != result.schedule.assignments:
            raise CliError(
                "verification", f"{run_dir}: stored schedule.csv disagrees with the checkpoint"
            )
    return manifest, reward, consumer, tariff, result


def cmd_report(args) -> int:
    placement = load_placement(args.placement or default_placement_path())
    rows = []
    profiles_before = []
    profiles_oracle = []
    profiles_rl = []
    for run in args.runs:
        run_dir = Path(run)
        manifest, reward, consumer, tariff, result = _verified_eval(run_dir)
        base, blocks = to_blocks(consumer)
        before = schedule_from_assignments(
            base, blocks, baseline_assignments(consumer, blocks, placement), tariff, "baseline"
        )
        oracle_schedule = solve(base, blocks, ORACLE_FOR_REWARD[reward.objective], tariff)
        for schedule in (before, oracle_schedule):
            ok, metrics = verify(schedule, base, blocks, tariff)
            if not ok:
                raise CliError("verification", f"{run_dir}: {'; '.join(metrics['mismatches'])}")
        rows.append(
            {
                "consumer": manifest["consumer"],
                "bill_before": _money(before.daily_cost_cents),
                "bill_oracle": _money(oracle_schedule.daily_cost_cents),
                "bill_rl": _money(result.daily_cost_cents),
                "peak_before_kw": before.peak_kw,
                "peak_oracle_kw": oracle_schedule.peak_kw,
                "peak_rl_kw": result.peak_kw,
                "oracle_quality": oracle_schedule.quality,
            }
        )
        profiles_before.append(before.resulting_profile)
        profiles_oracle.append(oracle_schedule.resulting_profile)
        profiles_rl.append(result.profile)

    def total_peak(profiles) -> float:
        summed = np.sum(np.array(profiles), axis=0)
        return float(summed.max() * CELL_KW)

    all_row = {
        "consumer": "all",
        "bill_before": sum(r["bill_before"] for r in rows),
        "bill_oracle": sum(r["bill_oracle"] for r in rows),
        "bill_rl": sum(r["bill_rl"] for r in rows),
        "peak_before_kw": total_peak(profiles_before),
        "peak_oracle_kw": total_peak(profiles_oracle),
        "peak_rl_kw": total_peak(profiles_rl),
        "oracle_quality": "-",
    }
    rows.append(all_row)

    header = [
        "consumer",
        "bill_before",
        "bill_oracle",
        "bill_rl",
        "savings_oracle",
        "savings_rl",
        "peak_before_kw",
        "peak_oracle_kw",
        "peak_rl_kw",
        "oracle_quality",
    ]
    table = []
    for r in rows:
        table.append(
            [
                r["consumer"],
                f"{r['bill_before']:.2f}",
                f"{r['bill_oracle']:.2f}",
                f"{r['bill_rl']:.2f}",
                f"{r['bill_before'] - r['bill_oracle']:.2f}",
                f"{r['bill_before'] - r['bill_rl']:.2f}",
                _fmt(r["peak_before_kw"]),
                _fmt(r["peak_oracle_kw"]),
                _fmt(r["peak_rl_kw"]),
                r["oracle_quality"],
            ]
        )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_lines = [",".join(header)] + [",".join(row) for row in table]
    (out / "report.csv").write_text("\n".join(csv_lines) + "\n", encoding="utf-8")
    widths = [max(len(h), *(len(row[i]) for row in table)) for i, h in enumerate(header)]
    txt_lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header))]
    for row in table:
        txt_lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    text = "\n".join(txt_lines) + "\n"
    (out / "report.txt").write_text(text, encoding="utf-8")
    print(text, end="")
    return 0


def cmd_export_profiles(args) -> int:
    run_dir = Path(args.run)
    manifest, _, agent_cfg, consumer, tariff, network = _load_run(run_dir)
    placement = load_placement(args.placement or default_placement_path())
    base, blocks = to_blocks(consumer)
    before = schedule_from_assignments(
        base, blocks, baseline_assignments(consumer, blocks, placement), tariff, "baseline"
    )
    result = evaluate(
        network,
        consumer,
        tariff,
        max_height=agent_cfg.max_height,
        lateral_move_cap=agent_cfg.lateral_move_cap,
    )
    if not result.success:
        raise CliError("evaluation", "greedy rollout overflowed the grid cap")
    out = Path(args.out) if args.out else run_dir
    out.mkdir(parents=True, exist_ok=True)
    write_profile_csv(
        out / "profile.csv",
        profile_kw(before.resulting_profile),
        profile_kw(result.profile),
    )
    print(f"wrote {out / 'profile.csv'}")
    return 0


def cmd_ablate(args) -> int:
    scenario_path = Path(args.scenario).resolve()
    consumer, tariff = _resolve_consumer(scenario_path, args.consumer)
    placement = load_placement(args.placement or default_placement_path())
    base, blocks = to_blocks(consumer)
    before = schedule_from_assignments(
        base, blocks, baseline_assignments(consumer, blocks, placement), tariff, "baseline"
    )
    reward = RewardConfig(
        spread_kind=SPREAD_FLAGS[args.spread], objective=OBJECTIVE_FLAGS[args.objective]
    )
    if args.axis == "net-depth":
        variants = [("deep", {"network": _network_for_depth("deep")}),
                    ("shallow", {"network": _network_for_depth("shallow")})]
    else:
        variants = [(str(size), {"buffer_capacity": size}) for size in BUFFER_ABLATION_SIZES]

    rows = []
    for label, overrides in variants:
        agent_cfg = replace(
            AgentConfig(episodes=args.episodes, seed=args.seed), **overrides
        )
        result = train(consumer, tariff, reward, agent_cfg)
        eval_result = evaluate(
            result.agent.policy_net,
            consumer,
            tariff,
            max_height=agent_cfg.max_height,
            lateral_move_cap=agent_cfg.lateral_move_cap,
        )
        rows.append(
            {
                "variant": label,
                "success": eval_result.success,
                "peak_kw": eval_result.peak_kw,
                "bill_after": _money(eval_result.daily_cost_cents),
                "savings": _money(before.daily_cost_cents - eval_result.daily_cost_cents),
            }
        )
    header = [args.axis, "success", "peak_kw", "bill_after", "savings"]
    table = [
        [
            r["variant"],
            str(r["success"]).lower(),
            _fmt(r["peak_kw"]),
            f"{r['bill_after']:.2f}",
            f"{r['savings']:.2f}",
        ]
        for r in rows
    ]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_lines = [",".join(header)] + [",".join(row) for row in table]
    (out / "ablation.csv").write_text("\n".join(csv_lines) + "\n", encoding="utf-8")
    widths = [max(len(h), *(len(row[i]) for row in table)) for i, h in enumerate(header)]
    txt_lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header))]
    for row in table:
        txt_lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    text = "\n".join(txt_lines) + "\n"
    (out / "ablation.txt").write_text(text, encoding="utf-8")
    print(text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loadshift",
        description="Tetris-style load scheduling: train, evaluate, and compare schedules.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scenario_args(p):
        p.add_argument(
            "--scenario",
            default=str(packaged_scenario_path()),
            help="scenario JSON (default: packaged five-consumer scenario)",
        )
        p.add_argument("--consumer", required=True, help="consumer id, or 'all' for the aggregate")

    p_train = sub.add_parser("train", help="train an agent and write a run directory")
    add_scenario_args(p_train)
    p_train.add_argument("--objective", choices=sorted(OBJECTIVE_FLAGS), default="peak")
    p_train.add_argument("--spread", choices=sorted(SPREAD_FLAGS), default="var")
    p_train.add_argument("--episodes", type=int, default=5000)
    p_train.add_argument("--seed", type=int, default=0)
    p_train.add_argument("--buffer-size", type=int, default=30000)
    p_train.add_argument("--net-depth", choices=("deep", "shallow"), default="deep")
    p_train.add_argument("--out", required=True, help="run directory to create")
    p_train.set_defaults(func=cmd_train)

    p_eval = sub.add_parser("evaluate", help="greedy rollout of a trained run")
    p_eval.add_argument("--run", required=True, help="run directory from train")
    p_eval.add_argument("--out", help="output directory (default: the run directory)")
    p_eval.set_defaults(func=cmd_evaluate)

    p_oracle = sub.add_parser("oracle", help="exact search baseline schedule")
    add_scenario_args(p_oracle)
    p_oracle.add_argument("--objective", choices=sorted(ORACLE_FLAGS), default="peak")
    p_oracle.add_argument("--out", required=True)
    p_oracle.set_defaults(func=cmd_oracle)

    p_report = sub.add_parser("report", help="before/oracle/RL comparison table")
    p_report.add_argument("--runs", nargs="+", required=True, help="run directories")
    p_report.add_argument("--placement", help="baseline placement JSON (default: packaged)")
    p_report.add_argument("--out", required=True)
    p_report.set_defaults(func=cmd_report)

    p_export = sub.add_parser("export-profiles", help="before/after load profile CSV")
    p_export.add_argument("--run", required=True)
    p_export.add_argument("--placement", help="baseline placement JSON (default: packaged)")
    p_export.add_argument("--out", help="output directory (default: the run directory)")
    p_export.set_defaults(func=cmd_export_profiles)

    p_ablate = sub.add_parser("ablate", help="sweep network depth or buffer size")
    add_scenario_args(p_ablate)
    p_ablate.add_argument("--axis", choices=("net-depth", "buffer-size"), required=True)
    p_ablate.add_argument("--objective", choices=sorted(OBJECTIVE_FLAGS), default="peak-cost")
    p_ablate.add_argument("--spread", choices=sorted(SPREAD_FLAGS), default="var")
    p_ablate.add_argument("--episodes", type=int, default=5000)
    p_ablate.add_argument("--seed", type=int, default=0)
    p_ablate.add_argument("--placement", help="baseline placement JSON (default: packaged)")
    p_ablate.add_argument("--out", required=True)
    p_ablate.set_defaults(func=cmd_ablate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as err:
        print(f"error: {err.category}: {err}", file=sys.stderr)
        return 1
    except ScenarioError as err:
        print(f"error: scenario: {err}", file=sys.stderr)
        return 1
    except InfeasibleError as err:
        print(f"error: infeasible: {err}", file=sys.stderr)
        return 1
    except CheckpointError as err:
        print(f"error: checkpoint: {err}", file=sys.stderr)
        return 1
    except FileNotFoundError as err:
        print(f"error: io: {err}", file=sys.stderr)
        return 1
    except ValueError as err:
        print(f"error: config: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
