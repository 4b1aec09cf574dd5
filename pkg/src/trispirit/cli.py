"""Command-line entry point.

Subcommands map one-to-one onto the evaluation artefacts: ``simulate`` runs
one system variant, ``ablate`` produces the variant table plus the latency
attribution, ``sweep`` the threshold sensitivity grids, ``report``
re-summarises stored records, and ``gen-tasks`` emits the task set. Every
output embeds the fully resolved configuration, and identical
configurations reproduce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Mapping, Sequence

from .habit import HabitWeights
from .routing import Thresholds
from .sim import (
    CostModel,
    SystemVariant,
    ablation_suite,
    run_variant,
    sensitivity_sweep,
    summarize,
)
from .sim.records_io import (
    read_records_jsonl,
    write_ablation_csv,
    write_ablation_json,
    write_attribution_csv,
    write_records_jsonl,
    write_summary_csv,
    write_summary_json,
    write_sweep_csv,
    write_sweep_json,
)
from .workload import (
    ConfigurationError,
    DEFAULT_MIXTURE,
    RngStreams,
    presample_noise,
    sample_tasks,
    save_tasks,
)

__all__ = ["RunConfig", "run_cli", "main"]


@dataclass
class RunConfig:
    """Fully-resolved run configuration.

    Defaults reproduce the reference evaluation setup. Values load from a
    JSON config file and individual CLI flags override file values.
    """

    seed: int = 42
    bootstrap_seed: int = 99
    n: int = 2000
    mixture: tuple[float, float, float] = DEFAULT_MIXTURE
    tau_r: float = 0.25
    gamma_r: float = 0.30
    tau_a: float = 0.70
    gamma_a: float = 0.75
    habit_weights: tuple[float, float, float] = (0.4, 0.3, 0.3)
    habit_delta: float = 0.75
    cloud_calls: int = 1
    cost_overrides: dict = field(default_factory=dict)
    variant: str = SystemVariant.TS_FULL.value
    resamples: int = 2000
    out: str | None = None
    format: str = "both"

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["mixture"] = list(self.mixture)
        d["habit_weights"] = list(self.habit_weights)
        return d

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**doc)
        cfg.mixture = tuple(cfg.mixture)
        cfg.habit_weights = tuple(cfg.habit_weights)
        return cfg

    # Validation happens by constructing the real domain objects, so the
    # violated constraint is named by the raising type.
    def thresholds(self) -> Thresholds:
        return Thresholds(self.tau_r, self.gamma_r, self.tau_a, self.gamma_a)

    def weights(self) -> HabitWeights:
        w_f, w_c, w_s = self.habit_weights
        return HabitWeights(w_f=w_f, w_c=w_c, w_s=w_s, delta=self.habit_delta)

    def cost_model(self) -> CostModel:
        model = CostModel(cloud_calls=self.cloud_calls)
        if self.cost_overrides:
            model = model.with_overrides(self.cost_overrides)
        return model

    def streams(self) -> RngStreams:
        return RngStreams(primary_seed=self.seed, bootstrap_seed=self.bootstrap_seed)

    def validate(self) -> None:
        if self.n < 1:
            raise ConfigurationError(f"n must be >= 1, got {self.n}")
        if self.format not in ("csv", "json", "both"):
            raise ConfigurationError(f"format must be csv, json or both, got {self.format!r}")
        SystemVariant(self.variant)
        self.thresholds()
        self.weights()
        self.cost_model()


_FLAGS: tuple[tuple[str, type, str], ...] = (
    ("seed", int, "primary RNG seed"),
    ("bootstrap-seed", int, "bootstrap RNG seed"),
    ("n", int, "number of tasks"),
    ("tau-r", float, "reflex latency-urgency threshold"),
    ("gamma-r", float, "reflex complexity threshold"),
    ("tau-a", float, "agent latency-urgency threshold"),
    ("gamma-a", float, "agent complexity threshold"),
    ("cloud-calls", int, "model calls charged to the cloud baseline (1 or 2)"),
    ("resamples", int, "bootstrap resample count"),
)


def _add_common(parser: argparse.ArgumentParser, with_variant: bool = True) -> None:
    parser.add_argument("--config", metavar="FILE", help="JSON config file")
    parser.add_argument("--out", metavar="DIR", help="output directory")
    parser.add_argument("--format", choices=("csv", "json", "both"))
    if with_variant:
        parser.add_argument(
            "--variant", choices=[v.value for v in SystemVariant], help="system variant"
        )
    for flag, ftype, help_text in _FLAGS:
        parser.add_argument(f"--{flag}", type=ftype, help=help_text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trispirit",
        description="Three-layer routing/habit architecture evaluation harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    _add_common(sub.add_parser("simulate", help="run one system variant"))
    _add_common(sub.add_parser("ablate", help="run all variants and the attribution"),
                with_variant=False)
    _add_common(sub.add_parser("sweep", help="threshold sensitivity grids"))
    _add_common(sub.add_parser("gen-tasks", help="emit the task set"),
                with_variant=False)
    report = sub.add_parser("report", help="re-summarise stored records")
    report.add_argument("records", help="records.jsonl produced by simulate")
    _add_common(report, with_variant=False)
    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    for flag, _type, _help in _FLAGS:
        attr = flag.replace("-", "_")
        value = getattr(args, attr, None)
        if value is not None:
            setattr(cfg, attr, value)
    for attr in ("out", "format", "variant"):
        value = getattr(args, attr, None)
        if value is not None:
            setattr(cfg, attr, value)
    cfg.validate()
    return cfg


def _out_dir(cfg: RunConfig, command: str) -> Path:
    out = Path(cfg.out) if cfg.out else Path("out") / f"{command}-{cfg.seed}"
    out.mkdir(parents=True, exist_ok=True)
    return out


def _emit(cfg: RunConfig, kind: str) -> bool:
    return cfg.format in (kind, "both")


def _cmd_gen_tasks(cfg: RunConfig) -> int:
    out = _out_dir(cfg, "gen-tasks")
    tasks = sample_tasks(cfg.n, cfg.mixture, cfg.streams())
    path = out / "tasks.tsv"
    save_tasks(tasks, path)
    counts = {code: sum(t.kind.code == code for t in tasks) for code in "ABC"}
    print(f"gen-tasks: wrote {len(tasks)} tasks {counts} -> {path}")
    return 0


def _workload(cfg: RunConfig):
    streams = cfg.streams()
    tasks = sample_tasks(cfg.n, cfg.mixture, streams)
    noise = presample_noise(cfg.n, rng=streams)
    return streams, tasks, noise


def _cmd_simulate(cfg: RunConfig) -> int:
    out = _out_dir(cfg, "simulate")
    streams, tasks, noise = _workload(cfg)
    variant = SystemVariant(cfg.variant)
    records = run_variant(tasks, variant, cfg.thresholds(), cfg.cost_model(), noise, streams)
    stats = summarize(records, cfg.resamples, cfg.bootstrap_seed)
    resolved = cfg.to_dict()

    write_records_jsonl(records, out / "records.jsonl", resolved)
    if _emit(cfg, "json"):
        write_summary_json(stats, out / "summary.json", resolved, cfg.variant)
    if _emit(cfg, "csv"):
        write_summary_csv({cfg.variant: stats}, out / "summary.csv", resolved)
    print(
        f"simulate[{cfg.variant}]: n={stats.n} "
        f"latency={stats.latency.mean:.1f}ms [{stats.latency.lo:.1f}, {stats.latency.hi:.1f}] "
        f"energy={stats.energy.mean:.2f}mJ calls={stats.calls.mean:.3f} "
        f"offline={stats.offline_pct:.1f}% -> {out}"
    )
    return 0


def _cmd_ablate(cfg: RunConfig) -> int:
    out = _out_dir(cfg, "ablate")
    streams, tasks, noise = _workload(cfg)
    result = ablation_suite(
        tasks, noise, cfg.thresholds(), cfg.cost_model(), streams,
        cfg.resamples, cfg.bootstrap_seed,
    )
    resolved = cfg.to_dict()
    if _emit(cfg, "csv"):
        write_ablation_csv(result, out / "ablation.csv", resolved)
        write_attribution_csv(result, out / "attribution.csv", resolved)
    if _emit(cfg, "json"):
        write_ablation_json(result, out / "ablation.json", resolved)
    for label, stats in result.summaries.items():
        print(
            f"ablate[{label}]: latency={stats.latency.mean:.1f}ms "
            f"energy={stats.energy.mean:.2f}mJ calls={stats.calls.mean:.3f} "
            f"offline={stats.offline_pct:.1f}%"
        )
    a = result.attribution
    print(
        f"ablate[attribution]: local={a.local_execution_ms:.0f}ms "
        f"reflex={a.reflex_ms:.1f}ms habit={a.habit_ms:.1f}ms "
        f"routing={a.routing_intelligence_ms:.2f}ms total={a.total_ms:.0f}ms -> {out}"
    )
    return 0


def _cmd_sweep(cfg: RunConfig) -> int:
    out = _out_dir(cfg, "sweep")
    streams, tasks, noise = _workload(cfg)
    cells = sensitivity_sweep(
        tasks, noise, cfg.cost_model(), SystemVariant(cfg.variant), streams,
        defaults=cfg.thresholds(),
    )
    resolved = cfg.to_dict()
    if _emit(cfg, "csv"):
        write_sweep_csv(cells, out / "sweep.csv", resolved)
    if _emit(cfg, "json"):
        write_sweep_json(cells, out / "sweep.json", resolved)
    worst = max(c.mean_latency_ms for c in cells)
    best = min(c.mean_latency_ms for c in cells)
    print(
        f"sweep[{cfg.variant}]: {len(cells)} cells "
        f"latency=[{best:.1f}, {worst:.1f}]ms -> {out}"
    )
    return 0


def _cmd_report(cfg: RunConfig, records_path: str) -> int:
    out = _out_dir(cfg, "report")
    records, stored = read_records_jsonl(records_path)
    if not records:
        raise ConfigurationError(f"no records found in {records_path}")
    # Reproduce the stored run's summary exactly when provenance is present.
    resamples = stored.get("resamples", cfg.resamples) if stored else cfg.resamples
    bseed = stored.get("bootstrap_seed", cfg.bootstrap_seed) if stored else cfg.bootstrap_seed
    label = stored.get("variant", "report") if stored else "report"
    stats = summarize(records, resamples, bseed)
    resolved = stored if stored else cfg.to_dict()
    if _emit(cfg, "json"):
        write_summary_json(stats, out / "summary.json", resolved, label)
    if _emit(cfg, "csv"):
        write_summary_csv({label: stats}, out / "summary.csv", resolved)
    print(
        f"report[{label}]: n={stats.n} latency={stats.latency.mean:.1f}ms "
        f"offline={stats.offline_pct:.1f}% -> {out}"
    )
    return 0


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors
        return int(exc.code or 0)

    try:
        cfg = _resolve_config(args)
        print("config: " + json.dumps(cfg.to_dict(), sort_keys=True))
        if args.command == "gen-tasks":
            return _cmd_gen_tasks(cfg)
        if args.command == "simulate":
            return _cmd_simulate(cfg)
        if args.command == "ablate":
            return _cmd_ablate(cfg)
        if args.command == "sweep":
            return _cmd_sweep(cfg)
        if args.command == "report":
            return _cmd_report(cfg, args.records)
        raise AssertionError(f"unhandled command {args.command!r}")
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    raise SystemExit(run_cli())
