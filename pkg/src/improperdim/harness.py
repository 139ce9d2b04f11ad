"""Experiment orchestration.

Detector dispatch on data matrices and dataset files, Monte Carlo sweeps
of detection probability versus sample count with reproducible per-trial
seeding, experiment plan files, and CSV curve emission.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

import numpy as np

from .detectors import (
    GlrtDiagnostics,
    ItcDiagnostics,
    glrt_full,
    glrt_reduced,
    mdl_itc_full,
    mdl_itc_reduced,
)
from .fileio import (
    FormatError,
    SCENARIO_FIELD_KEYS,
    format_scenario_fields,
    load_dataset,
    load_scenario_config,
    parse_float_list,
    parse_int,
    parse_int_list,
    parse_key_values,
    parse_name_list,
    require_key,
    scenario_fields,
    write_dataset,
)
from .simulate import ScenarioConfig, generate_scenario
from .stats import (
    DEFAULT_RCOND,
    as_data_matrix,
    circularity_coefficients,
    circularity_profile,
    sample_covariances,
)

__all__ = [
    "CSV_HEADER",
    "CurveRow",
    "DETECTOR_NAMES",
    "ExperimentPlan",
    "InfeasibleOptionsError",
    "default_r_max",
    "detect",
    "dump_scenario",
    "format_curve_csv",
    "format_detection_report",
    "format_plan",
    "load_plan",
    "parse_plan",
    "run_detection",
    "run_experiment",
    "run_montecarlo",
    "trial_seed",
]

DETECTOR_NAMES = ("itc_full", "itc_rr", "glrt_full", "glrt_rr")
CSV_HEADER = "detector,p_fa,M,trials,p_detect,mean_selected_rank"

_PLAN_ONLY_KEYS = frozenset({"M", "seed", "trials", "sample_counts", "detectors", "pfa_list", "r_max"})


class InfeasibleOptionsError(ValueError):
    """Requested options cannot be satisfied by the data (e.g. r_max >= M)."""


def default_r_max(sensor_count: int, snapshot_count: int) -> int:
    """Default maximum PCA rank: floor(M/3), capped at the channel count
    and at M - 1."""
    return min(snapshot_count // 3, sensor_count, snapshot_count - 1)


def detect(
    samples,
    detector: str,
    *,
    p_fa: float = 0.005,
    r_max: int | None = None,
    rcond: float = DEFAULT_RCOND,
    box_df: str = "derived",
):
    """Run one detector on a data matrix.

    Returns the detector's own result object (DetectionResult for the
    full-sample variants, ItcDiagnostics/GlrtDiagnostics for the
    reduced-rank ones); every result carries ``estimate``.
    """
    data = as_data_matrix(samples)
    channels, count = data.shape
    if detector not in DETECTOR_NAMES:
        raise ValueError(
            f"unknown detector '{detector}' (expected one of {', '.join(DETECTOR_NAMES)})"
        )
    if detector in ("itc_full", "glrt_full"):
        spectrum = circularity_coefficients(sample_covariances(data), rcond)
        if detector == "itc_full":
            return mdl_itc_full(spectrum)
        return glrt_full(spectrum, p_fa)
    rank_cap = default_r_max(channels, count) if r_max is None else int(r_max)
    if rank_cap >= count:
        raise InfeasibleOptionsError(
            f"r_max={rank_cap} must be smaller than the snapshot count M={count}"
        )
    if not 1 <= rank_cap <= channels:
        raise InfeasibleOptionsError(f"r_max={rank_cap} must lie in 1..m={channels}")
    profile = circularity_profile(data, rank_cap, rcond)
    if detector == "itc_rr":
        return mdl_itc_reduced(profile, rank_cap, count)
    return glrt_reduced(profile, rank_cap, p_fa, df_rule=box_df)


def run_detection(
    dataset_path,
    detector: str,
    *,
    p_fa: float = 0.005,
    r_max: int | None = None,
    rcond: float = DEFAULT_RCOND,
    box_df: str = "derived",
):
    """Load a dataset file and run one detector on it."""
    return detect(
        load_dataset(dataset_path), detector, p_fa=p_fa, r_max=r_max, rcond=rcond, box_df=box_df
    )


def format_detection_report(
    result, detector: str, channels: int, count: int, p_fa: float | None = None
) -> str:
    """Human-readable report: estimate, selected rank, diagnostic table."""
    head = f"detector: {detector}"
    if p_fa is not None:
        head += f" (p_fa={p_fa:g})"
    lines = [head, f"dataset: m={channels}, M={count}"]
    if detector in ("itc_full", "glrt_full") and count < 2 * channels:
        lines.append(
            "note: M < 2m snapshots; full-sample estimates are unreliable in this "
            "regime (rank deficiency forces sample circularity coefficients to 1), "
            "consider itc_rr or glrt_rr"
        )
    lines.append(f"estimated improper dimension: {result.estimate}")
    if getattr(result, "selected_rank", None) is not None:
        lines.append(f"selected PCA rank: {result.selected_rank}")
    if isinstance(result, ItcDiagnostics):
        lines.append("rank  d_hat     score")
        for rank in range(1, result.per_rank_argmin.size + 1):
            order = int(result.per_rank_argmin[rank - 1])
            lines.append(f"{rank:4d}  {order:5d}  {result.scores[rank - 1, order]: .6g}")
    elif isinstance(result, GlrtDiagnostics):
        lines.append("rank  d_hat  statistic  threshold")
        for rank in range(1, result.per_rank_stop.size + 1):
            stop = int(result.per_rank_stop[rank - 1])
            probe = min(stop, rank - 1)
            note = "" if stop < rank else "  (no order accepted)"
            lines.append(
                f"{rank:4d}  {stop:5d}  {result.statistics[rank - 1, probe]: .6g}"
                f"  {result.thresholds[rank - 1, probe]: .6g}{note}"
            )
    elif result.scores is not None:
        lines.append("order     score")
        for order, score in enumerate(result.scores):
            marker = "  *" if order == result.estimate else ""
            lines.append(f"{order:5d}  {score: .6g}{marker}")
    else:
        lines.append("order  statistic  threshold  verdict")
        for order in range(result.statistics.size):
            verdict = (
                "accept" if result.statistics[order] < result.thresholds[order] else "reject"
            )
            lines.append(
                f"{order:5d}  {result.statistics[order]: .6g}"
                f"  {result.thresholds[order]: .6g}  {verdict}"
            )
        if result.estimate == result.statistics.size:
            lines.append("(every order rejected; estimate saturates at m)")
    return "\n".join(lines)


@dataclass(frozen=True)
class ExperimentPlan:
    """Monte Carlo experiment: a scenario template swept over sample counts.

    ``r_max`` fixes the maximum PCA rank of the reduced-rank detectors;
    None applies the floor(M/3) rule per sample count. The scenario
    template's snapshot count and seed are normalized (they are overridden
    per point / per trial anyway), which makes plan serialization
    round-trip exactly.
    """

    scenario: ScenarioConfig
    sample_counts: tuple[int, ...]
    trials: int
    detectors: tuple[str, ...]
    p_fa_list: tuple[float, ...]
    base_seed: int
    r_max: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "sample_counts", tuple(int(v) for v in self.sample_counts))
        object.__setattr__(self, "detectors", tuple(self.detectors))
        object.__setattr__(self, "p_fa_list", tuple(float(v) for v in self.p_fa_list))
        if not self.sample_counts:
            raise ValueError("sample_counts must not be empty")
        if any(b <= a for a, b in zip(self.sample_counts, self.sample_counts[1:])):
            raise ValueError("sample_counts must be strictly increasing")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.detectors:
            raise ValueError("at least one detector is required")
        for name in self.detectors:
            if name not in DETECTOR_NAMES:
                raise ValueError(f"unknown detector '{name}'")
        if len(set(self.detectors)) != len(self.detectors):
            raise ValueError("duplicate detector")
        for value in self.p_fa_list:
            if not 0.0 < value < 1.0:
                raise ValueError("p_fa values must lie strictly between 0 and 1")
        if any(name.startswith("glrt") for name in self.detectors) and not self.p_fa_list:
            raise ValueError("glrt detectors require a nonempty pfa_list")
        if self.r_max is not None and int(self.r_max) < 1:
            raise ValueError("r_max must be positive")
        if not 0 <= self.base_seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        object.__setattr__(
            self,
            "scenario",
            replace(self.scenario, snapshot_count=self.sample_counts[0], seed=self.base_seed),
        )


def parse_plan(text: str) -> ExperimentPlan:
    """Parse experiment plan text into an ExperimentPlan.

    Uses the scenario keys plus trials, sample_counts, detectors,
    pfa_list (required when a glrt detector is listed), optional r_max,
    and seed; an M key is accepted but ignored (sample_counts drives the
    sweep).
    """
    entries = parse_key_values(text)
    unknown = set(entries) - SCENARIO_FIELD_KEYS - _PLAN_ONLY_KEYS
    if unknown:
        raise FormatError(f"unknown key(s): {', '.join(sorted(unknown))}")
    sensor_count, angles, sources, noise = scenario_fields(entries)
    sample_counts = parse_int_list("sample_counts", require_key(entries, "sample_counts"))
    trials = parse_int("trials", require_key(entries, "trials"))
    detectors = parse_name_list("detectors", require_key(entries, "detectors"))
    p_fa_list = parse_float_list("pfa_list", entries.get("pfa_list", ""))
    r_max = parse_int("r_max", entries["r_max"]) if "r_max" in entries else None
    seed = parse_int("seed", require_key(entries, "seed"))
    if not sample_counts:
        raise FormatError("sample_counts must not be empty")
    try:
        scenario = ScenarioConfig(sensor_count, angles, sources, noise, sample_counts[0], seed)
        return ExperimentPlan(scenario, sample_counts, trials, detectors, p_fa_list, seed, r_max)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_plan(plan: ExperimentPlan) -> str:
    """Serialize an ExperimentPlan; parse_plan round-trips it."""
    lines = format_scenario_fields(plan.scenario)
    lines.append(f"trials = {plan.trials}")
    lines.append(f"sample_counts = {', '.join(str(v) for v in plan.sample_counts)}")
    lines.append(f"detectors = {', '.join(plan.detectors)}")
    if plan.p_fa_list:
        lines.append(f"pfa_list = {', '.join(repr(v) for v in plan.p_fa_list)}")
    if plan.r_max is not None:
        lines.append(f"r_max = {plan.r_max}")
    lines.append(f"seed = {plan.base_seed}")
    return "\n".join(lines) + "\n"


def load_plan(path) -> ExperimentPlan:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_plan(handle.read())


@dataclass(frozen=True)
class CurveRow:
    """One Monte Carlo summary point: probability of exactly recovering
    the true improper count."""

    detector: str
    p_fa: float | None
    sample_count: int
    trials: int
    p_detect: float
    mean_selected_rank: float | None


def trial_seed(base_seed: int, detector_index: int, sample_count: int, trial_index: int) -> int:
    """Derived 64-bit seed for one trial.

    A pure mixing hash of its arguments, so trials are reproducible in any
    execution order (or concurrently) and per-detector streams never
    collide.
    """
    mixer = np.random.SeedSequence(
        [int(base_seed), int(detector_index), int(sample_count), int(trial_index)]
    )
    return int(mixer.generate_state(1, np.uint64)[0])


def _resolved_r_max(plan: ExperimentPlan, sample_count: int) -> int:
    rank_cap = (
        plan.r_max
        if plan.r_max is not None
        else default_r_max(plan.scenario.sensor_count, sample_count)
    )
    if rank_cap >= sample_count:
        raise InfeasibleOptionsError(
            f"r_max={rank_cap} must be smaller than the sample count M={sample_count}"
        )
    if not 1 <= rank_cap <= plan.scenario.sensor_count:
        raise InfeasibleOptionsError(
            f"r_max={rank_cap} must lie in 1..m={plan.scenario.sensor_count}"
        )
    return rank_cap


def run_experiment(plan: ExperimentPlan, box_df: str = "derived") -> list[CurveRow]:
    """Run every (detector, p_fa, M) point of the plan.

    A detection counts as a success only when the estimate equals the true
    improper source count exactly. Results are independent of detector
    ordering in the plan because per-trial seeds hash the canonical
    detector index.
    """
    true_dim = sum(1 for source in plan.scenario.sources if source.circularity > 0.0)
    cells: dict[tuple, CurveRow] = {}
    for detector in plan.detectors:
        detector_index = DETECTOR_NAMES.index(detector)
        pfas: tuple[float | None, ...] = (
            plan.p_fa_list if detector.startswith("glrt") else (None,)
        )
        reduced = detector.endswith("_rr")
        for count in plan.sample_counts:
            rank_cap = _resolved_r_max(plan, count) if reduced else None
            hits = dict.fromkeys(pfas, 0)
            rank_totals = dict.fromkeys(pfas, 0)
            for trial in range(plan.trials):
                config = replace(
                    plan.scenario,
                    snapshot_count=count,
                    seed=trial_seed(plan.base_seed, detector_index, count, trial),
                )
                data = generate_scenario(config)
                if detector == "itc_full":
                    outcome = mdl_itc_full(circularity_coefficients(sample_covariances(data)))
                    hits[None] += outcome.estimate == true_dim
                elif detector == "glrt_full":
                    spectrum = circularity_coefficients(sample_covariances(data))
                    for p_fa in pfas:
                        hits[p_fa] += glrt_full(spectrum, p_fa).estimate == true_dim
                elif detector == "itc_rr":
                    profile = circularity_profile(data, rank_cap)
                    outcome = mdl_itc_reduced(profile, rank_cap, count)
                    hits[None] += outcome.estimate == true_dim
                    rank_totals[None] += outcome.selected_rank
                else:
                    profile = circularity_profile(data, rank_cap)
                    for p_fa in pfas:
                        outcome = glrt_reduced(profile, rank_cap, p_fa, df_rule=box_df)
                        hits[p_fa] += outcome.estimate == true_dim
                        rank_totals[p_fa] += outcome.selected_rank
            for p_fa in pfas:
                cells[(detector, p_fa, count)] = CurveRow(
                    detector=detector,
                    p_fa=p_fa,
                    sample_count=count,
                    trials=plan.trials,
                    p_detect=hits[p_fa] / plan.trials,
                    mean_selected_rank=rank_totals[p_fa] / plan.trials if reduced else None,
                )
    rows = []
    for detector in plan.detectors:
        pfas = plan.p_fa_list if detector.startswith("glrt") else (None,)
        for p_fa in pfas:
            for count in plan.sample_counts:
                rows.append(cells[(detector, p_fa, count)])
    return rows


def format_curve_csv(rows) -> str:
    """CSV text with the fixed header and one line per curve row."""
    lines = [CSV_HEADER]
    for row in rows:
        p_fa = "" if row.p_fa is None else f"{row.p_fa:g}"
        rank = "" if row.mean_selected_rank is None else f"{row.mean_selected_rank:g}"
        lines.append(
            f"{row.detector},{p_fa},{row.sample_count},{row.trials},{row.p_detect:g},{rank}"
        )
    return "\n".join(lines) + "\n"


def run_montecarlo(plan_path, out_path, box_df: str = "derived", seed: int | None = None):
    """Load a plan file, run it, and write the detection curve CSV.

    The CSV is written once, after all trials complete; a failure while
    writing removes the partial file.
    """
    plan = load_plan(plan_path)
    if seed is not None:
        plan = replace(plan, base_seed=seed)
    rows = run_experiment(plan, box_df=box_df)
    try:
        with open(out_path, "w", encoding="ascii", newline="\n") as handle:
            handle.write(format_curve_csv(rows))
    except BaseException:
        try:
            os.remove(out_path)
        except OSError:
            pass
        raise
    return rows


def dump_scenario(config_path, out_path, seed: int | None = None) -> ScenarioConfig:
    """Generate one dataset from a scenario config file and write it.

    The written file loads back bit-exactly; the same config and seed
    always produce byte-identical files.
    """
    config = load_scenario_config(config_path)
    if seed is not None:
        config = replace(config, seed=seed)
    write_dataset(out_path, generate_scenario(config))
    return config
