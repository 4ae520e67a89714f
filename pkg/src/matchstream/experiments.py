"""Experiment orchestration: configs, trace and summary files, reports.

Traces are CSV with a schema_version column; summaries are JSON. Given
the same config (seed included), reruns produce byte-identical trace
files whether replicates run serially or on a worker pool (the pool size
is capped by the MATCHOID_STREAM_THREADS environment variable, and all
randomness is derived as master seed XOR replicate index XOR guess-copy
index, so scheduling never changes results). Wall-clock time appears only
in summaries, never in traces.
"""

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor

from .baselines import brute_force_opt, offline_greedy
from .errors import ConfigError, SizeError
from .instances import load_instance, stream_order
from .multipass import Schedule, multipass_run
from .randomized import multipass_randomized

SCHEMA_VERSION = 1
THREADS_ENV = "MATCHOID_STREAM_THREADS"

ALGORITHMS = ("monotone-multipass", "nonmonotone-randomized", "greedy", "exact")

MONOTONE_TRACE_COLUMNS = (
    "schema_version", "pass", "beta", "f_S", "delta", "gamma_certified",
    "accepts", "evictions", "oracle_calls", "stored_elements",
)
RANDOMIZED_TRACE_COLUMNS = MONOTONE_TRACE_COLUMNS + (
    "lambda", "m", "buffer_peak", "f_S_prime", "f_S_bar", "seed",
)

_CONFIG_FIELDS = (
    "instance", "algorithm", "epsilon", "passes", "schedule", "alpha",
    "seed", "replicates", "offline", "target_gamma", "shuffle_seed",
    "trace", "summary",
)


class ExperimentConfig:
    """Fully serializable run description; a serialized config reruns to
    byte-identical traces."""

    __slots__ = _CONFIG_FIELDS

    def __init__(self, instance, algorithm, epsilon=None, passes=None,
                 schedule=None, alpha=0.0, seed=0, replicates=1,
                 offline="exact", target_gamma=None, shuffle_seed=None,
                 trace=None, summary=None):
        if algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm: {algorithm!r}")
        self.instance = str(instance)
        self.algorithm = algorithm
        self.epsilon = None if epsilon is None else float(epsilon)
        self.passes = None if passes is None else int(passes)
        self.schedule = schedule
        self.alpha = float(alpha)
        self.seed = int(seed)
        self.replicates = int(replicates)
        self.offline = offline
        self.target_gamma = None if target_gamma is None else float(target_gamma)
        self.shuffle_seed = None if shuffle_seed is None else int(shuffle_seed)
        self.trace = trace
        self.summary = summary

    def to_dict(self):
        return {name: getattr(self, name) for name in _CONFIG_FIELDS}

    @classmethod
    def from_dict(cls, data):
        return cls(**{name: data.get(name) for name in _CONFIG_FIELDS
                      if data.get(name) is not None or name in ("instance", "algorithm")})

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def thread_count():
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc


def build_schedule(name, p):
    """Map a CLI schedule token to a Schedule."""
    if name in (None, "matchoid"):
        return Schedule.matchoid_recurrence(p)
    if name == "matroid":
        return Schedule.matroid_harmonic()
    if isinstance(name, str) and name.startswith("fixed:"):
        try:
            return Schedule.fixed(float(name.split(":", 1)[1]), p=p)
        except ValueError as exc:
            raise ConfigError(f"bad fixed schedule: {name!r}") from exc
    raise ConfigError(f"unknown schedule: {name!r} (matroid, matchoid, or fixed:B)")


def default_passes(schedule, p, epsilon):
    """Pass budgets hitting the schedules' convergence targets: 2/eps for
    the harmonic schedule, 4p/eps for the recurrence."""
    if epsilon is None or epsilon <= 0:
        raise ConfigError("an epsilon > 0 is needed to choose a pass count")
    if schedule.kind == "matroid-harmonic":
        return math.ceil(2.0 / epsilon)
    return math.ceil(4.0 * p / epsilon)


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return value


def write_trace(path, columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(col)) for col in columns])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def _compute_opt(inst):
    if inst.n > 16:
        return None
    try:
        # separate oracle instance so the run's call counters stay clean
        return brute_force_opt(inst.build_oracle(), inst.build_matchoid()).opt_value
    except SizeError:
        return None


def run_experiment(config):
    """Execute one configured run and return the summary dict.

    Writes the trace CSV and summary JSON when the config names paths.
    The summary always carries f_final, certified factor, oracle calls,
    peak storage, wall time, and (when the instance is small enough for
    the exact baseline) the optimum value and the ratio opt/f_final.
    """
    started = time.perf_counter()
    inst = load_instance(config.instance)
    meta_mp = inst.build_matchoid()
    stream = stream_order(inst.n, config.shuffle_seed)
    opt_value = _compute_opt(inst)

    summary = {
        "schema_version": SCHEMA_VERSION,
        "algorithm": config.algorithm,
        "instance": config.instance,
        "n": inst.n,
        "monotone": inst.monotone,
        "p": meta_mp.p,
        "rank_k": meta_mp.rank_k,
        "seed": config.seed,
        "opt_value": opt_value,
        "trace": config.trace,
        "config": config.to_dict(),
    }
    rows = []
    columns = MONOTONE_TRACE_COLUMNS

    if config.algorithm == "monotone-multipass":
        oracle = inst.build_oracle()
        mp = inst.build_matchoid()
        schedule = build_schedule(config.schedule, mp.p)
        passes = config.passes or default_passes(schedule, mp.p, config.epsilon)
        result = multipass_run(oracle, mp, stream, schedule, passes,
                               config.alpha, target_gamma=config.target_gamma)
        for res, cert in zip(result.pass_results, result.certificates):
            rows.append({
                "schema_version": SCHEMA_VERSION,
                "pass": cert.pass_index,
                "beta": cert.beta,
                "f_S": res.f_final,
                "delta": cert.delta,
                "gamma_certified": cert.gamma_certified,
                "accepts": res.accept_count,
                "evictions": len(res.evicted),
                "oracle_calls": res.oracle_calls,
                "stored_elements": res.stored_peak,
            })
        summary.update({
            "f_final": result.f_final,
            "gamma_certified_final": result.certificates[-1].gamma_certified,
            "passes": result.passes_run,
            "oracle_calls": oracle.calls,
            "cache_hits": oracle.cache_hits,
            "peak_storage": result.stored_peak,
        })

    elif config.algorithm == "nonmonotone-randomized":
        if config.epsilon is None:
            raise ConfigError("the randomized driver needs an epsilon")
        columns = RANDOMIZED_TRACE_COLUMNS

        def one_replicate(rep):
            oracle = inst.build_oracle()
            mp = inst.build_matchoid()
            run = multipass_randomized(
                oracle, mp, stream, config.epsilon, config.passes,
                seed=config.seed ^ rep, offline_mode=config.offline)
            return run, oracle.calls, oracle.cache_hits

        workers = min(thread_count(), config.replicates)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(one_replicate, range(config.replicates)))
        else:
            outcomes = [one_replicate(rep) for rep in range(config.replicates)]

        f_bars = []
        total_calls = total_hits = 0
        peak_storage = 0
        for run, calls, hits in outcomes:
            f_bars.append(run.f_solution)
            total_calls += calls
            total_hits += hits
            peak_storage = max(peak_storage, run.space_peak)
            for copy in run.copies:
                for row in copy.pass_rows:
                    out = {"schema_version": SCHEMA_VERSION}
                    out.update(row)
                    rows.append(out)
        mean = sum(f_bars) / len(f_bars)
        last = outcomes[-1][0]
        summary.update({
            "f_final": f_bars[0],
            "f_bar_mean": mean,
            "f_bar_stddev": (math.sqrt(sum((v - mean) ** 2 for v in f_bars)
                                       / (len(f_bars) - 1))
                             if len(f_bars) > 1 else 0.0),
            "replicates": config.replicates,
            "gamma_certified_final": last.copies[0].pass_rows[-1]["gamma_certified"],
            "passes": last.passes_used,
            "lambda_grid": list(last.grid.lambdas),
            "m": last.m,
            "gamma_off": last.gamma_off,
            "space_bound": last.space_bound,
            "oracle_calls": total_calls,
            "cache_hits": total_hits,
            "peak_storage": peak_storage,
        })

    elif config.algorithm == "greedy":
        oracle = inst.build_oracle()
        mp = inst.build_matchoid()
        chosen = offline_greedy(oracle, mp)
        summary.update({
            "f_final": oracle.peek(chosen),
            "solution": sorted(chosen),
            "gamma_certified_final": None,
            "oracle_calls": oracle.calls,
            "cache_hits": oracle.cache_hits,
            "peak_storage": len(chosen),
        })

    elif config.algorithm == "exact":
        oracle = inst.build_oracle()
        mp = inst.build_matchoid()
        exact = brute_force_opt(oracle, mp)
        summary.update({
            "f_final": exact.opt_value,
            "solution": sorted(exact.opt_set),
            "gamma_certified_final": 1.0,
            "oracle_calls": oracle.calls,
            "cache_hits": oracle.cache_hits,
            "peak_storage": len(exact.opt_set),
            "subsets_examined": exact.subsets_examined,
        })

    f_final = summary.get("f_final")
    summary["ratio"] = (opt_value / f_final
                        if opt_value is not None and f_final else None)
    summary["wall_time"] = time.perf_counter() - started

    if config.trace is not None:
        write_trace(config.trace, columns, rows)
    if config.summary is not None:
        with open(config.summary, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return summary


def report_rows(summary_paths):
    """Aggregate summaries (and their traces) into a factor-vs-pass table."""
    columns = ("instance", "algorithm", "pass", "f_S", "gamma_certified", "ratio")
    rows = []
    for path in summary_paths:
        with open(path, "r", encoding="utf-8") as fh:
            summary = json.load(fh)
        opt = summary.get("opt_value")
        trace = summary.get("trace")
        if trace and os.path.exists(trace):
            with open(trace, "r", encoding="utf-8", newline="") as fh:
                for rec in csv.DictReader(fh):
                    f_s = float(rec["f_S"]) if rec.get("f_S") else None
                    rows.append({
                        "instance": summary.get("instance"),
                        "algorithm": summary.get("algorithm"),
                        "pass": int(rec["pass"]),
                        "f_S": f_s,
                        "gamma_certified": rec.get("gamma_certified"),
                        "ratio": (opt / f_s if opt is not None and f_s else None),
                    })
        else:
            f_s = summary.get("f_final")
            rows.append({
                "instance": summary.get("instance"),
                "algorithm": summary.get("algorithm"),
                "pass": summary.get("passes", 1),
                "f_S": f_s,
                "gamma_certified": summary.get("gamma_certified_final"),
                "ratio": summary.get("ratio"),
            })
    return columns, rows
