"""Sweep engines: exhaustive small-width verification, seeded random
verification at large widths, and the cycle-count hunter.

Work is sharded by modulus (exhaustive) or into contiguous instance
chunks (random) so the precomputed constants are reused and the merged
report is identical for any parallelism degree: shards are merged in
enumeration order and every aggregate (counts, histograms, first-N
witness lists) is order-independent or order-preserving.
"""

from __future__ import annotations

import dataclasses
import json
import multiprocessing
import random
import time
from dataclasses import dataclass, field

from . import __version__
from .errors import ContractViolation, InvariantViolation
from .modparams import precompute
from .pipeline import mulmod_checked
from .shrink import HUNT_CYCLE_CAP, NORMAL_CYCLE_CAP

__all__ = [
    "SweepConfig",
    "SweepReport",
    "exhaustive_sweep",
    "hunt_shrink_cycles",
    "random_sweep",
]

DEFAULT_INSTANCE_CAP = 6_000_000
WITNESS_CAP = 100
HIST_BUCKETS = 8  # shrink cycle counts 0..7


@dataclass(frozen=True)
class SweepConfig:
    """What to enumerate and how to run it.

    Exhaustive modes enumerate every modulus in the k range, with ``n``
    overriding the working width (defaults to k; larger values exercise
    the shift path). Random mode draws ``count`` seeded instances at
    width ``n``; leaving the k range unset draws full-width moduli, while
    an explicit range below n mixes in shift-path instances.
    """

    k_min: int | None = None
    k_max: int | None = None
    n: int | None = None
    count: int | None = None
    seed: int | None = None
    jobs: int = 1
    mode: str = "verify"
    instance_cap: int = DEFAULT_INSTANCE_CAP
    witness_cap: int = WITNESS_CAP

    def resolved(self) -> "SweepConfig":
        """Fill mode-dependent defaults and validate the result."""
        if self.mode not in ("verify", "hunt", "random"):
            raise ContractViolation(f"unknown sweep mode {self.mode!r}")
        cfg = self
        if cfg.mode == "random":
            if cfg.n is None:
                raise ContractViolation("random sweep requires n")
            if cfg.count is None or cfg.count < 1:
                raise ContractViolation(f"count >= 1 violated (count={cfg.count})")
            if cfg.seed is None:
                raise ContractViolation("random sweep requires a seed")
            k_min = cfg.k_min if cfg.k_min is not None else cfg.n
            k_max = cfg.k_max if cfg.k_max is not None else cfg.n
        else:
            k_min = cfg.k_min if cfg.k_min is not None else 3
            k_max = cfg.k_max if cfg.k_max is not None else 6
        cfg = dataclasses.replace(cfg, k_min=k_min, k_max=k_max)
        if cfg.k_min < 3:
            raise ContractViolation(f"k >= 3 violated (k_min={cfg.k_min})")
        if cfg.k_max < cfg.k_min:
            raise ContractViolation(
                f"k_min <= k_max violated ({cfg.k_min} > {cfg.k_max})"
            )
        if cfg.n is not None and cfg.n < cfg.k_max:
            raise ContractViolation(
                f"k <= n violated (k_max={cfg.k_max}, n={cfg.n})"
            )
        if cfg.jobs < 1:
            raise ContractViolation(f"jobs >= 1 violated (jobs={cfg.jobs})")
        return cfg

    def canonical(self) -> dict:
        # The parallelism degree and resource caps shape execution, not
        # results, so they stay out of the reproducibility-relevant echo.
        return {
            "mode": self.mode,
            "k_min": self.k_min,
            "k_max": self.k_max,
            "n": self.n,
            "count": self.count,
            "seed": self.seed,
            "witness_cap": self.witness_cap,
        }


@dataclass
class SweepReport:
    """Aggregated sweep outcome plus the machine-readable document."""

    version: str
    config: dict
    seed: int | None
    instances: int
    failures_total: int
    failures: list[dict]
    cycle_histogram: dict[int, int]
    rule_usage: dict[int, int]
    max_cycles: int
    max_cycles_witness: dict | None
    cycle_witnesses: list[dict] = field(default_factory=list)
    cycle_witnesses_total: int = 0
    ge5_total: int = 0
    wall_time_s: float = 0.0

    def ok(self) -> bool:
        return self.failures_total == 0 and self.ge5_total == 0

    def to_json_dict(self) -> dict:
        """The documented report schema. Wall time is excluded on purpose:
        reports from identical configs must be byte-identical."""
        return {
            "header": {
                "version": self.version,
                "config": self.config,
                "seed": self.seed,
            },
            "body": {
                "totals": {
                    "instances": self.instances,
                    "failures": self.failures_total,
                },
                "cycle_histogram": {
                    str(i): self.cycle_histogram.get(i, 0)
                    for i in range(HIST_BUCKETS)
                },
                "rule_usage": {
                    str(i): self.rule_usage.get(i, 0) for i in range(1, 7)
                },
                "max_cycles": {
                    "value": self.max_cycles,
                    "witness": self.max_cycles_witness,
                },
                "failures": self.failures,
                "cycle_witnesses": self.cycle_witnesses,
                "cycle_witnesses_total": self.cycle_witnesses_total,
            },
        }

    def to_json_bytes(self) -> bytes:
        doc = json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))
        return (doc + "\n").encode("ascii")

    def summary(self) -> str:
        return (
            f"mode={self.config['mode']} instances={self.instances} "
            f"failures={self.failures_total} max_shrink_cycles={self.max_cycles} "
            f"wall={self.wall_time_s:.2f}s"
        )


def _witness(n: int, R: int, A: int, B: int, **extra) -> dict:
    w = {"n": n, "r": format(R, "X"), "a": format(A, "X"), "b": format(B, "X")}
    w.update(extra)
    return w


def _new_partial() -> dict:
    return {
        "instances": 0,
        "failures": [],
        "failures_total": 0,
        "hist": [0] * HIST_BUCKETS,
        "rules": [0] * 6,
        "max_cycles": -1,
        "max_witness": None,
        "ge4": [],
        "ge4_total": 0,
        "ge5_total": 0,
    }


def _record_instance(part: dict, n: int, R: int, A: int, B: int,
                     hunt: bool, witness_cap: int, params) -> None:
    part["instances"] += 1
    cap = HUNT_CYCLE_CAP if hunt else NORMAL_CYCLE_CAP
    try:
        result, ok = mulmod_checked(
            A, B, R, n, params=params, shrink_cycle_cap=cap
        )
    except (InvariantViolation, ContractViolation) as exc:
        part["failures_total"] += 1
        if len(part["failures"]) < witness_cap:
            part["failures"].append(
                _witness(n, R, A, B, reason=f"{type(exc).__name__}: {exc}")
            )
        return
    cycles = result.shrink_cycles
    part["hist"][min(cycles, HIST_BUCKETS - 1)] += 1
    part["rules"][result.squeeze_rule - 1] += 1
    if cycles > part["max_cycles"]:
        part["max_cycles"] = cycles
        part["max_witness"] = _witness(n, R, A, B)
    if hunt and cycles >= 4:
        part["ge4_total"] += 1
        if cycles >= 5:
            part["ge5_total"] += 1
        if len(part["ge4"]) < witness_cap:
            part["ge4"].append(_witness(n, R, A, B, cycles=cycles))
    if not ok:
        part["failures_total"] += 1
        if len(part["failures"]) < witness_cap:
            if result.p >= R or result.q >= R:
                reason = "output not below modulus"
            else:
                reason = "residue mismatch"
            part["failures"].append(_witness(n, R, A, B, reason=reason))


def _run_modulus_task(task: tuple) -> dict:
    """One exhaustive shard: every (A, B) pair of a single modulus."""
    mode, k, n, R, witness_cap = task
    hunt = mode == "hunt"
    part = _new_partial()
    params = precompute(R, n)
    for A in range(R):
        for B in range(R):
            _record_instance(part, n, R, A, B, hunt, witness_cap, params)
    return part


def _run_random_chunk(task: tuple) -> dict:
    """One random shard: a contiguous slice of the drawn instance list."""
    mode, n, instances, witness_cap = task
    hunt = mode == "hunt"
    part = _new_partial()
    for R, A, B in instances:
        params = precompute(R, n)
        _record_instance(part, n, R, A, B, hunt, witness_cap, params)
    return part


def _merge(parts, witness_cap: int) -> dict:
    total = _new_partial()
    for part in parts:
        total["instances"] += part["instances"]
        total["failures_total"] += part["failures_total"]
        total["ge4_total"] += part["ge4_total"]
        total["ge5_total"] += part["ge5_total"]
        for i in range(HIST_BUCKETS):
            total["hist"][i] += part["hist"][i]
        for i in range(6):
            total["rules"][i] += part["rules"][i]
        need = witness_cap - len(total["failures"])
        if need > 0:
            total["failures"].extend(part["failures"][:need])
        need = witness_cap - len(total["ge4"])
        if need > 0:
            total["ge4"].extend(part["ge4"][:need])
        if part["max_cycles"] > total["max_cycles"]:
            total["max_cycles"] = part["max_cycles"]
            total["max_witness"] = part["max_witness"]
    return total


def _execute(tasks: list, worker, config: SweepConfig) -> dict:
    if config.jobs == 1 or len(tasks) <= 1:
        return _merge((worker(t) for t in tasks), config.witness_cap)
    with multiprocessing.Pool(processes=config.jobs) as pool:
        return _merge(pool.imap(worker, tasks, chunksize=1), config.witness_cap)


def _finish(config: SweepConfig, total: dict, started: float) -> SweepReport:
    return SweepReport(
        version=__version__,
        config=config.canonical(),
        seed=config.seed,
        instances=total["instances"],
        failures_total=total["failures_total"],
        failures=total["failures"],
        cycle_histogram={i: c for i, c in enumerate(total["hist"])},
        rule_usage={i + 1: c for i, c in enumerate(total["rules"])},
        max_cycles=max(total["max_cycles"], 0),
        max_cycles_witness=total["max_witness"],
        cycle_witnesses=total["ge4"],
        cycle_witnesses_total=total["ge4_total"],
        ge5_total=total["ge5_total"],
        wall_time_s=time.perf_counter() - started,
    )


def _exhaustive_tasks(config: SweepConfig) -> list[tuple]:
    expected = 0
    tasks = []
    for k in range(config.k_min, config.k_max + 1):
        n = config.n if config.n is not None else k
        for R in range(1 << (k - 1), 1 << k):
            expected += R * R
            tasks.append((config.mode, k, n, R, config.witness_cap))
    if expected > config.instance_cap:
        raise ContractViolation(
            f"instance cap exceeded: sweep would run {expected} instances, "
            f"cap is {config.instance_cap}"
        )
    return tasks


def exhaustive_sweep(config: SweepConfig) -> SweepReport:
    """Check every (R, A, B) with R in the k range against the reference.

    Enumeration order is (k, R, A, B) lexicographic; witnesses keep that
    order no matter how many workers run the shards.
    """
    if config.mode not in ("verify", "hunt"):
        raise ContractViolation(f"exhaustive sweep cannot run mode {config.mode!r}")
    config = config.resolved()
    started = time.perf_counter()
    tasks = _exhaustive_tasks(config)
    total = _execute(tasks, _run_modulus_task, config)
    return _finish(config, total, started)


def hunt_shrink_cycles(config: SweepConfig) -> SweepReport:
    """Exhaustive sweep with the relaxed cycle cap, recording heavy instances.

    Any instance needing 4 cycles is a finding worth publishing (the known
    worst case observed so far is 3); an instance needing 5 or more
    contradicts the proven bound and makes the report failing.
    """
    if config.mode != "hunt":
        config = dataclasses.replace(config, mode="hunt")
    return exhaustive_sweep(config)


def random_sweep(config: SweepConfig) -> SweepReport:
    """Run seeded random instances at width n against the reference.

    Instances are drawn up front from one generator, so the sequence is a
    pure function of the seed and the config; chunking for parallel
    execution cannot change it.
    """
    if config.mode != "random":
        config = dataclasses.replace(config, mode="random")
    config = config.resolved()
    started = time.perf_counter()
    n = config.n
    rng = random.Random(config.seed)
    full_width = config.k_min == config.k_max == n
    instances = []
    for _ in range(config.count):
        k = n if full_width else rng.randint(config.k_min, config.k_max)
        R = rng.randrange(1 << (k - 1), 1 << k)
        A = rng.randrange(R)
        B = rng.randrange(R)
        instances.append((R, A, B))
    chunk = max(1, min(500, -(-config.count // (config.jobs * 8))))
    tasks = [
        (config.mode, n, instances[i : i + chunk], config.witness_cap)
        for i in range(0, len(instances), chunk)
    ]
    total = _execute(tasks, _run_random_chunk, config)
    return _finish(config, total, started)
