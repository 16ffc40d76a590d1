"""Exhaustive and sampled sweeps over function tables ``G -> H``.

Each table is classified by the integer oracle and/or the Fourier criterion
(and optionally the norm condition). Sweeps split into residue classes of
the table counter, so shards and worker processes merge into the same report
regardless of how the work was divided.
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .duals import dual_for
from .errors import InvalidParameterError, TooLargeError
from .groups import FiniteGroup, group_from_spec
from .nonlinearity import FunctionTable, PnVerdict, bent_auto, norm_condition, pn_oracle

EXHAUSTIVE_CAP = 10 ** 8
GENERATOR = "numpy-pcg64-seedseq(seed,index)"
CRITERIA = ("oracle", "bent_auto", "norm_condition")
_ALIASES = {"both": ("oracle", "bent_auto"), "bent": ("bent_auto",), "all": CRITERIA}


def parse_criteria(text: str) -> tuple[str, ...]:
    chosen = set()
    for tok in text.split(","):
        tok = tok.strip()
        if tok in _ALIASES:
            chosen.update(_ALIASES[tok])
        elif tok in CRITERIA:
            chosen.add(tok)
        else:
            raise InvalidParameterError(f"unknown criterion {tok!r}")
    return tuple(c for c in CRITERIA if c in chosen)


@dataclass(frozen=True)
class SearchJob:
    domain: str
    codomain: str
    mode: str = "exhaustive"
    sample_count: int = 0
    seed: int = 0
    criteria: tuple[str, ...] = ("oracle", "bent_auto")
    partition: tuple[int, int] = (0, 1)
    domain_dual: str | None = None
    codomain_dual: str | None = None
    tau: float | None = None

    def __post_init__(self):
        if self.mode not in ("exhaustive", "random"):
            raise InvalidParameterError(f"mode must be exhaustive or random, not {self.mode!r}")
        k, n = self.partition
        if not 0 <= k < n:
            raise InvalidParameterError(f"worker index {k} must lie in 0..{n - 1}")
        if not self.criteria or any(c not in CRITERIA for c in self.criteria):
            raise InvalidParameterError(f"criteria must be a non-empty subset of {CRITERIA}")
        if self.mode == "random" and self.sample_count < 0:
            raise InvalidParameterError("sample count must be non-negative")


@dataclass
class Disagreement:
    counter: int
    codomain_order: int
    values: tuple[int, ...]
    oracle: PnVerdict
    bent: PnVerdict


@dataclass
class SearchReport:
    domain: str
    codomain: str
    mode: str
    criteria: tuple[str, ...]
    seed: int | None
    generator: str | None
    partition: tuple[int, int] = (0, 1)
    examined: int = 0
    pn_found: int = 0
    agreements: int = 0
    disagreement_count: int = 0
    norm_only: int = 0
    disagreements: list[Disagreement] = field(default_factory=list)
    wall_time: float = 0.0


def space_size(G: FiniteGroup, H: FiniteGroup) -> int:
    return H.order ** G.order


def enumerate_functions(G: FiniteGroup, H: FiniteGroup, partition=(0, 1)):
    """Yield ``(counter, FunctionTable)`` in base-|H| counter order.

    ``values[0]`` is the most significant digit. Partition ``(k, n)`` keeps the
    counters congruent to ``k`` mod ``n``.
    """
    size = space_size(G, H)
    if size > EXHAUSTIVE_CAP:
        raise TooLargeError(f"{H.order}^{G.order} = {size} tables exceeds the exhaustive cap of {EXHAUSTIVE_CAP}")
    k, n = partition
    tables = itertools.islice(itertools.product(range(H.order), repeat=G.order), k, None, n)
    for counter, vals in zip(range(k, size, n), tables):
        yield counter, FunctionTable(G, H, np.array(vals))


def sample_functions(G: FiniteGroup, H: FiniteGroup, count: int, seed: int, partition=(0, 1)):
    """Uniform random tables; sample ``i`` depends only on ``(seed, i)``."""
    k, n = partition
    for i in range(k, count, n):
        rng = np.random.default_rng([seed, i])
        yield i, FunctionTable(G, H, rng.integers(0, H.order, size=G.order))


def _groups(job: SearchJob):
    G = group_from_spec(job.domain)
    H = group_from_spec(job.codomain)
    return G, H


def _run_partition(job: SearchJob) -> SearchReport:
    G, H = _groups(job)
    want = set(job.criteria)
    need_oracle = "oracle" in want or "norm_condition" in want
    dG = dH = None
    if want & {"bent_auto", "norm_condition"}:
        dG = dual_for(G, job.domain_dual, job.tau)
        dH = dual_for(H, job.codomain_dual, job.tau)
    random_mode = job.mode == "random"
    report = SearchReport(G.name, H.name, job.mode, job.criteria,
                          job.seed if random_mode else None, GENERATOR if random_mode else None)
    if random_mode:
        stream = sample_functions(G, H, job.sample_count, job.seed, job.partition)
    else:
        stream = enumerate_functions(G, H, job.partition)
    for counter, f in stream:
        report.examined += 1
        oracle = pn_oracle(f) if need_oracle else None
        bent = bent_auto(f, dG, dH, job.tau) if "bent_auto" in want else None
        reference = oracle if "oracle" in want else bent
        if reference is not None and reference.is_pn:
            report.pn_found += 1
        if oracle is not None and bent is not None and "oracle" in want:
            if oracle.is_pn == bent.is_pn:
                report.agreements += 1
            else:
                report.disagreement_count += 1
                report.disagreements.append(
                    Disagreement(counter, H.order, tuple(int(v) for v in f.values), oracle, bent))
        if "norm_condition" in want and not oracle.is_pn:
            if norm_condition(f, dG, dH, job.tau).holds:
                report.norm_only += 1
    return report


def merge_reports(reports: list[SearchReport]) -> SearchReport:
    first = reports[0]
    merged = replace(first, examined=0, pn_found=0, agreements=0, disagreement_count=0,
                     norm_only=0, disagreements=[], wall_time=0.0)
    for r in reports:
        merged.examined += r.examined
        merged.pn_found += r.pn_found
        merged.agreements += r.agreements
        merged.disagreement_count += r.disagreement_count
        merged.norm_only += r.norm_only
        merged.disagreements.extend(r.disagreements)
        merged.wall_time = max(merged.wall_time, r.wall_time)
    merged.disagreements.sort(key=lambda d: d.counter)
    return merged


def check_job(job: SearchJob) -> None:
    """Raise :class:`TooLargeError` before any work if an exhaustive job is over the cap."""
    if job.mode == "exhaustive":
        G, H = _groups(job)
        if space_size(G, H) > EXHAUSTIVE_CAP:
            raise TooLargeError(
                f"{H.order}^{G.order} = {space_size(G, H)} tables exceeds the exhaustive cap "
                f"of {EXHAUSTIVE_CAP}; use random mode")


def run_search(job: SearchJob, workers: int = 1) -> SearchReport:
    """Run one shard of a job, split over ``workers`` processes.

    Worker ``w`` of the shard ``(k, n)`` takes counters ``k + n*w`` mod ``n*workers``,
    so the merged report does not depend on ``workers``.
    """
    if workers < 1:
        raise InvalidParameterError("workers must be at least 1")
    check_job(job)
    start = time.perf_counter()
    k, n = job.partition
    subjobs = [replace(job, partition=(k + n * w, n * workers)) for w in range(workers)]
    if workers == 1:
        reports = [_run_partition(subjobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_partition, subjobs))
    merged = merge_reports(reports)
    merged.partition = job.partition
    merged.wall_time = time.perf_counter() - start
    return merged


# -- report file ------------------------------------------------------------------------

def _fmt_verdict(v: PnVerdict) -> str:
    parts = [f"method={v.method}", f"is_pn={str(v.is_pn).lower()}", f"max_residual={v.max_residual!r}"]
    if v.failing_alpha is not None:
        parts.append(f"failing_alpha={v.failing_alpha}")
    if v.witness is not None:
        where = ",".join(f"{k}:{val}" for k, val in v.witness.where.items())
        parts.append(f"witness={where}")
        parts.append(f"witness_residual={v.witness.residual!r}")
    return " ".join(parts)


def format_report(report: SearchReport) -> str:
    """Line-oriented report. Wall time is left out so equal jobs give equal bytes."""
    lines = [
        "summary",
        f"domain {report.domain}",
        f"codomain {report.codomain}",
        f"mode {report.mode}",
        f"criteria {','.join(report.criteria)}",
        f"seed {report.seed if report.seed is not None else 'none'}",
        f"generator {report.generator or 'none'}",
        f"partition {report.partition[0]}/{report.partition[1]}",
        f"examined {report.examined}",
        f"pn {report.pn_found}",
        f"agreements {report.agreements}",
        f"disagreements {report.disagreement_count}",
        f"norm_only {report.norm_only}",
        "end",
    ]
    for d in report.disagreements:
        lines += [
            "disagreement",
            f"counter {d.counter}",
            f"fn {len(d.values)} {d.codomain_order}",
            " ".join(str(v) for v in d.values),
            "oracle " + _fmt_verdict(d.oracle),
            "bent " + _fmt_verdict(d.bent),
            "end",
        ]
    return "\n".join(lines) + "\n"


def summary_line(report: SearchReport) -> str:
    return f"examined {report.examined} pn {report.pn_found} disagreements {report.disagreement_count}"


def write_report(report: SearchReport, path) -> None:
    Path(path).write_text(format_report(report))
