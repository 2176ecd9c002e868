"""Verification campaigns: run property checks over degrees and alphas.

A campaign is a list of property selectors evaluated for every degree
``2 <= N <= max_degree`` (``1 <= N`` for ``cardinality``) and, for the
dyadic properties, every alpha.  Each evaluation yields one
:class:`~lgl_dyadic.report.PropertyReport`.

Some reports are *asserted*: a ``fails`` verdict makes the campaign fail.
The others record empirical envelopes or checks outside the proven range
of alpha and never fail a campaign.  Reports are sorted after the run, so
the worker count never changes the output.
"""
from __future__ import annotations

import math
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import cgl, lgl
from .asymptotics import qhat, scaled_angle_gap
from .dyadic import (
    check_closed_under_stretching,
    check_graded,
    check_nested,
    nested_dyadic_family,
    standalone_dyadic,
)
from .errors import DomainError
from .grid_core import check_equivalence, check_monotone_symmetric, check_quasi_uniform, check_str
from .report import PropertyReport

GLOBAL_QUOTIENT_BOUND = 7.0 * math.pi**2 / 4.0
QHAT_SLACK = 1e-6
EQUIVALENCE_RTOL = 1e-12
CARDINALITY_RANGE = (0.25, 4.0)
GRADED_ALPHAS = (1.0, 1.25)

SELECTORS = (
    "quasi_uniform",
    "mq",
    "str",
    "displacement",
    "equivalence",
    "graded",
    "nested",
    "nested_standalone",
    "stretch_closed",
    "convexity_condition",
    "length_bounds",
    "angle_bounds",
    "limit_gap",
    "cardinality",
    "monotone",
    "interlacing",
)
STR_MODES = ("strict", "include_boundary_interval")
THREADS_ENV = "LGL_DYADIC_THREADS"


@dataclass
class CampaignConfig:
    max_degree: int = 500
    alphas: tuple[float, ...] = (1.0,)
    properties: tuple[str, ...] = SELECTORS
    interval: tuple[float, float] = (-1.0, 1.0)
    str_boundary_mode: str = "strict"
    timings: bool = False

    def __post_init__(self):
        self.max_degree = int(self.max_degree)
        self.alphas = tuple(float(a) for a in self.alphas)
        self.properties = tuple(self.properties)
        self.interval = (float(self.interval[0]), float(self.interval[1]))
        if self.max_degree < 1:
            raise DomainError("max_degree must be at least 1")
        if self.max_degree > lgl.MAX_ORDER:
            raise DomainError(f"max_degree must not exceed {lgl.MAX_ORDER}")
        if not self.alphas or any(not (a > 0.0 and math.isfinite(a)) for a in self.alphas):
            raise DomainError(f"alphas must be positive, got {self.alphas}")
        unknown = [p for p in self.properties if p not in SELECTORS]
        if unknown:
            raise DomainError(f"unknown properties {unknown}")
        if self.str_boundary_mode not in STR_MODES:
            raise DomainError(f"unknown str boundary mode {self.str_boundary_mode!r}")
        if not self.interval[0] < self.interval[1]:
            raise DomainError(f"empty interval {self.interval}")


@dataclass
class CampaignResult:
    reports: list[PropertyReport]
    asserted: list[bool] = field(default_factory=list)

    @property
    def failures(self) -> list[PropertyReport]:
        return [r for r, a in zip(self.reports, self.asserted) if a and r.verdict == "fails"]

    @property
    def ok(self) -> bool:
        return not self.failures


def worker_count() -> int:
    """Thread cap from ``LGL_DYADIC_THREADS``, else the CPU count."""
    raw = os.environ.get(THREADS_ENV, "")
    cpus = os.cpu_count() or 1
    if raw.strip():
        try:
            n = int(raw)
        except ValueError:
            raise DomainError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
        return max(1, n)
    return cpus


class _Context:
    """Grids shared between selectors of one campaign, built once per key."""

    def __init__(self, cfg: CampaignConfig):
        self.cfg = cfg
        self._lock = threading.Lock()
        self._families = {}
        self._standalone = {}

    def family(self, alpha):
        with self._lock:
            if alpha not in self._families:
                self._families[alpha] = nested_dyadic_family(self.cfg.max_degree, alpha, self.cfg.interval)
            return self._families[alpha]

    def standalone(self, alpha):
        with self._lock:
            if alpha not in self._standalone:
                iv = self.cfg.interval
                self._standalone[alpha] = [standalone_dyadic(n, alpha, iv) for n in range(1, self.cfg.max_degree + 1)]
            return self._standalone[alpha]

    def lgl(self, n):
        return lgl.lgl_grid(n, self.cfg.interval)


def _floats(info):
    if not info:
        return {}
    return {k: float(v) for k, v in info.items() if isinstance(v, (float, np.floating)) and math.isfinite(v)}


class _Recorder:
    def __init__(self, cfg):
        self.timings = cfg.timings
        self.items = []

    def add(self, prop, degree, verdict, asserted, *, subject, alpha=None, constants=None, witness=None, t0=None):
        ms = 0
        if self.timings and t0 is not None:
            ms = int(round(1000.0 * (time.perf_counter() - t0)))
        r = PropertyReport(
            property=prop,
            degree=degree,
            verdict=verdict,
            alpha=alpha,
            realized_constants=constants or {},
            witness=witness,
            runtime_ms=ms,
            subject=subject,
        )
        self.items.append((r, bool(asserted)))

    def check(self, prop, degree, result, asserted, *, subject, alpha=None, constants=None, t0=None):
        consts = _floats(result.details)
        consts.update(constants or {})
        self.add(
            prop,
            degree,
            "holds" if result.holds else "fails",
            asserted,
            subject=subject,
            alpha=alpha,
            constants=consts,
            witness=None if result.holds else (result.witness or {"degree": degree}),
            t0=t0,
        )


def _degrees(cfg, low=2):
    return range(low, cfg.max_degree + 1)


# --- selectors ----------------------------------------------------------------


def _quasi_uniform(ctx, rec):
    bound = min(GLOBAL_QUOTIENT_BOUND, qhat(1) + QHAT_SLACK)
    for n in _degrees(ctx.cfg):
        t0 = time.perf_counter()
        c = check_quasi_uniform(ctx.lgl(n))
        holds = c <= bound
        witness = None if holds else {"C_g": c, "bound": bound}
        rec.add("quasi_uniform", n, "holds" if holds else "fails", True, subject="lgl",
                constants={"C_g": c}, witness=witness, t0=t0)
    for n in _degrees(ctx.cfg):
        t0 = time.perf_counter()
        rec.check("quasi_uniform", n, cgl.check_cgl_quasi_uniform(n), True, subject="cgl", t0=t0)
    for alpha in ctx.cfg.alphas:
        fam = ctx.family(alpha)
        for n in _degrees(ctx.cfg):
            t0 = time.perf_counter()
            c = check_quasi_uniform(fam[n - 1].to_grid())
            rec.add("quasi_uniform", n, "holds", True, subject="nested", alpha=alpha,
                    constants={"C_g": c}, t0=t0)


def _mq(ctx, rec):
    top = ctx.cfg.max_degree
    for n in _degrees(ctx.cfg):
        t0 = time.perf_counter()
        rec.check("mq", n, lgl.check_mq(n, next_order=n < top), True, subject="lgl", t0=t0)


def _str(ctx, rec):
    strict = ctx.cfg.str_boundary_mode == "strict"
    subject = "lgl" if strict else "lgl_include_boundary"
    for n in _degrees(ctx.cfg):
        t0 = time.perf_counter()
        rec.check("str", n, check_str(ctx.lgl(n), strict=strict), True, subject=subject, t0=t0)


def _pairs(top):
    for n in range(2, top):
        yield n, n + 1
        if 2 * n <= top and 2 * n != n + 1:
            yield n, 2 * n


def _displacement(ctx, rec):
    for n, m in _pairs(ctx.cfg.max_degree):
        t0 = time.perf_counter()
        rec.check("displacement", (n, m), lgl.check_displacement(n, m), True, subject="lgl", t0=t0)
        t0 = time.perf_counter()
        rec.check("displacement", (n, m), cgl.check_cgl_displacement(n, m), True, subject="cgl", t0=t0)


def _equivalence_report(rec, degree, g, d, lower, upper, *, subject, alpha, c_g, t0):
    r = check_equivalence(g, d.to_grid())
    holds = r.holds_for(lower, upper, EQUIVALENCE_RTOL)
    constants = {"min_ratio": r.min_ratio, "max_ratio": r.max_ratio, "A": lower, "B": upper, "C_g": c_g}
    witness = None
    if not holds:
        witness = {"witness_min": list(r.witness_min), "witness_max": list(r.witness_max)}
    rec.add("equivalence", degree, "holds" if holds else "fails", True, subject=subject, alpha=alpha,
            constants=constants, witness=witness, t0=t0)


def _equivalence(ctx, rec):
    cfg = ctx.cfg
    for alpha in cfg.alphas:
        fam = ctx.family(alpha)
        sa = ctx.standalone(alpha)
        c_family = 1.0
        for n in range(1, cfg.max_degree + 1):
            g = ctx.lgl(n)
            c_n = check_quasi_uniform(g)
            c_family = max(c_family, c_n)
            if n < 2:
                continue
            t0 = time.perf_counter()
            upper = 2.0 * c_family / min(alpha / c_family, 1.0)
            _equivalence_report(rec, n, g, fam[n - 1], 1.0 / alpha, upper, subject="nested", alpha=alpha,
                                c_g=c_family, t0=t0)
            t0 = time.perf_counter()
            upper = 2.0 * c_n / min(alpha / c_n, 1.0)
            _equivalence_report(rec, n, g, sa[n - 1], 1.0 / alpha, upper, subject="standalone", alpha=alpha,
                                c_g=c_n, t0=t0)
    for n in range(2, cfg.max_degree):
        t0 = time.perf_counter()
        r = check_equivalence(ctx.lgl(n), ctx.lgl(n + 1))
        rec.add("equivalence", (n, n + 1), "reported", False, subject="lgl_pair",
                constants={"min_ratio": r.min_ratio, "max_ratio": r.max_ratio}, t0=t0)
    for n in _degrees(cfg):
        t0 = time.perf_counter()
        r = check_equivalence(ctx.lgl(n), cgl.cgl_grid(n, cfg.interval))
        rec.add("equivalence", n, "reported", False, subject="lgl_cgl",
                constants={"min_ratio": r.min_ratio, "max_ratio": r.max_ratio}, t0=t0)


def _graded(ctx, rec):
    for alpha in ctx.cfg.alphas:
        asserted = GRADED_ALPHAS[0] <= alpha <= GRADED_ALPHAS[1]
        fam, sa = ctx.family(alpha), ctx.standalone(alpha)
        for n in _degrees(ctx.cfg):
            t0 = time.perf_counter()
            rec.check("graded", n, check_graded(fam[n - 1]), asserted, subject="nested", alpha=alpha, t0=t0)
            t0 = time.perf_counter()
            rec.check("graded", n, check_graded(sa[n - 1]), asserted, subject="standalone", alpha=alpha, t0=t0)


def _nested(ctx, rec):
    for alpha in ctx.cfg.alphas:
        fam = ctx.family(alpha)
        for n in _degrees(ctx.cfg):
            t0 = time.perf_counter()
            rec.check("nested", (n - 1, n), check_nested(fam[n - 2], fam[n - 1]), True, subject="nested",
                      alpha=alpha, t0=t0)


def _nested_standalone(ctx, rec):
    for alpha in ctx.cfg.alphas:
        sa = ctx.standalone(alpha)
        for n in _degrees(ctx.cfg):
            t0 = time.perf_counter()
            rec.check("nested", (n - 1, n), check_nested(sa[n - 2], sa[n - 1]), False, subject="standalone",
                      alpha=alpha, t0=t0)


def _stretch_closed(ctx, rec):
    for alpha in ctx.cfg.alphas:
        asserted = alpha >= 1.0
        fam, sa = ctx.family(alpha), ctx.standalone(alpha)
        for n in _degrees(ctx.cfg):
            t0 = time.perf_counter()
            rec.check("stretch_closed", n, check_closed_under_stretching(fam[n - 1]), asserted,
                      subject="nested", alpha=alpha, t0=t0)
            t0 = time.perf_counter()
            rec.check("stretch_closed", n, check_closed_under_stretching(sa[n - 1]), asserted,
                      subject="standalone", alpha=alpha, t0=t0)


def _convexity(ctx, rec):
    for n in _degrees(ctx.cfg, 3):
        t0 = time.perf_counter()
        rec.check("convexity_condition", n, lgl.check_convexity_condition(n), True, subject="lgl", t0=t0)


def _length_bounds(ctx, rec):
    for n in _degrees(ctx.cfg, 3):
        t0 = time.perf_counter()
        rec.check("length_bounds", n, lgl.check_length_bounds(n), True, subject="lgl", t0=t0)


def _angle_bounds(ctx, rec):
    for n in _degrees(ctx.cfg):
        t0 = time.perf_counter()
        rec.check("angle_bounds", n, lgl.check_angle_bounds(n), True, subject="lgl", t0=t0)


def _limit_gap(ctx, rec):
    for n in _degrees(ctx.cfg):
        t0 = time.perf_counter()
        q = lgl.lgl_quotients(lgl.lgl_grid(n))
        constants = {"scaled_angle_gap_k1": scaled_angle_gap(n, 1)}
        for k in (1, 2):
            if k <= n - 1:
                constants[f"q_k{k}"] = float(q[k - 1])
                constants[f"gap_k{k}"] = abs(float(q[k - 1]) - qhat(k))
        rec.add("limit_gap", n, "reported", False, subject="lgl", constants=constants, t0=t0)


def _cardinality(ctx, rec):
    lo, hi = CARDINALITY_RANGE
    for alpha in ctx.cfg.alphas:
        fam, sa = ctx.family(alpha), ctx.standalone(alpha)
        for n in range(1, ctx.cfg.max_degree + 1):
            t0 = time.perf_counter()
            n_lgl, n_nested = n + 1, fam[n - 1].n_nodes
            ratio = n_nested / n_lgl
            constants = {
                "lgl_nodes": n_lgl,
                "dyadic_nodes": sa[n - 1].n_nodes,
                "nested_nodes": n_nested,
                "ratio": ratio,
            }
            if alpha == 1.0:
                holds = lo <= ratio <= hi
                verdict = "holds" if holds else "fails"
                witness = None if holds else {"ratio": ratio, "range": [lo, hi]}
                rec.add("cardinality", n, verdict, True, subject="nested", alpha=alpha, constants=constants,
                        witness=witness, t0=t0)
            else:
                rec.add("cardinality", n, "reported", False, subject="nested", alpha=alpha,
                        constants=constants, t0=t0)


def _monotone(ctx, rec):
    for alpha in ctx.cfg.alphas:
        fam, sa = ctx.family(alpha), ctx.standalone(alpha)
        for n in _degrees(ctx.cfg):
            t0 = time.perf_counter()
            rec.check("monotone", n, check_monotone_symmetric(fam[n - 1].to_grid()), True, subject="nested",
                      alpha=alpha, t0=t0)
            t0 = time.perf_counter()
            rec.check("monotone", n, check_monotone_symmetric(sa[n - 1].to_grid()), True,
                      subject="standalone", alpha=alpha, t0=t0)


def _interlacing(ctx, rec):
    for n in _degrees(ctx.cfg):
        t0 = time.perf_counter()
        rec.check("interlacing", n, cgl.check_interlacing(n), True, subject="lgl_cgl", t0=t0)


_RUNNERS = {
    "quasi_uniform": _quasi_uniform,
    "mq": _mq,
    "str": _str,
    "displacement": _displacement,
    "equivalence": _equivalence,
    "graded": _graded,
    "nested": _nested,
    "nested_standalone": _nested_standalone,
    "stretch_closed": _stretch_closed,
    "convexity_condition": _convexity,
    "length_bounds": _length_bounds,
    "angle_bounds": _angle_bounds,
    "limit_gap": _limit_gap,
    "cardinality": _cardinality,
    "monotone": _monotone,
    "interlacing": _interlacing,
}


def run_campaign(cfg: CampaignConfig, workers: int | None = None) -> CampaignResult:
    """Evaluate every selected property; reports come back sorted."""
    ctx = _Context(cfg)
    selected = list(dict.fromkeys(cfg.properties))

    def run(name):
        rec = _Recorder(cfg)
        _RUNNERS[name](ctx, rec)
        return rec.items

    n_workers = min(workers or worker_count(), len(selected)) or 1
    if n_workers == 1:
        chunks = [run(name) for name in selected]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            chunks = list(pool.map(run, selected))
    items = [item for chunk in chunks for item in chunk]
    items.sort(key=lambda it: it[0].sort_key)
    return CampaignResult([r for r, _ in items], [a for _, a in items])


def size_table(max_degree: int, alphas, interval=(-1.0, 1.0)) -> list[dict]:
    """Node counts behind the size figures: one row per ``(alpha, N)``."""
    rows = []
    for alpha in sorted(float(a) for a in alphas):
        fam = nested_dyadic_family(max_degree, alpha, interval)
        for n in range(1, max_degree + 1):
            rows.append(
                {
                    "alpha": alpha,
                    "N": n,
                    "lgl_nodes": n + 1,
                    "dyadic_nodes": standalone_dyadic(n, alpha, interval).n_nodes,
                    "nested_nodes": fam[n - 1].n_nodes,
                }
            )
    return rows


def check_alpha_monotone(rows) -> list[dict]:
    """Rows where a larger alpha gives more nodes than a smaller one at the same ``N``."""
    by_n = {}
    for r in rows:
        by_n.setdefault(r["N"], []).append(r)
    bad = []
    for n in sorted(by_n):
        group = sorted(by_n[n], key=lambda r: r["alpha"])
        for lo, hi in zip(group, group[1:]):
            for col in ("dyadic_nodes", "nested_nodes"):
                if hi[col] > lo[col]:
                    bad.append({"N": n, "column": col, "alphas": [lo["alpha"], hi["alpha"]],
                                "counts": [lo[col], hi[col]]})
    return bad
