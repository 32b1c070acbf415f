"""Step-by-step construction of (R-1)-saturating sets in PG(R, q).

The process starts from L points of the normal rational curve, then
repeatedly picks a hyperplane skew to the current set, a *leading point* in
it that covers the most uncovered points outside the hyperplane, and R-1
further points of the hyperplane completing a general-position R-set.  It
stops once at most R points are left uncovered and adds those.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from . import bounds
from .codes import ParityCheck, saturation_level, set_to_parity_check
from .gf import FieldTables, field_of_order
from .pg import (
    GeometryError,
    PgSpace,
    canonicalize_rows,
    find_skew_hyperplane,
    hyperplane_points,
    linear_combinations,
    normal_rational_curve,
    pg_space,
    rank_of,
    rref,
    span_closure,
    subset_spans,
    theta,
)

log = logging.getLogger(__name__)


class ConstructionError(RuntimeError):
    pass


# -- configuration --------------------------------------------------------


@dataclass
class ConstructionConfig:
    q: int
    R: int = 3
    lam: float | None = None
    seed: int = 0
    strategy: str = "exact"
    max_steps: int | None = None
    verify: bool = True
    L: int | None = None
    retry_budget: int = 8

    def __post_init__(self):
        if self.R < 3:
            raise ConstructionError("R must be at least 3")
        if self.lam is None:
            self.lam = bounds.lambda_min(self.R)
        if self.lam <= 0:
            raise ConstructionError("lambda must be positive")
        self.strategy_kind, self.sample_size = parse_strategy(self.strategy)
        formula_L = bounds.start_size(self.lam, self.R, self.q)
        self.L_formula = formula_L
        self.L_clamped = False
        if self.L is None:
            if formula_L <= self.R:
                # formula start is too small at this q; use the least valid arc
                self.L = self.R + 1
                self.L_clamped = True
            else:
                self.L = formula_L
        if self.L <= self.R:
            raise ConstructionError(f"starting size L={self.L} must exceed R={self.R}")
        if self.L > self.q + 1:
            raise ConstructionError(f"starting size L={self.L} exceeds the q+1 points of the curve")

    @property
    def decay_estimate_applies(self) -> bool:
        """Whether binom(L, R-1) - 1 <= q, the hypothesis of the decay estimate."""
        return comb(self.L, self.R - 1) - 1 <= self.q

    def step_cap(self) -> tuple[int, bool]:
        """(cap on the number of steps, whether it comes from the bound formula)."""
        if self.max_steps is not None:
            return self.max_steps, False
        cap = None if self.L_clamped else bounds.iteration_cap(self.q, self.R, self.lam)
        if cap is not None:
            return cap + 8, True
        return bounds.fallback_cap(self.q, self.R) + 8, False


def parse_strategy(s: str) -> tuple[str, int]:
    if s in ("exact", "random"):
        return s, 0
    if s.startswith("sampled"):
        _, _, k = s.partition(":")
        k = int(k) if k else 16
        if k < 1:
            raise ConstructionError("sample size must be positive")
        return "sampled", k
    raise ConstructionError(f"unknown strategy {s!r}")


# -- coverage engine ------------------------------------------------------


class CoverageState:
    """Current set K with the bitmap of its (R-1)-covered points."""

    def __init__(self, space: PgSpace, R: int):
        self.space = space
        self.R = R
        self.K: list[tuple[int, ...]] = []
        self.K_ids: list[int] = []
        self.tags: list[int] = []
        self.covered = np.zeros(space.size, dtype=bool)
        self.uncovered_count = space.size

    def copy(self) -> "CoverageState":
        c = CoverageState.__new__(CoverageState)
        c.space, c.R = self.space, self.R
        c.K, c.K_ids, c.tags = list(self.K), list(self.K_ids), list(self.tags)
        c.covered = self.covered.copy()
        c.uncovered_count = self.uncovered_count
        return c

    def _mark(self, ids: np.ndarray) -> int:
        ids = np.unique(ids)
        fresh = ids[~self.covered[ids]]
        self.covered[fresh] = True
        self.uncovered_count -= fresh.size
        return int(fresh.size)

    def _append(self, pts, tag: int) -> None:
        for p in pts:
            self.K.append(tuple(p))
            self.K_ids.append(self.space.index(p))
            self.tags.append(tag)

    def uncovered_ids(self) -> np.ndarray:
        return np.flatnonzero(~self.covered)


def init_coverage(K0, space: PgSpace, R: int | None = None) -> CoverageState:
    """Coverage of a starting set in which every R points are independent."""
    R = space.N if R is None else R
    K0 = [tuple(int(x) for x in p) for p in K0]
    if len(K0) <= R:
        raise ConstructionError(f"starting set needs more than R={R} points")
    subsets = list(combinations(K0, R))
    F = space.field
    if any(rank_of(s, F) != R for s in subsets):
        raise ConstructionError("starting set is not in general position")
    st = CoverageState(space, R)
    st._append(K0, 0)
    st._mark(subset_spans(space, subsets))
    return st


def _new_subsets(old, new, R):
    pool = list(old) + list(new)
    n_old = len(old)
    for c in combinations(range(len(pool)), R):
        if c[-1] >= n_old:
            yield [pool[i] for i in c]


def mark_spans(state: CoverageState, new_points, hyperplane=None, tag: int | None = None) -> int:
    """Add ``new_points`` to K and mark every span they newly generate.

    When ``hyperplane`` is given the points must lie on it, be in general
    position there and the hyperplane must miss K.  Returns the decrease of
    the uncovered count.
    """
    space, F, R = state.space, state.space.field, state.R
    new = [tuple(int(x) for x in p) for p in new_points]
    if hyperplane is not None:
        h = np.asarray(hyperplane, dtype=np.int64)
        if np.any(F.dot(np.array(new), h) != 0):
            raise ConstructionError("new points are not on the hyperplane")
        if state.K and np.any(F.dot(np.array(state.K), h) == 0):
            raise ConstructionError("hyperplane is not skew to K")
        if rank_of(new, F) != len(new):
            raise ConstructionError("new points are not in general position")
    known = set(state.K)
    new = [p for p in new if p not in known]
    if not new:
        return 0
    before = state.uncovered_count
    buf = []
    for sub in _new_subsets(state.K, new, min(R, len(state.K) + len(new))):
        buf.append(sub)
        if len(buf) == 4096:
            state._mark(subset_spans(space, buf))
            buf = []
    if buf:
        state._mark(subset_spans(space, buf))
    state._append(new, len(set(state.tags)) if tag is None else tag)
    return before - state.uncovered_count


# -- leading point --------------------------------------------------------


def _coefficient_grid(F: FieldTables, k: int) -> np.ndarray:
    """All vectors of GF(q)^k as rows."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    g = np.indices((F.q,) * k).reshape(k, -1).T
    return np.ascontiguousarray(g, dtype=np.int64)


def delta_scores(state: CoverageState, h, pi_ids: np.ndarray) -> np.ndarray:
    """New-coverage count outside the hyperplane for every point of it.

    For each uncovered B off the hyperplane and each (R-1)-subset D of K, the
    points P of the hyperplane with B in span(D, P) form the affine part of
    span(D, B) meet the hyperplane, with span(D) removed.  Each (B, P) pair
    is counted once however many subsets D produce it.
    """
    space, F, R = state.space, state.space.field, state.R
    h = np.asarray(h, dtype=np.int64)
    n_pi = pi_ids.size
    in_pi = np.zeros(space.size, dtype=bool)
    in_pi[pi_ids] = True
    local = np.full(space.size, -1, dtype=np.int64)
    local[pi_ids] = np.arange(n_pi)
    U = np.flatnonzero(~state.covered & ~in_pi)
    counts = np.zeros(n_pi, dtype=np.int64)
    if U.size == 0:
        return counts

    grid = _coefficient_grid(F, R - 2)
    pieces = []
    for D in combinations(state.K, R - 1):
        d = np.array(D, dtype=np.int64)
        if rank_of(D, F) != R - 1:
            continue
        hd = F.dot(d, h[None, :])
        # basis of span(D) meet the hyperplane
        t = F.sub(F.mul(hd[1:, None], d[0][None, :]), F.mul(hd[0], d[1:]))
        tcomb = linear_combinations(F, grid, t[None, :, :])[0] if R > 2 else np.zeros((1, R + 1), np.int64)
        pieces.append((d[0], int(hd[0]), tcomb))

    step = max(1, (1 << 20) // grid.shape[0])
    for s in range(0, U.size, step):
        Ub = U[s : s + step]
        B = space.coords_of(Ub)
        hB = F.dot(B, h[None, :])
        mark = np.zeros((Ub.size, n_pi), dtype=bool)
        rows = np.repeat(np.arange(Ub.size), grid.shape[0])
        for d0, hd0, tcomb in pieces:
            X = F.sub(F.mul(hd0, B), F.mul(hB[:, None], d0[None, :]))
            pts = F.add(X[:, None, :], tcomb[None, :, :]).reshape(-1, R + 1)
            ids = space.ids_of(canonicalize_rows(pts, F))
            mark[rows, local[ids]] = True
        counts += mark.sum(axis=0)
    return counts


def delta_by_remarking(state: CoverageState, P, pi_ids: np.ndarray) -> int:
    """New-coverage count of adding P alone, off the hyperplane, by direct span marking."""
    space = state.space
    P = tuple(int(x) for x in P)
    subs = [list(D) + [P] for D in combinations(state.K, state.R - 1)]
    ids = np.unique(subset_spans(space, subs))
    ids = ids[~state.covered[ids]]
    in_pi = np.zeros(space.size, dtype=bool)
    in_pi[pi_ids] = True
    return int(np.count_nonzero(~in_pi[ids]))


def select_leading_point(state: CoverageState, h, pi_ids: np.ndarray, strategy: str = "exact",
                         rng: np.random.Generator | None = None, sample_size: int = 16):
    """Return ``(point_id, delta)`` for the chosen leading point of the hyperplane."""
    if pi_ids.size == 0:
        raise ConstructionError("empty hyperplane")
    if strategy == "exact":
        scores = delta_scores(state, h, pi_ids)
        i = int(np.argmax(scores))
        return int(pi_ids[i]), int(scores[i])
    if rng is None:
        raise ConstructionError(f"strategy {strategy!r} needs a random generator")
    if strategy == "random":
        pid = int(pi_ids[rng.integers(pi_ids.size)])
        return pid, delta_by_remarking(state, state.space.point(pid), pi_ids)
    if strategy == "sampled":
        k = min(sample_size, pi_ids.size)
        cand = np.sort(rng.choice(pi_ids, size=k, replace=False))
        vals = [delta_by_remarking(state, state.space.point(int(c)), pi_ids) for c in cand]
        i = int(np.argmax(vals))
        return int(cand[i]), int(vals[i])
    raise ConstructionError(f"unknown strategy {strategy!r}")


def complete_in_hyperplane(lead: int, pi_ids: np.ndarray, space: PgSpace, R: int) -> list[tuple[int, ...]]:
    """The leading point plus the first rank-increasing points of the hyperplane."""
    F = space.field
    chosen = [space.point(lead)]
    basis = rref(chosen, F)
    for pid in pi_ids:
        if len(chosen) == R:
            break
        p = space.point(int(pid))
        nb = rref(basis + [list(p)], F)
        if len(nb) > len(basis):
            chosen.append(p)
            basis = nb
    if len(chosen) < R:
        raise ConstructionError("hyperplane has too few independent points")
    return chosen


# -- affine pieces (union-size counting) ----------------------------------


def gamma_sets(K0, B, h, space: PgSpace) -> list[frozenset]:
    """For each (R-1)-subset D of K0: (span(D, B) meet hyperplane) minus span(D)."""
    F, R = space.field, space.N
    B = tuple(int(x) for x in B)
    h = np.asarray(h, dtype=np.int64)
    K0 = [tuple(int(x) for x in p) for p in K0]
    if F.dot(np.array(B), h) == 0:
        raise ConstructionError("B lies on the hyperplane")
    if np.any(F.dot(np.array(K0), h[None, :]) == 0):
        raise ConstructionError("hyperplane is not skew to K0")
    for T in combinations(K0, min(R, len(K0))):
        if rank_of(list(T) + [B], F) == rank_of(T, F):
            raise ConstructionError("B is covered by the starting set")
    pi = set(hyperplane_points(h, space).tolist())
    out = []
    for D in combinations(K0, R - 1):
        if rank_of(list(D) + [B], F) != R:
            raise ConstructionError("B is covered by the starting set")
        sigma = set(span_closure(list(D) + [B], space).tolist())
        vspan = set(span_closure(list(D), space).tolist())
        out.append(frozenset((sigma & pi) - vspan))
    return out


def gamma_union_size(K0, B, h, space: PgSpace) -> int:
    return len(frozenset().union(*gamma_sets(K0, B, h, space)))


# -- results --------------------------------------------------------------


@dataclass
class SaturatingSet:
    space: PgSpace
    points: list[tuple[int, ...]]
    tags: list[int] = field(default_factory=list)
    level: int | None = None

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def ids(self) -> list[int]:
        return [self.space.index(p) for p in self.points]

    def to_parity_check(self) -> ParityCheck:
        return set_to_parity_check(self.points, self.space.field)


@dataclass
class StepRecord:
    w: int
    hyperplane: tuple[int, ...]
    leading: tuple[int, ...]
    delta: int
    Delta: int
    uncovered: int
    retries: int = 0


@dataclass
class ConstructionReport:
    config: ConstructionConfig
    L: int
    uncovered0: int
    steps: list[StepRecord] = field(default_factory=list)
    patched: int = 0
    size: int = 0
    step_cap: int = 0
    cap_from_bound: bool = False
    verified: bool | None = None
    level: int | None = None
    retries: int = 0
    fallbacks: int = 0
    wall_time: float = 0.0

    def to_text(self, timing: bool = False) -> str:
        c = self.config
        kv = [
            ("q", c.q),
            ("R", c.R),
            ("lambda", repr(float(c.lam))),
            ("seed", c.seed),
            ("strategy", c.strategy),
            ("L", self.L),
            ("L_formula", c.L_formula),
            ("L_clamped", str(c.L_clamped).lower()),
            ("decay_estimate_applies", str(c.decay_estimate_applies).lower()),
            ("step_cap", self.step_cap),
            ("step_cap_from_bound", str(self.cap_from_bound).lower()),
            ("uncovered_0", self.uncovered0),
            ("steps", len(self.steps)),
            ("patched", self.patched),
            ("size", self.size),
            ("verified", "none" if self.verified is None else str(self.verified).lower()),
            ("saturation_level", "none" if self.level is None else self.level),
            ("retries", self.retries),
            ("fallbacks", self.fallbacks),
        ]
        if timing:
            kv.append(("wall_time", f"{self.wall_time:.3f}"))
        lines = ["%covercode-report v1"] + [f"{k}: {v}" for k, v in kv]
        lines.append("# w hyperplane leading delta Delta uncovered retries")
        for s in self.steps:
            lines.append(
                f"{s.w} {','.join(map(str, s.hyperplane))} {','.join(map(str, s.leading))} "
                f"{s.delta} {s.Delta} {s.uncovered} {s.retries}"
            )
        return "\n".join(lines) + "\n"


# -- Construction A -------------------------------------------------------


def _decay_ok(cfg: ConstructionConfig, before: int, after: int) -> bool:
    g = bounds.g_hat_bound(cfg.q, cfg.R, cfg.L)
    return after <= before * (1 - g / theta(cfg.R - 1, cfg.q))


def construction_a(cfg: ConstructionConfig) -> tuple[SaturatingSet, ConstructionReport]:
    t0 = time.perf_counter()
    F = field_of_order(cfg.q)
    R = cfg.R
    space = pg_space(R, F)
    rng = np.random.default_rng(cfg.seed)
    K0 = normal_rational_curve(space)[: cfg.L]
    state = init_coverage(K0, space, R)
    cap, from_bound = cfg.step_cap()
    report = ConstructionReport(cfg, cfg.L, state.uncovered_count, step_cap=cap, cap_from_bound=from_bound)

    w = 0
    while state.uncovered_count > R:
        if w >= cap:
            raise ConstructionError(f"step cap {cap} exceeded with {state.uncovered_count} points uncovered")
        try:
            h = find_skew_hyperplane(state.K_ids, space, rng)
        except GeometryError as exc:
            raise ConstructionError(f"no skew hyperplane at step {w + 1}") from exc
        pi_ids = hyperplane_points(h, space)
        before = state.uncovered_count
        retries = 0
        if cfg.strategy_kind == "sampled" and cfg.decay_estimate_applies:
            while True:
                lead, delta = select_leading_point(state, h, pi_ids, "sampled", rng, cfg.sample_size)
                trial = state.copy()
                Delta = mark_spans(trial, complete_in_hyperplane(lead, pi_ids, space, R), h, tag=w + 1)
                if _decay_ok(cfg, before, trial.uncovered_count):
                    state = trial
                    break
                retries += 1
                log.info("step %d: sampled leading point misses the decay bound (retry %d)", w + 1, retries)
                if retries >= cfg.retry_budget:
                    report.fallbacks += 1
                    lead, delta = select_leading_point(state, h, pi_ids, "exact")
                    Delta = mark_spans(state, complete_in_hyperplane(lead, pi_ids, space, R), h, tag=w + 1)
                    break
        else:
            lead, delta = select_leading_point(state, h, pi_ids, cfg.strategy_kind, rng, cfg.sample_size)
            Delta = mark_spans(state, complete_in_hyperplane(lead, pi_ids, space, R), h, tag=w + 1)
        report.retries += retries
        w += 1
        report.steps.append(StepRecord(w, tuple(h), space.point(lead), delta, Delta, state.uncovered_count, retries))
        log.debug("step %d: delta=%d Delta=%d uncovered=%d", w, delta, Delta, state.uncovered_count)

    rest = state.uncovered_ids()
    report.patched = int(rest.size)
    if rest.size:
        pts = [space.point(int(i)) for i in rest]
        state._append(pts, w + 1)
        state.covered[rest] = True
        state.uncovered_count = 0

    result = SaturatingSet(space, list(state.K), list(state.tags))
    report.size = result.size
    if cfg.verify:
        lvl = saturation_level(result.points, space)
        result.level = report.level = lvl
        report.verified = lvl is not None and lvl <= R - 1
        if lvl is not None and lvl < R - 1:
            log.info("result is %d-saturating, below the target %d", lvl, R - 1)
        if not report.verified:
            raise ConstructionError(f"verification failed: saturation level {lvl}")
    report.wall_time = time.perf_counter() - t0
    return result, report


# -- greedy baseline ------------------------------------------------------


def greedy_baseline(q: int, R: int = 3, seed: int = 0, candidate_sample: int = 64,
                    verify: bool = True) -> SaturatingSet:
    """Plain randomized greedy: add the sampled uncovered point covering the most."""
    F = field_of_order(q)
    space = pg_space(R, F)
    rng = np.random.default_rng(seed)
    covered = np.zeros(space.size, dtype=bool)
    S: list[tuple[int, ...]] = []
    while not covered.all():
        unc = np.flatnonzero(~covered)
        if candidate_sample and unc.size > candidate_sample:
            cand = np.sort(rng.choice(unc, size=candidate_sample, replace=False))
        else:
            cand = unc
        k = min(R - 1, len(S))
        subsets = list(combinations(S, k))
        best, best_gain, best_ids = None, -1, None
        for c in cand:
            P = space.point(int(c))
            ids = subset_spans(space, [list(T) + [P] for T in subsets])
            ids = np.unique(ids)
            gain = int(np.count_nonzero(~covered[ids]))
            if gain > best_gain:
                best, best_gain, best_ids = P, gain, ids
        S.append(best)
        covered[best_ids] = True
    out = SaturatingSet(space, S, list(range(len(S))))
    if verify:
        out.level = saturation_level(S, space)
        if out.level is None or out.level > R - 1:
            raise ConstructionError(f"greedy result failed verification (level {out.level})")
    return out


def iteration_cap(q: float, R: int, lam: float) -> int | None:
    return bounds.iteration_cap(q, R, lam)
