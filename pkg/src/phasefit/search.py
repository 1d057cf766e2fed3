"""Multistart global search: random batch, best-fraction selection, local runs.

A batch of L admissible configurations is drawn uniformly (values uniform in
the box, radii uniform then sorted, outermost pinned to R), the best
ceil(gamma*L) by objective value seed independent local minimizations, and the
resulting minima are deduplicated and ranked. Everything is reproducible from
the seed: each start point carries a sub-seed derived from (seed, index), and
results are keyed by start index, so worker scheduling cannot change the
outcome.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, EmptySampleError, SolverError
from .localopt import AdmissibleSet, Configuration, LocalOptParams, configuration_potential, lmm
from .objective import ShiftTarget, phi

Q_HIGH_GUARD_MARGIN = 1e-3


@dataclass(frozen=True)
class SearchParams:
    """Batch size, reduction fraction, seed, and the nested tolerances."""

    L: int = 10000
    gamma: float = 0.01
    seed: int = 0
    adm: AdmissibleSet = field(default_factory=AdmissibleSet)
    local: LocalOptParams = field(default_factory=LocalOptParams)
    dedup_tol: float = 0.05
    pin_outer_radius: bool = True

    def __post_init__(self):
        if self.L < 1:
            raise DomainError(f"batch size L must be positive, got {self.L}")
        if not (0.0 < self.gamma <= 1.0):
            raise DomainError(f"gamma must be in (0, 1], got {self.gamma}")
        if math.ceil(self.gamma * self.L) < 1:
            raise DomainError("gamma * L must select at least one point")
        if not (self.dedup_tol > 0.0):
            raise DomainError("dedup_tol must be positive")


@dataclass(frozen=True)
class LocalMinimum:
    """One deduplicated local minimum with its provenance."""

    config: Configuration
    phi: float
    start_index: int
    seed: int


@dataclass(frozen=True)
class SearchOutcome:
    """Minima sorted by ascending objective, plus run accounting."""

    minima: tuple[LocalMinimum, ...]
    evaluations: int
    wall_time: float


def sub_seed(seed: int, index: int) -> int:
    """Deterministic per-start seed via the splittable seed-sequence scheme."""
    return int(np.random.SeedSequence(entropy=seed, spawn_key=(1 + index,)).generate_state(1, dtype=np.uint64)[0])


def random_batch(params: SearchParams) -> list[Configuration]:
    """L uniform admissible configurations, fully determined by params.seed."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=params.seed, spawn_key=(0,)))
    adm = params.adm
    out = []
    for _ in range(params.L):
        values = rng.uniform(adm.q_low, adm.q_high, adm.M_max)
        radii = np.sort(rng.uniform(0.0, adm.R, adm.M_max))
        if params.pin_outer_radius:
            radii[-1] = adm.R
        out.append(Configuration(radii=radii, values=values))
    return out


class _CountingObjective:
    """Objective on configurations that counts its calls (picklable)."""

    def __init__(self, target: ShiftTarget):
        self.target = target
        self.count = 0

    def __call__(self, cfg: Configuration) -> float:
        self.count += 1
        return phi(configuration_potential(cfg), self.target)


def _ranked_sample(batch, f, gamma: float):
    """(index, config, phi) triples of the best ceil(gamma*len(batch)) points."""
    scored = []
    for i, cfg in enumerate(batch):
        try:
            scored.append((i, cfg, f(cfg)))
        except SolverError:
            continue
    if not scored:
        raise EmptySampleError("every batch point failed objective evaluation")
    scored.sort(key=lambda t: (t[2], t[0]))
    n_sel = min(math.ceil(gamma * len(batch)), len(scored))
    return scored[:n_sel]


def reduced_sample(batch, f, gamma: float) -> list[Configuration]:
    """The batch members with the smallest objective values, ascending."""
    if not batch:
        raise DomainError("batch must be nonempty")
    return [cfg for _, cfg, _ in _ranked_sample(batch, f, gamma)]


def _lmm_task(payload):
    index, cfg, target, adm, local = payload
    f = _CountingObjective(target)
    try:
        final = lmm(cfg, f, adm, local)
        return index, final, f(final), f.count, None
    except SolverError as exc:
        return index, None, None, f.count, str(exc)


def _profile_grid(cfg: Configuration, r_grid: np.ndarray) -> np.ndarray:
    return configuration_potential(cfg).profile(r_grid)


def reduced_random_search(params: SearchParams, target: ShiftTarget, jobs: int = 1,
                          progress=None) -> SearchOutcome:
    """Run the full multistart search against the target shifts.

    ``jobs`` > 1 runs the local minimizations in separate processes;
    ``progress(done, total)`` is invoked after each completed local search.
    Individual local-search failures are skipped, not fatal.
    """
    t0 = time.perf_counter()
    k = target.k
    q_high_eff = min(params.adm.q_high, k * k * (1.0 - Q_HIGH_GUARD_MARGIN))
    if not (params.adm.q_low < q_high_eff):
        raise DomainError(
            f"admissible values collapse under the evanescence guard: "
            f"q_low {params.adm.q_low} >= effective q_high {q_high_eff}"
        )
    eff = replace(params, adm=replace(params.adm, q_high=q_high_eff))

    batch = random_batch(eff)
    counter = _CountingObjective(target)
    selected = _ranked_sample(batch, counter, eff.gamma)
    evaluations = counter.count

    payloads = [(i, cfg, target, eff.adm, eff.local) for i, cfg, _ in selected]
    results = {}
    done = 0
    if jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(_lmm_task, p): p[0] for p in payloads}
            for fut in as_completed(futures):
                res = fut.result()
                results[res[0]] = res
                done += 1
                if progress is not None:
                    progress(done, len(payloads))
    else:
        for p in payloads:
            res = _lmm_task(p)
            results[res[0]] = res
            done += 1
            if progress is not None:
                progress(done, len(payloads))

    finished = []
    for index in sorted(results):
        _, final, phi_final, count, error = results[index]
        evaluations += count
        if error is None:
            finished.append((phi_final, index, final))
    finished.sort(key=lambda t: (t[0], t[1]))

    r_grid = np.linspace(0.0, params.adm.R, 1000)
    kept: list[LocalMinimum] = []
    kept_profiles: list[np.ndarray] = []
    for phi_final, index, final in finished:
        prof = _profile_grid(final, r_grid)
        if any(np.max(np.abs(prof - other)) < params.dedup_tol for other in kept_profiles):
            continue
        kept.append(
            LocalMinimum(config=final, phi=phi_final, start_index=index,
                         seed=sub_seed(params.seed, index))
        )
        kept_profiles.append(prof)

    return SearchOutcome(
        minima=tuple(kept),
        evaluations=evaluations,
        wall_time=time.perf_counter() - t0,
    )
