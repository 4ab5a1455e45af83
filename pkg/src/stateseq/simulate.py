"""Monte Carlo study of noisy classifier output and its post-processing.

Noisy labels alternate between following a base sequence for an
exponentially distributed spell and holding a uniformly drawn wrong state
for another; the two means control how fragmented the result is.  The sweep
harness draws many replications, scores them before and after projection,
and tabulates means with standard errors, reproducibly from a single seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .measures import LtsParams, accuracy, lts_measure
from .projection import project_labels
from .sequence import Labels

RNG_ALGORITHM = "numpy PCG64 (default_rng), per-replication seed = seed + replication index"


@dataclass(frozen=True)
class NoiseModel:
    """Exponential alternation between correct and incorrect spells.

    ``mu_correct`` and ``mu_incorrect`` are the mean durations (seconds) of
    the spells following the base labels and of the spells spent in a
    uniformly drawn wrong state.
    """

    mu_correct: float
    mu_incorrect: float
    seed: int = 0

    def __post_init__(self) -> None:
        if not (self.mu_correct > 0 and self.mu_incorrect > 0):
            raise ValueError("spell means must be positive")


def generate_noisy_labels(base: Labels, model: NoiseModel) -> Labels:
    """Corrupt base labels with the alternating spell model.

    Spells are drawn as correct, incorrect, correct, ... until they cover
    the horizon (the last one is clipped).  The wrong state is drawn
    uniformly from the other states at the spell's start and held for the
    whole spell even if the base moves on meanwhile.
    """
    rng = np.random.default_rng(model.seed)
    horizon = base.horizon
    pairs: list[tuple[float, int]] = []
    t = 0.0
    correct = True
    start_state: int | None = None
    while t < horizon:
        if correct:
            span = rng.exponential(model.mu_correct)
            if start_state is None:
                start_state = base.state_at(0.0)
            else:
                pairs.append((t, base.state_at(t)))
            end = min(t + span, horizon)
            for jt, js in base.jumps:
                if t < jt < end:
                    pairs.append((jt, js))
        else:
            span = rng.exponential(model.mu_incorrect)
            current = base.state_at(t)
            others = [s for s in range(1, base.n_states + 1) if s != current]
            wrong = others[int(rng.integers(0, len(others)))]
            pairs.append((t, wrong))
        t += span
        correct = not correct
    start = base.start_state if start_state is None else start_state
    return Labels.from_pairs(horizon, base.n_states, start, pairs)


def default_base_labels() -> Labels:
    """The 60 s three-state sequence used by the bundled simulation study."""
    return Labels(
        horizon=60.0,
        n_states=3,
        start_state=1,
        jumps=((5.0, 2), (15.0, 3), (30.0, 2), (40.0, 3), (55.0, 1)),
    )


SWEEPABLE = ("mu2", "gamma", "w", "lambda")


@dataclass(frozen=True)
class SweepConfig:
    """One-parameter sweep around fixed noise/projection/scoring settings."""

    param: str
    values: tuple[float, ...]
    base: Labels = field(default_factory=default_base_labels)
    replications: int = 1000
    mu1: float = 0.1
    mu2: float = 0.08
    gamma: float = 0.5
    lts: LtsParams = LtsParams()
    seed: int = 0

    def __post_init__(self) -> None:
        if self.param not in SWEEPABLE:
            raise ValueError(f"unknown sweep parameter {self.param!r}; pick one of {SWEEPABLE}")
        if not self.values:
            raise ValueError("need at least one swept value")
        if self.replications < 1:
            raise ValueError("need at least one replication")


@dataclass(frozen=True)
class SweepRow:
    param: str
    value: float
    mean_accuracy_noisy: float
    se_accuracy: float
    mean_lts_noisy: float
    se_lts_noisy: float
    mean_lts_pp: float
    se_lts_pp: float


def _mean_se(values: list[float]) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    if n < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)


def run_sweep(config: SweepConfig) -> tuple[SweepRow, ...]:
    """Score noisy and post-processed labels across the swept values.

    Per-replication seeds do not depend on the swept value, so sweeping a
    scoring-only parameter (w, lambda) reuses the identical draws and
    projections the draw-by-draw loop would produce.
    """
    base = config.base
    rows = []
    scoring_only = config.param in ("w", "lambda")

    cache: list[tuple[Labels, Labels]] = []
    if scoring_only:
        for rep in range(config.replications):
            model = NoiseModel(config.mu1, config.mu2, seed=config.seed + rep)
            noisy = generate_noisy_labels(base, model)
            pp, _ = project_labels(noisy, config.gamma)
            cache.append((noisy, pp))

    for value in config.values:
        mu2 = value if config.param == "mu2" else config.mu2
        gamma = value if config.param == "gamma" else config.gamma
        lts = config.lts
        if config.param == "w":
            lts = LtsParams(value, lts.sigma, lts.lam, lts.zeta)
        elif config.param == "lambda":
            lts = LtsParams(lts.w, lts.sigma, value, lts.zeta)

        acc, lts_noisy, lts_pp = [], [], []
        for rep in range(config.replications):
            if scoring_only:
                noisy, pp = cache[rep]
            else:
                model = NoiseModel(config.mu1, mu2, seed=config.seed + rep)
                noisy = generate_noisy_labels(base, model)
                pp, _ = project_labels(noisy, gamma)
            acc.append(accuracy(base, noisy))
            lts_noisy.append(lts_measure(base, noisy, lts))
            lts_pp.append(lts_measure(base, pp, lts))

        m_acc, se_acc = _mean_se(acc)
        m_noisy, se_noisy = _mean_se(lts_noisy)
        m_pp, se_pp = _mean_se(lts_pp)
        rows.append(SweepRow(config.param, value, m_acc, se_acc, m_noisy, se_noisy, m_pp, se_pp))
    return tuple(rows)
