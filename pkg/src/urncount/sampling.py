"""The four sampling models and the cross-model simulation.

All samplers are pure functions of (urn, parameters, stream): identical
inputs reproduce identical batches byte for byte.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from .rng import RngStream, _poisson_cdf
from .urn import UrnSpec

MODEL_MULTINOMIAL = "multinomial"
MODEL_HYPERGEOMETRIC = "hypergeometric"
MODEL_BERNOULLI = "bernoulli"
MODEL_POISSONIZED = "poissonized"
MODEL_SIMULATED = "simulated-with-replacement"

_VECTOR_COLOR_THRESHOLD = 32


@dataclass(frozen=True)
class SampleBatch:
    """An ordered list of observed color ids plus the realized sample size."""

    draws: tuple[int, ...]
    nominal_size: int
    model_tag: str

    @property
    def realized_size(self) -> int:
        return len(self.draws)


def _require_nonempty(urn: UrnSpec) -> None:
    if urn.C == 0:
        raise ValueError("cannot sample from an empty urn")


def _ball_array(urn: UrnSpec) -> list[int]:
    balls: list[int] = []
    for cid, mult in urn.colors:
        balls.extend([cid] * mult)
    return balls


def draw_with_replacement(urn: UrnSpec, n: int, rng: RngStream) -> SampleBatch:
    """n independent draws, color i with probability k_i / k."""
    _require_nonempty(urn)
    if n < 0:
        raise ValueError("sample size must be >= 0")
    cum = []
    total = 0
    for _, mult in urn.colors:
        total += mult
        cum.append(total)
    ids = [cid for cid, _ in urn.colors]
    k = urn.k
    draws = []
    for _ in range(n):
        ball = rng.randbelow(k)
        draws.append(ids[bisect.bisect_right(cum, ball)])
    return SampleBatch(tuple(draws), n, MODEL_MULTINOMIAL)


def draw_without_replacement(urn: UrnSpec, n: int, rng: RngStream) -> SampleBatch:
    """A uniformly random size-n sub-multiset of the urn, in random order.

    Partial Fisher-Yates over the expanded ball array; O(k) memory.
    """
    _require_nonempty(urn)
    if n < 0:
        raise ValueError("sample size must be >= 0")
    if n > urn.k:
        raise ValueError(f"cannot draw {n} balls without replacement from a {urn.k}-ball urn")
    balls = _ball_array(urn)
    k = len(balls)
    for i in range(n):
        j = i + rng.randbelow(k - i)
        balls[i], balls[j] = balls[j], balls[i]
    return SampleBatch(tuple(balls[:n]), n, MODEL_HYPERGEOMETRIC)


def draw_bernoulli(urn: UrnSpec, p: float, rng: RngStream) -> SampleBatch:
    """Each of the k balls included independently with probability p.

    Per color the inclusion count is Binomial(k_i, p).  Draws are emitted in
    canonical color order; downstream consumers use counts only.
    """
    _require_nonempty(urn)
    if not 0.0 <= p <= 1.0:
        raise ValueError("inclusion probability must lie in [0, 1]")
    draws: list[int] = []
    for cid, mult in urn.colors:
        taken = rng.binomial(mult, p)
        draws.extend([cid] * taken)
    return SampleBatch(tuple(draws), int(round(urn.k * p)), MODEL_BERNOULLI)


def poissonized_color_counts(urn: UrnSpec, n: float, rng: RngStream) -> np.ndarray:
    """Per-color counts N_i ~ Poisson(n * k_i / k), aligned with urn.colors.

    This is the counting stage of the Poisson model.  When every per-color
    mean is below 30 it consumes exactly one uniform per color, in canonical
    color order, so the scalar and vectorized paths agree bit for bit.
    """
    _require_nonempty(urn)
    if n < 0:
        raise ValueError("expected sample size must be >= 0")
    k = urn.k
    means = [n * mult / k for _, mult in urn.colors]
    if urn.C >= _VECTOR_COLOR_THRESHOLD and all(m < 30.0 for m in means):
        distinct = set(means)
        if len(distinct) == 1:
            return rng.poisson_many(means[0], urn.C)
        u = rng.uniforms(urn.C)
        out = np.empty(urn.C, dtype=np.int64)
        means_arr = np.array(means)
        for lam in sorted(distinct):
            mask = means_arr == lam
            if lam == 0.0:
                out[mask] = 0
                continue
            cdf = _poisson_cdf(lam)
            idx = np.searchsorted(cdf, u[mask], side="left")
            out[mask] = np.minimum(idx, len(cdf) - 1)
        return out
    return np.array([rng.poisson(lam) for lam in means], dtype=np.int64)


def draw_poissonized(urn: UrnSpec, n: float, rng: RngStream) -> SampleBatch:
    """Poisson sampling model: independent per-color counts, total ~ Poi(n).

    The draw list is a uniformly shuffled expansion of the counts; only the
    counts carry information.
    """
    counts = poissonized_color_counts(urn, n, rng)
    draws: list[int] = []
    for (cid, _), cnt in zip(urn.colors, counts):
        draws.extend([cid] * int(cnt))
    rng.shuffle(draws)
    return SampleBatch(tuple(draws), int(n), MODEL_POISSONIZED)


def simulate_with_from_without(batch: SampleBatch, k: int, rng: RngStream) -> SampleBatch:
    """Turn a without-replacement sample into a with-replacement one.

    Draw i keeps Y_i with probability 1 - (i-1)/k and otherwise reuses an
    earlier output position chosen uniformly; the result is distributed
    exactly as n independent draws.
    """
    n = batch.realized_size
    if n > k:
        raise ValueError(f"batch of size {n} cannot come from a {k}-ball urn")
    ys = batch.draws
    out: list[int] = []
    for i in range(1, n + 1):
        if i > 1 and rng.random() < (i - 1) / k:
            out.append(ys[rng.randbelow(i - 1)])
        else:
            out.append(ys[i - 1])
    return SampleBatch(tuple(out), n, MODEL_SIMULATED)
