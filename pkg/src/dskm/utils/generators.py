"""Seeded synthetic stream generators: clustered, uniform and churn."""
from __future__ import annotations

import numpy as np

from dskm.core.errors import DomainError
from dskm.models.stream_models import StreamFile, StreamOp

GENERATOR_KINDS = ("clustered", "uniform", "churn")


def _check_grid(d: int, delta_exp: int, n: int) -> int:
    if d < 1 or delta_exp < 1:
        raise DomainError("d and L must be >= 1")
    if n < 0:
        raise DomainError("the number of points must be non-negative")
    side = 1 << delta_exp
    if n > side**d:
        raise DomainError(f"cannot place {n} distinct points in [1, {side}]^{d}")
    return side


def _distinct_uniform(rng: np.random.Generator, d: int, side: int, n: int, exclude=()) -> list[tuple[int, ...]]:
    taken = set(exclude)
    points: list[tuple[int, ...]] = []
    while len(points) < n:
        batch = rng.integers(1, side + 1, size=(2 * (n - len(points)) + 1, d))
        for row in batch:
            p = tuple(int(x) for x in row)
            if p not in taken:
                taken.add(p)
                points.append(p)
                if len(points) == n:
                    break
    return points


def _with_deletions(rng: np.random.Generator, points: list[tuple[int, ...]], fraction: float) -> list[StreamOp]:
    """Insert every point in order and delete a ``fraction`` of them at random later times."""
    if not 0.0 <= fraction <= 1.0:
        raise DomainError("deletion fraction must lie in [0, 1]")
    n = len(points)
    deleted = set(rng.choice(n, size=round(fraction * n), replace=False).tolist()) if n else set()
    events = [(float(i), 1, i) for i in range(n)]
    events.extend((i + rng.uniform(0.5, n - i + 0.5), -1, i) for i in sorted(deleted))
    events.sort()
    return [StreamOp(sign, points[i]) for _, sign, i in events]


def clustered_stream(
    d: int,
    delta_exp: int,
    n: int,
    blobs: int = 3,
    deletion_fraction: float = 0.0,
    spread: float | None = None,
    seed: int = 0,
) -> StreamFile:
    """Rounded Gaussian blobs inside ``[1, Delta]^d``; ``n`` distinct inserted points."""
    side = _check_grid(d, delta_exp, n)
    if blobs < 1:
        raise DomainError("at least one blob is required")
    rng = np.random.default_rng(seed)
    spread = side / 16 if spread is None else spread
    centers = rng.uniform(1, side, size=(blobs, d))
    taken: set[tuple[int, ...]] = set()
    points: list[tuple[int, ...]] = []
    attempts = 0
    while len(points) < n:
        attempts += 1
        if attempts > 100 * (n + 1):
            points.extend(_distinct_uniform(rng, d, side, n - len(points), exclude=taken))
            break
        center = centers[int(rng.integers(blobs))]
        p = tuple(int(x) for x in np.clip(np.rint(rng.normal(center, spread)), 1, side))
        if p not in taken:
            taken.add(p)
            points.append(p)
    return StreamFile(d=d, delta_exp=delta_exp, operations=_with_deletions(rng, points, deletion_fraction))


def uniform_stream(d: int, delta_exp: int, n: int, deletion_fraction: float = 0.0, seed: int = 0) -> StreamFile:
    side = _check_grid(d, delta_exp, n)
    rng = np.random.default_rng(seed)
    points = _distinct_uniform(rng, d, side, n)
    return StreamFile(d=d, delta_exp=delta_exp, operations=_with_deletions(rng, points, deletion_fraction))


def churn_stream(
    d: int,
    delta_exp: int,
    residual: int,
    waves: int = 3,
    wave_size: int = 50,
    seed: int = 0,
) -> StreamFile:
    """Waves of transient points inserted then deleted around a planted residual set.

    The residual points are inserted one per wave slot and never deleted, so the net
    stream is exactly the residual set.
    """
    side = _check_grid(d, delta_exp, residual)
    if waves < 0 or wave_size < 0:
        raise DomainError("waves and wave_size must be non-negative")
    rng = np.random.default_rng(seed)
    kept = _distinct_uniform(rng, d, side, residual)
    free = side**d - residual
    per_wave = min(wave_size, free)

    operations: list[StreamOp] = []
    remaining = list(kept)
    for wave in range(waves):
        transient = _distinct_uniform(rng, d, side, per_wave, exclude=kept)
        operations.extend(StreamOp(1, p) for p in transient)
        share = len(remaining) // (waves - wave)
        operations.extend(StreamOp(1, p) for p in remaining[:share])
        remaining = remaining[share:]
        order = rng.permutation(len(transient))
        operations.extend(StreamOp(-1, transient[int(i)]) for i in order)
    operations.extend(StreamOp(1, p) for p in remaining)
    return StreamFile(d=d, delta_exp=delta_exp, operations=operations)
