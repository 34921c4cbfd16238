"""Gram matrices and cosine-similarity trajectory maps.

All pairwise inner products accumulate in float64 over fixed 4096-element
chunks whose partial results are combined by a pairwise tree keyed on
chunk index, so the output is bit-identical regardless of how many
workers computed the partials.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .ckptstore import SelectionSpec, TrajectoryStore
from .errors import DegenerateVector, EmptySelection, EmptyTrajectory, OriginOutOfRange

CHUNK = 4096
EPS_NORM = 1e-30


@dataclass(frozen=True)
class OriginSpec:
    """Absolute origin (kind None) or a checkpoint index used as origin."""

    tau: int | None = None

    @classmethod
    def absolute(cls) -> "OriginSpec":
        return cls(None)

    @classmethod
    def checkpoint(cls, tau: int) -> "OriginSpec":
        return cls(int(tau))

    @property
    def is_absolute(self) -> bool:
        return self.tau is None

    def describe(self) -> str:
        return "absolute" if self.is_absolute else f"ckpt:{self.tau}"


@dataclass
class GramMatrix:
    values: np.ndarray
    norms: np.ndarray
    origin: OriginSpec
    point_labels: list[str]

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass
class CosineMap:
    values: np.ndarray
    origin: OriginSpec
    point_labels: list[str]

    @property
    def n(self) -> int:
        return self.values.shape[0]


def _tree_sum(parts: list[np.ndarray]) -> np.ndarray:
    """Pairwise sum in fixed order; independent of how parts were produced."""
    while len(parts) > 1:
        parts = [
            parts[i] + parts[i + 1] if i + 1 < len(parts) else parts[i]
            for i in range(0, len(parts), 2)
        ]
    return parts[0]


def _mirror_upper(m: np.ndarray) -> None:
    iu = np.triu_indices(m.shape[0], k=1)
    m[(iu[1], iu[0])] = m[iu]


def compute_gram(
    store: TrajectoryStore,
    origin: OriginSpec,
    sel: SelectionSpec | None = None,
    *,
    origin_store: TrajectoryStore | None = None,
    threads: int = 1,
) -> GramMatrix:
    """Gram matrix of the (optionally origin-shifted) trajectory points.

    With an in-trajectory origin the zero row of the shifted point set is
    omitted, shrinking n by one. An external origin point is supplied as
    a one-checkpoint ``origin_store``.
    """
    p = store.selection_dim(sel)
    tau_row = None
    if origin.is_absolute:
        rows = list(range(store.n_points))
    elif origin_store is not None:
        if not 0 <= origin.tau < origin_store.n_points:
            raise OriginOutOfRange(f"origin index {origin.tau} not in origin store")
        rows = list(range(store.n_points))
    else:
        if not 0 <= origin.tau < store.n_points:
            raise OriginOutOfRange(
                f"origin index {origin.tau} not in store of {store.n_points} points"
            )
        rows = [i for i in range(store.n_points) if i != origin.tau]
        tau_row = origin.tau
    if not rows:
        raise EmptyTrajectory("no points remain after removing the origin row")

    n = len(rows)
    chunk_starts = list(range(0, p, CHUNK)) or [0]

    def partial(start: int) -> np.ndarray:
        stop = min(start + CHUNK, p)
        block = store.chunk_matrix(sel, start, stop)[rows]
        if tau_row is not None:
            block = block - store.chunk_matrix(sel, start, stop)[tau_row]
        elif origin_store is not None:
            block = block - origin_store.chunk_matrix(sel, start, stop)[origin.tau]
        g = block @ block.T
        _mirror_upper(g)
        return g

    if threads > 1 and len(chunk_starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(partial, chunk_starts))
    else:
        parts = [partial(s) for s in chunk_starts]
    values = _tree_sum(parts) if p > 0 else np.zeros((n, n))

    diag = np.maximum(np.diagonal(values), 0.0)
    norms = np.sqrt(diag)
    labels = [store.labels[i] for i in rows]
    return GramMatrix(values=values, norms=norms, origin=origin, point_labels=labels)


def compute_cosine_map(gram: GramMatrix) -> CosineMap:
    bad = np.nonzero(gram.norms <= EPS_NORM)[0]
    if bad.size:
        i = int(bad[0])
        raise DegenerateVector(
            f"point {gram.point_labels[i]!r} has zero norm relative to the origin"
        )
    values = gram.values / np.outer(gram.norms, gram.norms)
    np.clip(values, -1.0, 1.0, out=values)
    np.fill_diagonal(values, 1.0)
    return CosineMap(values=values, origin=gram.origin, point_labels=list(gram.point_labels))


def trajectory_map(
    store: TrajectoryStore, sel: SelectionSpec | None = None, *, threads: int = 1
) -> CosineMap:
    """Cosine map viewed from the absolute origin (the TM)."""
    return compute_cosine_map(compute_gram(store, OriginSpec.absolute(), sel, threads=threads))


def relative_trajectory_map(
    store: TrajectoryStore, tau: int, sel: SelectionSpec | None = None, *, threads: int = 1
) -> CosineMap:
    """Cosine map relative to in-trajectory point tau (the RTM), omit-row applied."""
    return compute_cosine_map(
        compute_gram(store, OriginSpec.checkpoint(tau), sel, threads=threads)
    )


def layerwise_maps(
    store: TrajectoryStore,
    group_spec: list[tuple[str, SelectionSpec]],
    *,
    threads: int = 1,
) -> list[tuple[str, CosineMap]]:
    """One trajectory map per named tensor group."""
    out = []
    for name, sel in group_spec:
        try:
            store.selected_layout(sel)
        except EmptySelection:
            raise EmptySelection(f"group {name!r} selects no tensors")
        out.append((name, trajectory_map(store, sel, threads=threads)))
    return out
