"""Classical references: exhaustive grid minimization and zoom refinement."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .encoding import GridLayout
from .objectives import Objective

#: Exhaustive scans refuse registers past this size.
MAX_BRUTE_QUBITS = 24


@dataclass(frozen=True)
class GridMinimum:
    index: int
    point: tuple[float, ...]
    value: float
    num_evaluations: int


def grid_brute_min(
    objective: Objective, layout: GridLayout, *, values: np.ndarray | None = None
) -> GridMinimum:
    """Exact minimum over every grid point; ties break to the lowest index."""
    if layout.total_qubits > MAX_BRUTE_QUBITS:
        raise ValueError(
            f"{layout.total_qubits} qubits exceeds the exhaustive cap of {MAX_BRUTE_QUBITS}"
        )
    if values is None:
        values = objective.batch(layout.all_points())
    values = np.asarray(values, dtype=float)
    if values.shape != (layout.size,):
        raise ValueError(f"values must have shape ({layout.size},), got {values.shape}")
    idx = int(np.argmin(values))  # argmin returns the first (lowest) index on ties
    return GridMinimum(
        index=idx,
        point=layout.decode(idx),
        value=float(values[idx]),
        num_evaluations=layout.size,
    )


@dataclass(frozen=True)
class RefinedMinimum:
    point: tuple[float, ...]
    value: float
    num_evaluations: int
    levels: int


def refine_min(
    objective: Objective,
    box: list[tuple[float, float]],
    levels: int = 5,
    points_per_axis: int = 15,
    zoom: float = 0.25,
) -> RefinedMinimum:
    """Continuous reference minimum by iterated grid zoom.

    Scans a points_per_axis^d mesh over the box, re-centers a box shrunk by
    ``zoom`` on the incumbent (shifted to stay inside the original bounds),
    and repeats.  The incumbent carries across levels, so the reported value
    never increases with more levels.
    """
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    if points_per_axis < 2:
        raise ValueError(f"points_per_axis must be >= 2, got {points_per_axis}")
    if not 0 < zoom < 1:
        raise ValueError(f"zoom must be in (0, 1), got {zoom}")
    box = [(float(lo), float(hi)) for lo, hi in box]
    if len(box) != objective.arity:
        raise ValueError(f"box has {len(box)} axes, objective takes {objective.arity}")
    for lo, hi in box:
        if not lo < hi:
            raise ValueError(f"degenerate box axis [{lo}, {hi}]")

    current = list(box)
    best_point: np.ndarray | None = None
    best_value = np.inf
    evaluations = 0
    for _ in range(levels):
        axes = [np.linspace(lo, hi, points_per_axis) for lo, hi in current]
        mesh = np.array(list(itertools.product(*axes)))
        vals = objective.batch(mesh)
        evaluations += len(vals)
        i = int(np.argmin(vals))
        if vals[i] < best_value:
            best_value = float(vals[i])
            best_point = mesh[i]
        widths = [(hi - lo) * zoom for lo, hi in current]
        current = []
        for (lo0, hi0), w, c in zip(box, widths, best_point):
            lo = min(max(c - w / 2.0, lo0), hi0 - w)
            current.append((lo, lo + w))
    return RefinedMinimum(
        point=tuple(float(x) for x in best_point),
        value=best_value,
        num_evaluations=evaluations,
        levels=levels,
    )
