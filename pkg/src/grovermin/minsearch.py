"""Minimum search by repeated prepare-mark-amplify-measure rounds.

Each round prepares the uniform superposition over all grid indices, marks
every index whose objective value is at or below the current threshold
(round 1 marks everything), applies the round's scheduled number of
amplification steps, and measures once.  The threshold is the best value
measured so far, so the marked set only ever shrinks.  The round budget
comes from a Schedule; termination from a StopRule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .encoding import GridLayout
from .grover import iterate
from .objectives import Objective
from .statevector import MarkedSet, Statevector, sample, uniform_superposition

#: Fixed per-round iteration counts of the Baritompa-style schedule.
BARITOMPA_ENTRIES = (0, 0, 0, 1, 1, 0, 1, 1, 2, 1, 2, 3, 1, 4, 5, 1, 6, 2, 7, 9, 11, 13, 16, 5)


class NumericFailure(FloatingPointError):
    """Non-finite amplitudes mid-search; carries the rounds completed so far."""

    def __init__(self, message: str, trace: "SearchTrace"):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class Schedule:
    """Per-round amplification-step counts.

    Kinds: "baritompa" (the 24-entry list above; rounds past the list reuse
    its final entry and are flagged as extended unless ``extend`` is off),
    "incremental" (1, 2, 3, ...), "constant" (always ``constant``), and
    "custom" (explicit finite list).
    """

    kind: str
    constant: int = 1
    entries: tuple[int, ...] = ()
    extend: bool = True

    def __post_init__(self):
        if self.kind not in ("baritompa", "incremental", "constant", "custom"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if self.kind == "constant" and self.constant < 0:
            raise ValueError(f"constant iteration count must be >= 0, got {self.constant}")
        if self.kind == "custom":
            if not self.entries:
                raise ValueError("custom schedule needs at least one entry")
            if any(e < 0 for e in self.entries):
                raise ValueError(f"schedule entries must be >= 0: {self.entries}")

    def iterations(self, round_index: int) -> int | None:
        """Step count for 1-based ``round_index``; None once exhausted."""
        if round_index < 1:
            raise ValueError(f"round_index must be >= 1, got {round_index}")
        if self.kind == "incremental":
            return round_index
        if self.kind == "constant":
            return self.constant
        entries = BARITOMPA_ENTRIES if self.kind == "baritompa" else self.entries
        if round_index <= len(entries):
            return entries[round_index - 1]
        if self.kind == "baritompa" and self.extend:
            return entries[-1]
        return None

    def is_extended(self, round_index: int) -> bool:
        """True when the round reuses the final list entry past its end."""
        return self.kind == "baritompa" and self.extend and round_index > len(BARITOMPA_ENTRIES)

    def describe(self) -> str:
        if self.kind == "constant":
            return f"constant:{self.constant}"
        return self.kind

    @classmethod
    def parse(cls, text) -> "Schedule":
        """Parse "baritompa", "incremental", "constant:K", or an entry list."""
        if isinstance(text, (list, tuple)):
            return cls("custom", entries=tuple(int(k) for k in text))
        if text == "baritompa":
            return cls("baritompa")
        if text == "incremental":
            return cls("incremental")
        if text.startswith("constant:"):
            try:
                k = int(text.split(":", 1)[1])
            except ValueError:
                raise ValueError(f"bad constant schedule {text!r}; expected constant:K") from None
            return cls("constant", constant=k)
        raise ValueError(
            f"unknown schedule {text!r}; expected baritompa, incremental, or constant:K"
        )


@dataclass(frozen=True)
class StopRule:
    """Round-loop termination: any satisfied condition stops the search.

    ``stall_window``: stop after this many consecutive rounds without a
    threshold improvement.  ``target``: stop as soon as the best value
    reaches it (used when the grid minimum is known).  ``max_rounds``:
    unconditional cap; stopping on it (or on schedule exhaustion) reports
    converged=False.
    """

    stall_window: int | None = 8
    target: float | None = None
    max_rounds: int | None = None

    def __post_init__(self):
        if self.stall_window is not None and self.stall_window < 1:
            raise ValueError(f"stall_window must be >= 1, got {self.stall_window}")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise ValueError(f"max_rounds must be >= 1, got {self.max_rounds}")
        if self.stall_window is None and self.target is None and self.max_rounds is None:
            raise ValueError("at least one stop condition is required")


@dataclass(frozen=True)
class RoundRecord:
    round: int
    iterations: int
    extended: bool
    index: int
    point: tuple[float, ...]
    value: float
    threshold_before: float
    threshold_after: float


@dataclass
class SearchTrace:
    rounds: list[RoundRecord] = field(default_factory=list)

    @property
    def num_rounds(self) -> int:
        return len(self.rounds)

    @property
    def total_iterations(self) -> int:
        return sum(r.iterations for r in self.rounds)


@dataclass
class SearchResult:
    best_value: float
    best_index: int
    best_point: tuple[float, ...]
    trace: SearchTrace
    converged: bool
    # Amplification steps spent up to and including the round that first
    # measured best_value; excludes the stall-confirmation tail.
    iterations_to_best: int

    @property
    def num_rounds(self) -> int:
        return self.trace.num_rounds

    @property
    def total_iterations(self) -> int:
        return self.trace.total_iterations


def adapted_grover_min(
    objective: Objective,
    layout: GridLayout,
    schedule: Schedule,
    stop: StopRule,
    rng: np.random.Generator,
    *,
    values: np.ndarray | None = None,
    strict: bool = False,
    observer=None,
) -> SearchResult:
    """Threshold-descent minimum search over the layout's grid.

    ``values``: optional precomputed objective values for all indices (they
    are computed once here otherwise).  ``strict`` marks f < M instead of
    f <= M.  ``observer(round, state, mask, threshold)`` is called with each
    round's pre-measurement state.
    """
    if objective.arity != layout.arity:
        raise ValueError(
            f"objective {objective.name} has arity {objective.arity}, layout has {layout.arity}"
        )
    if values is None:
        values = objective.batch(layout.all_points())
    values = np.asarray(values, dtype=float)
    if values.shape != (layout.size,):
        raise ValueError(f"values must have shape ({layout.size},), got {values.shape}")

    n = layout.total_qubits
    threshold = math.inf
    best_value = math.inf
    best_index = -1
    iterations_to_best = 0
    total_iterations = 0
    stall = 0
    trace = SearchTrace()
    converged = False

    round_index = 0
    while True:
        round_index += 1
        k = schedule.iterations(round_index)
        if k is None:
            break  # schedule exhausted: converged stays False
        if math.isinf(threshold):
            mask = np.ones(layout.size, dtype=bool)
        elif strict:
            mask = values < threshold
        else:
            mask = values <= threshold
        marked = MarkedSet(n, mask)
        try:
            state = iterate(uniform_superposition(n), marked, k)
            if observer is not None:
                observer(round_index, state, marked, threshold)
            idx = sample(state, rng)
        except FloatingPointError as exc:
            raise NumericFailure(str(exc), trace) from exc
        value = float(values[idx])
        new_threshold = min(threshold, value)
        trace.rounds.append(
            RoundRecord(
                round=round_index,
                iterations=k,
                extended=schedule.is_extended(round_index),
                index=idx,
                point=layout.decode(idx),
                value=value,
                threshold_before=threshold,
                threshold_after=new_threshold,
            )
        )
        total_iterations += k
        if value < threshold:
            stall = 0
            if value < best_value:
                best_value = value
                best_index = idx
                iterations_to_best = total_iterations
        else:
            stall += 1
        threshold = new_threshold

        if stop.target is not None and best_value <= stop.target:
            converged = True
            break
        if stop.stall_window is not None and stall >= stop.stall_window:
            converged = True
            break
        if stop.max_rounds is not None and round_index >= stop.max_rounds:
            break

    if best_index < 0:
        raise RuntimeError("search ended before any measurement")
    return SearchResult(
        best_value=best_value,
        best_index=best_index,
        best_point=layout.decode(best_index),
        trace=trace,
        converged=converged,
        iterations_to_best=iterations_to_best,
    )


@dataclass(frozen=True)
class SearchSetup:
    """Everything one search needs except the random stream."""

    objective: Objective
    layout: GridLayout
    schedule: Schedule
    stop: StopRule
    strict: bool = False


@dataclass
class EnsembleStats:
    """Statistics over independent seeded searches of the same setup."""

    results: list[SearchResult]
    reference_value: float
    success_fraction: float
    mean_rounds: float
    median_rounds: float
    mean_total_iterations: float
    median_total_iterations: float
    mean_iterations_to_best: float
    median_iterations_to_best: float
    rounds_histogram: dict[int, int]


def run_ensemble(setup: SearchSetup, n_runs: int, base_seed: int) -> EnsembleStats:
    """Run ``n_runs`` searches with seeds split from ``base_seed``.

    Success means a run's best value equals the exhaustive grid minimum.
    Objective values over the grid are computed once and shared.
    """
    if n_runs < 1:
        raise ValueError(f"n_runs must be >= 1, got {n_runs}")
    values = setup.objective.batch(setup.layout.all_points())
    reference = float(values.min())
    results = []
    for child in np.random.SeedSequence(base_seed).spawn(n_runs):
        rng = np.random.default_rng(child)
        results.append(
            adapted_grover_min(
                setup.objective,
                setup.layout,
                setup.schedule,
                setup.stop,
                rng,
                values=values,
                strict=setup.strict,
            )
        )
    rounds = np.array([r.num_rounds for r in results])
    totals = np.array([r.total_iterations for r in results])
    to_best = np.array([r.iterations_to_best for r in results])
    successes = sum(1 for r in results if r.best_value == reference)
    hist: dict[int, int] = {}
    for r in rounds:
        hist[int(r)] = hist.get(int(r), 0) + 1
    return EnsembleStats(
        results=results,
        reference_value=reference,
        success_fraction=successes / n_runs,
        mean_rounds=float(rounds.mean()),
        median_rounds=float(np.median(rounds)),
        mean_total_iterations=float(totals.mean()),
        median_total_iterations=float(np.median(totals)),
        mean_iterations_to_best=float(to_best.mean()),
        median_iterations_to_best=float(np.median(to_best)),
        rounds_histogram=dict(sorted(hist.items())),
    )
