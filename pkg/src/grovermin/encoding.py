"""Basis-index <-> grid-point codec for multivariable search domains.

Each variable gets ``q`` qubits and an endpoint-inclusive uniform grid of
2**q levels: level k maps to ``lo + k*(hi - lo)/(2**q - 1)``, so level 0 is
exactly ``lo`` and level 2**q - 1 is exactly ``hi``.  A register index packs
the per-variable levels with the FIRST variable in the MOST significant
bits, matching a tensor product written left to right.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class VariableSpec:
    """One search variable: closed interval [lo, hi] sampled on 2**qubits levels."""

    name: str
    lo: float
    hi: float
    qubits: int

    def __post_init__(self):
        if self.qubits < 1:
            raise ValueError(f"{self.name}: qubits must be >= 1, got {self.qubits}")
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise ValueError(f"{self.name}: bounds must be finite")
        if self.hi <= self.lo:
            raise ValueError(f"{self.name}: hi must exceed lo, got [{self.lo}, {self.hi}]")

    @property
    def levels(self) -> int:
        return 1 << self.qubits

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.levels - 1)

    def level_to_value(self, k: int) -> float:
        if not 0 <= k < self.levels:
            raise ValueError(f"{self.name}: level {k} outside [0, {self.levels})")
        # Snap the end levels so decode(encode(lo)) == lo and likewise for hi,
        # independent of rounding in lo + k*step.
        if k == 0:
            return self.lo
        if k == self.levels - 1:
            return self.hi
        return self.lo + k * self.step

    def value_to_level(self, x: float) -> tuple[int, bool]:
        """Nearest grid level, half-away-from-zero; clamped flag if x was outside."""
        if np.isnan(x):
            raise ValueError(f"{self.name}: cannot encode NaN")
        t = (x - self.lo) / self.step
        k = int(np.floor(t + 0.5))
        clamped = False
        if k < 0:
            k, clamped = 0, True
        elif k >= self.levels:
            k, clamped = self.levels - 1, True
        return k, clamped

    def axis_points(self) -> np.ndarray:
        pts = self.lo + np.arange(self.levels) * self.step
        pts[0] = self.lo
        pts[-1] = self.hi
        return pts


class GridLayout:
    """Packs several variables' grid levels into one register index."""

    def __init__(self, variables: list[VariableSpec]):
        if not variables:
            raise ValueError("at least one variable is required")
        names = [v.name for v in variables]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.variables = list(variables)
        self.total_qubits = sum(v.qubits for v in variables)
        self.size = 1 << self.total_qubits
        # Shift of each variable's level field inside the packed index; the
        # first variable lands in the most significant bits.
        shifts = []
        pos = self.total_qubits
        for v in variables:
            pos -= v.qubits
            shifts.append(pos)
        self._shifts = shifts

    @property
    def arity(self) -> int:
        return len(self.variables)

    def levels(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.size:
            raise ValueError(f"index {index} outside [0, {self.size})")
        return tuple(
            (index >> s) & (v.levels - 1) for v, s in zip(self.variables, self._shifts)
        )

    def decode(self, index: int) -> tuple[float, ...]:
        """Grid point for a basis index."""
        return tuple(
            v.level_to_value(k) for v, k in zip(self.variables, self.levels(index))
        )

    def decode_batch(self, indices: np.ndarray) -> np.ndarray:
        """Grid points for an int array of indices, shape (len(indices), arity)."""
        idx = np.asarray(indices, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= self.size):
            raise ValueError("index outside register range")
        cols = []
        for v, s in zip(self.variables, self._shifts):
            k = (idx >> s) & (v.levels - 1)
            x = v.lo + k * v.step
            x[k == 0] = v.lo
            x[k == v.levels - 1] = v.hi
            cols.append(x)
        return np.stack(cols, axis=-1)

    def all_points(self) -> np.ndarray:
        """Every grid point in index order, shape (size, arity)."""
        return self.decode_batch(np.arange(self.size, dtype=np.int64))

    def encode(self, values: tuple[float, ...] | list[float]) -> tuple[int, bool]:
        """Index of the nearest grid point; flag is True if any value was clamped."""
        if len(values) != self.arity:
            raise ValueError(f"expected {self.arity} values, got {len(values)}")
        index = 0
        clamped_any = False
        for v, s, x in zip(self.variables, self._shifts, values):
            k, clamped = v.value_to_level(float(x))
            index |= k << s
            clamped_any |= clamped
        return index, clamped_any

    def __repr__(self) -> str:
        parts = ", ".join(
            f"{v.name}[{v.lo}, {v.hi}]/{v.qubits}q" for v in self.variables
        )
        return f"GridLayout({parts})"


def square_layout(names: list[str], lo: float, hi: float, qubits_each: int) -> GridLayout:
    """Layout with the same interval and qubit budget for every variable."""
    return GridLayout([VariableSpec(n, lo, hi, qubits_each) for n in names])
