"""Objective functions for the search experiments.

Three families: the Goldstein-Price polynomial, the Shubert cosine
product, and Lennard-Jones cluster energies.  LJ energies use reduced
units with pair well depth 1 at separation 1, V(r) = r^-12 - 2 r^-6;
all cluster energies are sums of V over distinct pairs.  Geometries
with a pair closer than ``CONTACT_EPS`` return the finite ``ENERGY_CAP``
instead of overflowing (grids reach bond lengths as small as 1e-4,
where r^-12 is large but still representable; only genuine coincidence
is capped).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

#: Pair distance at or below which a geometry counts as coincident.
CONTACT_EPS = 1e-8

#: Finite stand-in energy for coincident geometries.
ENERGY_CAP = 1e12


@dataclass(frozen=True)
class Objective:
    """Named real-valued function of ``arity`` scalar coordinates.

    ``fn`` evaluates one point; ``batch_fn``, when present, evaluates an
    (npoints, arity) array in one vectorized call.
    """

    name: str
    arity: int
    fn: Callable[..., float]
    batch_fn: Callable[[np.ndarray], np.ndarray] | None = None

    def __call__(self, *coords: float) -> float:
        if len(coords) != self.arity:
            raise ValueError(f"{self.name} takes {self.arity} coordinates, got {len(coords)}")
        return float(self.fn(*coords))

    def batch(self, points: np.ndarray) -> np.ndarray:
        """Values at each row of ``points``, shape (npoints,)."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.arity:
            raise ValueError(f"expected shape (npoints, {self.arity}), got {pts.shape}")
        if self.batch_fn is not None:
            return np.asarray(self.batch_fn(pts), dtype=float)
        return np.array([self.fn(*row) for row in pts], dtype=float)


def gp_eval(x1, x2):
    """Goldstein-Price polynomial; global minimum 3 at (0, -1)."""
    a = 1 + (x1 + x2 + 1) ** 2 * (
        19 - 14 * x1 + 3 * x1**2 - 14 * x2 + 6 * x1 * x2 + 3 * x2**2
    )
    b = 30 + (2 * x1 - 3 * x2) ** 2 * (
        18 - 32 * x1 + 12 * x1**2 + 48 * x2 - 36 * x1 * x2 + 27 * x2**2
    )
    return a * b


def shubert_eval(x1, x2):
    """Shubert product of two 5-term cosine sums; 18 global minima at -186.7309."""
    i = np.arange(1, 6)
    s1 = np.sum(i * np.cos((i + 1) * x1 + i))
    s2 = np.sum(i * np.cos((i + 1) * x2 + i))
    return s1 * s2


def _shubert_batch(points: np.ndarray) -> np.ndarray:
    i = np.arange(1, 6)
    x = points[:, :, None]
    sums = np.sum(i * np.cos((i + 1) * x + i), axis=-1)
    return sums[:, 0] * sums[:, 1]


def lj_pair(r: float) -> float:
    """Reduced-unit pair energy V(r) = r^-12 - 2 r^-6 (minimum -1 at r = 1)."""
    if r <= 0:
        raise ValueError(f"pair separation must be positive, got {r}")
    inv6 = r ** -6
    return inv6 * inv6 - 2.0 * inv6


def _lj(r):
    # Vectorized pair energy without the positivity guard (callers pre-check).
    inv6 = np.asarray(r, dtype=float) ** -6
    return inv6 * inv6 - 2.0 * inv6


def trimer_energy(b1: float, b2: float, a1: float) -> float:
    """Energy of three atoms given two bond lengths and the angle between them.

    The third pair distance follows from the law of cosines.  The angle may
    equal pi exactly (collinear); a coincident third pair returns ENERGY_CAP.
    """
    if b1 <= 0 or b2 <= 0:
        raise ValueError(f"bond lengths must be positive, got {b1}, {b2}")
    if not 0 < a1 <= math.pi:
        raise ValueError(f"bond angle must be in (0, pi], got {a1}")
    r12_sq = b1 * b1 + b2 * b2 - 2.0 * b1 * b2 * math.cos(a1)
    r12 = math.sqrt(max(r12_sq, 0.0))
    if r12 <= CONTACT_EPS:
        return ENERGY_CAP
    return lj_pair(b1) + lj_pair(b2) + lj_pair(r12)


@dataclass(frozen=True)
class ClusterGeometry:
    """Frozen atom positions plus their precomputed internal energy."""

    fixed_atoms: np.ndarray  # shape (k, 3)
    fixed_energy: float = field(init=False)

    def __post_init__(self):
        atoms = np.asarray(self.fixed_atoms, dtype=float)
        if atoms.ndim != 2 or atoms.shape[1] != 3:
            raise ValueError(f"fixed_atoms must have shape (k, 3), got {atoms.shape}")
        object.__setattr__(self, "fixed_atoms", atoms)
        energy = 0.0
        for i in range(len(atoms)):
            for j in range(i + 1, len(atoms)):
                r = float(np.linalg.norm(atoms[i] - atoms[j]))
                if r <= CONTACT_EPS:
                    raise ValueError(f"fixed atoms {i} and {j} coincide (r = {r})")
                energy += lj_pair(r)
        object.__setattr__(self, "fixed_energy", energy)

    @property
    def num_fixed(self) -> int:
        return self.fixed_atoms.shape[0]


def cluster_energy(geometry: ClusterGeometry, free_pos) -> float:
    """Total pair energy of the frozen atoms plus one free atom.

    Returns ENERGY_CAP if the free atom sits within CONTACT_EPS of any
    frozen atom.
    """
    pos = np.asarray(free_pos, dtype=float)
    if pos.shape != (3,):
        raise ValueError(f"free position must be a 3-vector, got shape {pos.shape}")
    if not np.isfinite(pos).all():
        raise ValueError("free position must be finite")
    r = np.linalg.norm(geometry.fixed_atoms - pos, axis=1)
    if np.any(r <= CONTACT_EPS):
        return ENERGY_CAP
    return geometry.fixed_energy + float(np.sum(_lj(r)))


def build_fixed_core(num_fixed: int, bond: float) -> ClusterGeometry:
    """Equilateral triangle of side ``bond`` in the z=0 plane, optionally
    capped by the regular-tetrahedron apex over its centroid.

    Triangle: (-bond/2, 0, 0), (bond/2, 0, 0), (0, bond*sqrt(3)/2, 0).
    Apex (num_fixed=4): (0, bond*sqrt(3)/6, bond*sqrt(2/3)).
    """
    if bond <= 0:
        raise ValueError(f"bond must be positive, got {bond}")
    if num_fixed not in (3, 4):
        raise ValueError(f"num_fixed must be 3 or 4, got {num_fixed}")
    atoms = [
        (-bond / 2.0, 0.0, 0.0),
        (bond / 2.0, 0.0, 0.0),
        (0.0, bond * math.sqrt(3.0) / 2.0, 0.0),
    ]
    if num_fixed == 4:
        atoms.append((0.0, bond * math.sqrt(3.0) / 6.0, bond * math.sqrt(2.0 / 3.0)))
    return ClusterGeometry(np.array(atoms))


def _trimer_shared_bond(b, a):
    return trimer_energy(b, b, a)


def _trimer_shared_batch(points: np.ndarray) -> np.ndarray:
    b = points[:, 0]
    a = points[:, 1]
    r12_sq = 2.0 * b * b * (1.0 - np.cos(a))
    r12 = np.sqrt(np.maximum(r12_sq, 0.0))
    out = np.where(r12 > CONTACT_EPS, 2.0 * _lj(b) + _lj(np.maximum(r12, CONTACT_EPS)), ENERGY_CAP)
    return out


GOLDSTEIN_PRICE = Objective(
    "gp", 2, gp_eval, lambda pts: gp_eval(pts[:, 0], pts[:, 1])
)
SHUBERT = Objective("shubert", 2, shubert_eval, _shubert_batch)
#: Three-atom energy with both bonds tied to one grid variable: f(B, A).
LJ_TRIMER = Objective("lj-trimer", 2, _trimer_shared_bond, _trimer_shared_batch)


def free_atom_objective(geometry: ClusterGeometry, pin_x: float | None = None) -> Objective:
    """Cluster energy as a function of one free atom's coordinates.

    With ``pin_x`` set the objective takes (y, z) and the X coordinate is
    held at that value; otherwise it takes (x, y, z).
    """
    if pin_x is None:
        def fn(x, y, z):
            return cluster_energy(geometry, (x, y, z))

        def batch_fn(pts):
            return _free_atom_batch(geometry, pts)

        return Objective("lj-grow-xyz", 3, fn, batch_fn)

    x0 = float(pin_x)

    def fn2(y, z):
        return cluster_energy(geometry, (x0, y, z))

    def batch_fn2(pts):
        full = np.column_stack([np.full(len(pts), x0), pts[:, 0], pts[:, 1]])
        return _free_atom_batch(geometry, full)

    return Objective("lj-grow-yz", 2, fn2, batch_fn2)


def _free_atom_batch(geometry: ClusterGeometry, positions: np.ndarray) -> np.ndarray:
    diff = positions[:, None, :] - geometry.fixed_atoms[None, :, :]
    r = np.linalg.norm(diff, axis=2)
    bad = np.any(r <= CONTACT_EPS, axis=1)
    r = np.maximum(r, CONTACT_EPS)
    total = geometry.fixed_energy + np.sum(_lj(r), axis=1)
    return np.where(bad, ENERGY_CAP, total)


_REGISTRY = {
    "gp": GOLDSTEIN_PRICE,
    "shubert": SHUBERT,
    "lj-trimer": LJ_TRIMER,
}


def get_objective(name: str) -> Objective:
    """Look up a named objective ("gp", "shubert", "lj-trimer")."""
    try:
        return _REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown objective {name!r}; known: {sorted(_REGISTRY)}") from None
