"""Sampled radial solution pairs and their CSV form."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np


def fmt(x) -> str:
    return format(float(x), ".17g")


@dataclass
class RadialProfile:
    """Radial pair ``(u, v)`` sampled on a grid of ``[0, 1]``.

    ``lambdas`` are the coefficients the pair solves the system with:
    ``(1, 1)`` for normalised non-homogeneous solutions, discrete
    eigenvalues in the homogeneous regime.  ``residual_sup`` is the largest
    finite-difference residual relative to the sup of the right-hand side.
    """

    radii: np.ndarray
    u_values: np.ndarray
    v_values: np.ndarray
    central: tuple = (float("nan"), float("nan"))
    lambdas: tuple = (1.0, 1.0)
    method: str = "Shooting"
    residual_sup: float = float("nan")
    boundary_defect: float = float("nan")
    stop_reason: str = ""
    du_values: np.ndarray | None = None
    dv_values: np.ndarray | None = None
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        self.radii = np.asarray(self.radii, dtype=float)
        self.u_values = np.asarray(self.u_values, dtype=float)
        self.v_values = np.asarray(self.v_values, dtype=float)

    def __len__(self):
        return self.radii.size

    def is_positive(self) -> bool:
        inner = (self.radii > 0) & (self.radii < 1)
        return bool(np.all(self.u_values[inner] > 0) and np.all(self.v_values[inner] > 0))

    def is_decreasing(self) -> bool:
        inner = self.radii < 1
        return bool(np.all(np.diff(self.u_values[inner]) < 0) and np.all(np.diff(self.v_values[inner]) < 0))

    def summary(self) -> dict:
        out = {
            "method": self.method,
            "central": [float(self.central[0]), float(self.central[1])],
            "lambdas": [float(self.lambdas[0]), float(self.lambdas[1])],
            "residual_sup": float(self.residual_sup),
            "boundary_defect": float(self.boundary_defect),
            "nodes": int(self.radii.size),
        }
        out.update(self.info)
        return out

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("r,u,v\n")
            for r, u, v in zip(self.radii, self.u_values, self.v_values):
                fh.write(f"{fmt(r)},{fmt(u)},{fmt(v)}\n")

    @classmethod
    def from_csv(cls, path, **kwargs) -> "RadialProfile":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = [h.strip() for h in next(reader)]
            if header != ["r", "u", "v"]:
                raise ValueError(f"expected header r,u,v, got {','.join(header)}")
            rows = np.array([[float(x) for x in row] for row in reader if row], dtype=float)
        if rows.size == 0:
            raise ValueError("profile has no rows")
        kwargs.setdefault("method", "File")
        return cls(rows[:, 0], rows[:, 1], rows[:, 2], central=(rows[0, 1], rows[0, 2]), **kwargs)
