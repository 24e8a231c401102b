"""Radial meshes on [0, 1]."""
import math

import numpy as np


def uniform_mesh(cells: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, cells + 1)


def graded_mesh(cells: int, ratio: float = 1.05) -> np.ndarray:
    """Uniform spacing ``1/cells`` away from the origin, geometric near it.

    Cell sizes shrink by ``ratio`` towards ``r = 0`` until they reach about
    ``h^2``; the graded zone spans roughly ``h/(ratio - 1)``.  The node count
    is therefore a little larger than ``cells + 1``.
    """
    h = 1.0 / cells
    k = int(math.ceil(math.log(cells) / math.log(ratio)))
    sizes = h * ratio ** -np.arange(k, 0, -1, dtype=float)
    inner = np.concatenate(([0.0], np.cumsum(sizes)))
    rest = 1.0 - inner[-1]
    m = max(1, int(math.ceil(rest / h)))
    outer = inner[-1] + rest * np.arange(1, m + 1) / m
    r = np.concatenate((inner, outer))
    r[-1] = 1.0
    return r
