"""Exact-solution descriptors: value, gradient and optional Hessian callables.

All callables are vectorized over a trailing coordinate axis: value maps
(m, 2) -> (m,), gradient -> (m, 2), hessian -> (m, 2, 2).
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True)
class ScalarField:
    value: Callable
    gradient: Optional[Callable] = None
    hessian: Optional[Callable] = None
    name: str = ""


def quartic_solution() -> ScalarField:
    """u = x(1-x) y(1-y): zero on the unit-square boundary."""

    def value(p):
        x, y = p[..., 0], p[..., 1]
        return x * (1 - x) * y * (1 - y)

    def gradient(p):
        x, y = p[..., 0], p[..., 1]
        gx = (1 - 2 * x) * y * (1 - y)
        gy = x * (1 - x) * (1 - 2 * y)
        return np.stack([gx, gy], axis=-1)

    def hessian(p):
        x, y = p[..., 0], p[..., 1]
        hxx = -2 * y * (1 - y)
        hyy = -2 * x * (1 - x)
        hxy = (1 - 2 * x) * (1 - 2 * y)
        return np.stack(
            [np.stack([hxx, hxy], axis=-1), np.stack([hxy, hyy], axis=-1)], axis=-2
        )

    return ScalarField(value, gradient, hessian, name="quartic")


def quartic_load() -> ScalarField:
    """f = 2(x(1-x) + y(1-y)), the Poisson load matching quartic_solution."""

    def value(p):
        x, y = p[..., 0], p[..., 1]
        return 2 * (x * (1 - x) + y * (1 - y))

    return ScalarField(value, name="quartic-load")


def affine_field(a: float, b: float, c: float) -> ScalarField:
    """u = a + b x + c y."""

    def value(p):
        return a + b * p[..., 0] + c * p[..., 1]

    def gradient(p):
        g = np.zeros(p.shape[:-1] + (2,))
        g[..., 0] = b
        g[..., 1] = c
        return g

    def hessian(p):
        return np.zeros(p.shape[:-1] + (2, 2))

    return ScalarField(value, gradient, hessian, name=f"affine({a},{b},{c})")


def zero_field() -> ScalarField:
    return affine_field(0.0, 0.0, 0.0)


#: Fields addressable from the command line.
NAMED_FIELDS = {
    "quartic": quartic_solution,
    "linear": lambda: affine_field(-1.0, 2.0, 3.0),
    "zero": zero_field,
}

#: Loads matching the named exact solutions (-laplacian of the field).
NAMED_LOADS = {
    "quartic": quartic_load,
    "linear": zero_field,
    "zero": zero_field,
}
