"""Good / ordinary / bad element classification against an angle threshold.

For triangles, "bad" means the maximum inner angle exceeds pi - 2*theta
(the flat-element failure mode); "good" means the minimum inner angle is at
least theta; everything in between is "ordinary". For tetrahedra only the
minimum-angle split applies, so "ordinary" never occurs.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import geometry
from .errors import InvalidParam
from .mesh import ConformalMesh


class ElementClass(Enum):
    GOOD = "good"
    ORDINARY = "ordinary"
    BAD = "bad"


_CODE = {ElementClass.GOOD: "G", ElementClass.ORDINARY: "O", ElementClass.BAD: "B"}


@dataclass
class ClassificationReport:
    theta: float
    classes: np.ndarray  # array of ElementClass, one per element
    theta_min: np.ndarray
    theta_max: np.ndarray

    @property
    def counts(self):
        vals, counts = np.unique(
            [c.value for c in self.classes], return_counts=True
        )
        out = {c: 0 for c in ("good", "ordinary", "bad")}
        out.update(dict(zip(vals.tolist(), counts.tolist())))
        return out

    @property
    def bad_elements(self):
        return np.flatnonzero(self.classes == ElementClass.BAD)

    @property
    def worst_theta_min(self):
        """(value, element id) of the smallest minimum angle."""
        i = int(np.argmin(self.theta_min))
        return float(self.theta_min[i]), i

    @property
    def worst_theta_max(self):
        i = int(np.argmax(self.theta_max))
        return float(self.theta_max[i]), i

    def class_string(self):
        """Compact per-element code string, 'G'/'O'/'B'."""
        return "".join(_CODE[c] for c in self.classes)


def element_angle_table(m: ConformalMesh):
    """(theta_min, theta_max) arrays over all elements."""
    if m.dim == 2:
        ang = geometry.triangle_corner_angles(m.element_points())
        return ang.min(axis=1), ang.max(axis=1)
    mins = np.empty(m.n_elements)
    maxs = np.empty(m.n_elements)
    for e in range(m.n_elements):
        mins[e], maxs[e] = geometry.tetrahedron_angles(m.simplex(e))
    return mins, maxs


def classify(m: ConformalMesh, theta: float) -> ClassificationReport:
    """Classify every element of the mesh relative to the threshold theta.

    Threshold ties sit on the non-bad side: a triangle with
    theta_max == pi - 2*theta exactly is not bad.
    """
    if not 0.0 < theta <= math.pi / 3:
        raise InvalidParam("theta must lie in (0, pi/3]")
    tmin, tmax = element_angle_table(m)
    classes = np.empty(m.n_elements, dtype=object)
    if m.dim == 2:
        bad = tmax > math.pi - 2.0 * theta
        good = ~bad & (tmin >= theta)
    else:
        bad = tmin < theta
        good = ~bad
    classes[bad] = ElementClass.BAD
    classes[good] = ElementClass.GOOD
    classes[~bad & ~good] = ElementClass.ORDINARY
    return ClassificationReport(theta=theta, classes=classes, theta_min=tmin, theta_max=tmax)
