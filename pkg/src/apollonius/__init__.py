"""Concurrent normals to ellipses and ellipsoids.

Counts and locates the feet of normals through a point, evaluates the
two-sheeted caustic, classifies how it meets the ellipsoid and exports
curves and meshes.
"""

from .errors import *  # noqa: F401,F403
from .geom import (DEFAULT_TOL, Count, Ellipse2, Ellipsoid3, ShapeClass, Sheet, Tolerances,
                   make_ellipse, make_ellipsoid, outward_normal, project_radially,
                   quadric_residual)
from .normals2d import (count_normals_2d, joachimsthal_residual, normal_feet_2d,
                        theorem1_points)
from .normals3d import normal_feet_3d, normal_sextic, region_3d
from .caustics import caustic_double_roots, curvature, curvature_centers, on_caustic
from .structure import classify, lemma3_family, triple_point

__version__ = "0.1.0"
