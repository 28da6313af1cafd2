"""
Pixel manifolds: descriptors, geometries, points and images
"""
from src.manifolds.base import Geometry
from src.manifolds.euclidean import EuclideanGeometry
from src.manifolds.hyperbolic import HyperbolicGeometry
from src.manifolds.image import ManifoldImage
from src.manifolds.points import (
    ManifoldPoint,
    ProductPoint,
    TangentBasis,
    TangentCoords,
    dist,
    exp,
    geometry_for,
    log,
    product_dist,
    product_exp,
    product_geometry,
    product_log,
    tangent_basis,
    validate,
)
from src.manifolds.product import ProductGeometry
from src.manifolds.simplex import SimplexGeometry
from src.manifolds.spd import SpdGeometry
from src.manifolds.sphere import SphereGeometry

# Imported after the geometry submodules: importing src.manifolds.euclidean and
# src.manifolds.spd binds those names on this package, which would otherwise
# shadow the descriptor factories of the same names.
from src.manifolds.descriptor import (
    ManifoldDescriptor,
    ManifoldKind,
    circle,
    euclidean,
    hyperbolic2,
    simplex1,
    spd,
    sphere2,
)

__all__ = [
    "Geometry",
    "EuclideanGeometry",
    "SphereGeometry",
    "SpdGeometry",
    "SimplexGeometry",
    "HyperbolicGeometry",
    "ProductGeometry",
    "ManifoldDescriptor",
    "ManifoldKind",
    "euclidean",
    "circle",
    "sphere2",
    "spd",
    "simplex1",
    "hyperbolic2",
    "ManifoldPoint",
    "TangentCoords",
    "TangentBasis",
    "ProductPoint",
    "ManifoldImage",
    "geometry_for",
    "product_geometry",
    "validate",
    "dist",
    "exp",
    "log",
    "tangent_basis",
    "product_dist",
    "product_exp",
    "product_log",
]
