"""
Image quality measures.
"""
import numpy as np

from src.manifolds.image import ManifoldImage


def mse(a: ManifoldImage, b: ManifoldImage) -> float:
    """epsilon = (1/N) sum_i dist(a_i, b_i)^2 over all N pixels"""
    a.check_compatible(b)
    d = a.geometry.dist(a.data, b.data)
    return float(np.mean(d ** 2))
