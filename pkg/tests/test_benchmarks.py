"""
Desk-scale denoising benchmarks on 64 x 64 synthetic images.

These take minutes; run them with `pytest -m slow`.
"""
import time

import numpy as np
import pytest

from src.denoise import DenoiseParams, mse, nlmeans, nlmeans_defaults, nlmmse
from src.imaging import generate
from src.noise import NoiseModel, NoiseSpec, RngState, add_noise

pytestmark = pytest.mark.slow

DIMS = (64, 64)
SEEDS = range(5)


def _run(name: str, sigma: float, seed: int, model: NoiseModel = NoiseModel.TANGENT, **overrides):
    clean = generate(name, DIMS, seed)
    noisy = add_noise(clean, NoiseSpec(model=model, sigma=sigma), RngState(seed))
    params = DenoiseParams.for_image(noisy.descriptor, noisy.dims, sigma, **overrides)
    oracle, final = nlmmse(noisy, params, quiet=True)
    return clean, noisy, mse(noisy, clean), mse(oracle, clean), mse(final, clean)


@pytest.mark.parametrize("name, sigma, bound", [
    ("s1-shapes", 0.3, 0.2),
    ("spd3-blocks", 0.125, 0.2),
    ("s2-vortex", 0.3, 0.3),
])
def test_error_ratio(name, sigma, bound):
    ratios = []
    for seed in SEEDS:
        _, _, noisy, oracle, final = _run(name, sigma, seed)
        ratios.append(final / noisy)
        if name == "s2-vortex":
            assert final <= oracle
    assert np.median(ratios) <= bound


def test_nlmmse_beats_nlmeans_on_the_circle():
    ranked = {"noisy": [], "nlmeans": [], "nlmmse": []}
    for seed in range(20):
        clean, noisy_image, noisy, _, final = _run("s1-shapes", 0.3, seed)
        p = nlmeans_defaults(noisy_image.descriptor, noisy_image.dims)
        baseline = nlmeans(noisy_image, int(p["s"]), int(p["w"]), int(p["k"]), p["delta"], p["tau"], quiet=True)
        ranked["noisy"].append(noisy)
        ranked["nlmeans"].append(mse(baseline, clean))
        ranked["nlmmse"].append(final)
    medians = {name: float(np.median(eps)) for name, eps in ranked.items()}
    assert medians["nlmmse"] < medians["nlmeans"] < medians["noisy"]


def test_acceleration_keeps_the_quality():
    start = time.perf_counter()
    *_, fast = _run("spd3-blocks", 0.125, 0, accelerate=True)
    fast_time = time.perf_counter() - start
    start = time.perf_counter()
    *_, full = _run("spd3-blocks", 0.125, 0, accelerate=False)
    full_time = time.perf_counter() - start
    assert abs(fast - full) <= 0.15 * full
    assert fast_time <= 0.25 * full_time


def test_said_noise_is_removed_as_well():
    _, _, noisy, _, final = _run("spd2-blocks", 0.3, 1, model=NoiseModel.SAID)
    assert final < 0.5 * noisy
