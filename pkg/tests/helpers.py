"""Shared scenario factories for the test suite."""

import math

from improperdim import NoiseSpec, ScenarioConfig, SourceSpec

AR_COEFFICIENTS = (0.5, math.sqrt(7.0) / 4.0, 0.5, 0.25)


def array_scenario(noise_kind="white", snapshot_count=1000, seed=0):
    """Reference benchmark: 60-sensor ULA, four improper sources of variance 5
    with circularity coefficients 1/0.9/0.8/0.6 at 10/15/20/25 degrees, and
    unit-variance white noise or AR(4)-colored noise with innovation
    variance 1/4."""
    if noise_kind == "white":
        noise = NoiseSpec("white", 1.0)
    else:
        noise = NoiseSpec("spatial_ar", 0.25, AR_COEFFICIENTS)
    return ScenarioConfig(
        sensor_count=60,
        angles_deg=(10.0, 15.0, 20.0, 25.0),
        sources=tuple(SourceSpec(5.0, k) for k in (1.0, 0.9, 0.8, 0.6)),
        noise=noise,
        snapshot_count=snapshot_count,
        seed=seed,
    )


def small_scenario(
    sensor_count=8,
    circularities=(0.9, 0.7),
    variances=None,
    angles=(40.0, 70.0),
    snapshot_count=2000,
    seed=0,
    noise_variance=1.0,
):
    """Small improper scenario for fast tests."""
    if variances is None:
        variances = tuple(5.0 for _ in circularities)
    return ScenarioConfig(
        sensor_count=sensor_count,
        angles_deg=tuple(angles),
        sources=tuple(SourceSpec(v, k) for v, k in zip(variances, circularities)),
        noise=NoiseSpec("white", noise_variance),
        snapshot_count=snapshot_count,
        seed=seed,
    )


def proper_scenario(sensor_count=6, snapshot_count=1000, seed=0, noise_variance=1.0):
    """Noise-only scenario (no improper components)."""
    return ScenarioConfig(
        sensor_count=sensor_count,
        angles_deg=(),
        sources=(),
        noise=NoiseSpec("white", noise_variance),
        snapshot_count=snapshot_count,
        seed=seed,
    )
