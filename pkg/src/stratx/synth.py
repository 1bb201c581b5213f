"""Seeded synthetic datasets with known partial dependence.

Every column draws from its own PCG64 stream spawned from the root seed, so
adding a column to a generator never changes the values of the others.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .data import Dataset, from_columns

KINDS = ("interaction", "noisy_quadratic", "weather", "bodyweight")

STATE_BASE_TEMPS = {"AZ": 90.0, "CA": 70.0, "CO": 40.0, "NV": 80.0, "WA": 60.0}


@dataclass(frozen=True)
class SynthSpec:
    kind: str
    n: int = 2000
    sigma: Optional[float] = None  # None: 0 for noisy_quadratic, 4 for weather
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.sigma is not None and self.sigma < 0:
            raise ValueError("sigma must be >= 0")


def _streams(seed: int, names: list[str]) -> dict[str, np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(len(names))
    return {name: np.random.Generator(np.random.PCG64(child)) for name, child in zip(names, children)}


def interaction_response(x1, x2):
    return x1 ** 2 + x1 * x2 + 5 * x1 * np.sin(3 * x2) + 10


def gen_interaction(n: int, seed: int = 0) -> Dataset:
    """x1, x2, x3 ~ U(0, 10); y = x1^2 + x1*x2 + 5*x1*sin(3*x2) + 10.
    x3 does not enter y."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _streams(seed, ["x1", "x2", "x3"])
    cols = {name: r.uniform(0, 10, size=n) for name, r in rng.items()}
    y = interaction_response(cols["x1"], cols["x2"])
    return from_columns(cols, y)


def gen_noisy_quadratic(n: int, sigma: float = 0.0, seed: int = 0) -> Dataset:
    """x1, x2 ~ U(-2, 2); y = x1^2 + x2 + 10 + N(0, sigma)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    rng = _streams(seed, ["x1", "x2", "noise"])
    x1 = rng["x1"].uniform(-2, 2, size=n)
    x2 = rng["x2"].uniform(-2, 2, size=n)
    eps = rng["noise"].normal(0.0, sigma, size=n) if sigma > 0 else np.zeros(n)
    return from_columns({"x1": x1, "x2": x2}, x1 ** 2 + x2 + 10 + eps)


def weather_response(state_base, dayofyear):
    return state_base + 10 * np.sin(2 * np.pi / 365 * dayofyear + np.pi)


def gen_weather(n_per_state_day: int = 3, seed: int = 0, sigma: float = 4.0) -> Dataset:
    """Daily temperature for five states: ``n_per_state_day`` observations
    (e.g. years) per state and day of year 1..365.

    y = base[state] + 10*sin(2*pi/365*day + pi) + N(0, sigma)
    """
    if n_per_state_day < 1:
        raise ValueError("n_per_state_day must be >= 1")
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    rng = _streams(seed, ["noise"])
    states = list(STATE_BASE_TEMPS)
    days = np.arange(1, 366)
    state_col = np.repeat(states, len(days) * n_per_state_day)
    day_col = np.tile(np.repeat(days, n_per_state_day), len(states)).astype(np.float64)
    base = np.array([STATE_BASE_TEMPS[s] for s in state_col])
    n = len(state_col)
    eps = rng["noise"].normal(0.0, sigma, size=n) if sigma > 0 else np.zeros(n)
    y = weather_response(base, day_col) + eps
    return from_columns({"state": state_col, "dayofyear": day_col}, y,
                        categorical=["state"], response_name="temperature")


def gen_bodyweight(n: int, seed: int = 0) -> Dataset:
    """Body weight with codependent sex, pregnancy, height and education.

    Women are 65 + U(-4.5, 5) inches tall with 12 + U(0, 8) years of
    education and are pregnant with probability 0.5; men are 68 + U(-7, 8)
    inches, 10 + U(0, 8) years, never pregnant. The weight is
    120 + 10*(height - min height of this sample) + 40*pregnant - 1.5*education.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _streams(seed, ["sex", "pregnant", "height", "education"])
    female = rng["sex"].random(n) < 0.5
    pregnant = np.where(female, rng["pregnant"].random(n) < 0.5, False).astype(int)
    height = np.where(female, 65 + rng["height"].uniform(-4.5, 5, size=n),
                      68 + rng["height"].uniform(-7, 8, size=n))
    education = np.where(female, 12 + rng["education"].uniform(0, 8, size=n),
                         10 + rng["education"].uniform(0, 8, size=n))
    y = 120 + 10 * (height - height.min()) + 40 * pregnant - 1.5 * education
    cols = {
        "sex": np.where(female, "F", "M"),
        "pregnant": pregnant,
        "height": height,
        "education": education,
    }
    return from_columns(cols, y, categorical=["sex", "pregnant"], response_name="weight")


def generate(spec: SynthSpec) -> Dataset:
    if spec.kind == "interaction":
        return gen_interaction(spec.n, spec.seed)
    if spec.kind == "noisy_quadratic":
        return gen_noisy_quadratic(spec.n, spec.sigma or 0.0, spec.seed)
    if spec.kind == "weather":
        # n counts observations per (state, day)
        return gen_weather(spec.n, spec.seed, 4.0 if spec.sigma is None else spec.sigma)
    return gen_bodyweight(spec.n, spec.seed)
