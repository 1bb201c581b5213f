import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stratx.synth import (STATE_BASE_TEMPS, SynthSpec, gen_bodyweight, gen_interaction, gen_noisy_quadratic,
                          gen_weather, generate, interaction_response, weather_response)


def test_interaction_formula():
    assert interaction_response(0.0, 7.3) == 10
    assert interaction_response(1.0, 0.0) == 11


def test_interaction_sample():
    ds = gen_interaction(2000, seed=0)
    x1, x2, x3 = ds.features.T
    np.testing.assert_array_equal(ds.response, interaction_response(x1, x2))
    assert abs(np.corrcoef(x3, ds.response)[0, 1]) < 0.05
    assert ds.features.min() >= 0 and ds.features.max() < 10


def test_quadratic_noiseless():
    ds = gen_noisy_quadratic(500, sigma=0, seed=1)
    x1, x2 = ds.features.T
    np.testing.assert_array_equal(ds.response, x1 ** 2 + x2 + 10)
    assert np.all(np.abs(ds.features) <= 2)


def test_quadratic_noise_level():
    ds = gen_noisy_quadratic(10000, sigma=2, seed=3)
    x1, x2 = ds.features.T
    resid = ds.response - x1 ** 2 - x2 - 10
    assert abs(resid.std() - 2) <= 0.1


def test_weather_shape_and_formula():
    ds = gen_weather(3, seed=0, sigma=0)
    assert ds.n == 5 * 365 * 3
    assert ds.col_meta[0].category_labels == ("AZ", "CA", "CO", "NV", "WA")
    state, day = ds.features.T
    assert set(day) == set(range(1, 366))
    np.testing.assert_allclose(weather_response(40.0, 365.0), 40.0, atol=1e-12)
    labels = ds.col_meta[0].category_labels
    for code, name in enumerate(labels):
        y = ds.response[state == code]
        assert np.ptp(y) == pytest.approx(20, abs=1e-3)
        np.testing.assert_allclose(y.mean(), STATE_BASE_TEMPS[name], atol=0.1)
    az, nv = ds.response[state == 0], ds.response[state == 3]
    np.testing.assert_allclose(az - nv, 10)


def test_weather_noise_default():
    ds = generate(SynthSpec("weather", n=3, seed=2))
    state, day = ds.features.T
    labels = ds.col_meta[0].category_labels
    base = np.array([STATE_BASE_TEMPS[labels[int(c)]] for c in state])
    assert abs((ds.response - weather_response(base, day)).std() - 4) < 0.2


def test_bodyweight_formula():
    ds = gen_bodyweight(2000, seed=0)
    sex, preg, height, edu = ds.features.T
    expected = 120 + 10 * (height - height.min()) + 40 * preg - 1.5 * edu
    np.testing.assert_allclose(ds.response, expected, atol=1e-9)
    lo = np.argmin(height)
    assert ds.response[lo] == pytest.approx(120 + 40 * preg[lo] - 1.5 * edu[lo])


def test_bodyweight_supports():
    ds = gen_bodyweight(3000, seed=4)
    sex, preg, height, edu = ds.features.T
    assert ds.col_meta[0].category_labels == ("F", "M")
    female = sex == 0
    assert not np.any(preg[~female] == 1)
    assert np.all((height[female] >= 60.5) & (height[female] <= 70))
    assert np.all((height[~female] >= 61) & (height[~female] <= 76))
    assert np.all((edu[female] >= 12) & (edu[female] <= 20))
    assert np.all((edu[~female] >= 10) & (edu[~female] <= 18))
    assert 0.4 < female.mean() < 0.6
    assert 0.4 < preg[female].mean() < 0.6


@pytest.mark.parametrize("kind", ["interaction", "noisy_quadratic", "weather", "bodyweight"])
def test_same_seed_bit_identical(kind):
    n = 2 if kind == "weather" else 300
    a, b = generate(SynthSpec(kind, n=n, seed=7)), generate(SynthSpec(kind, n=n, seed=7))
    assert a.features.tobytes() == b.features.tobytes()
    assert a.response.tobytes() == b.response.tobytes()
    c = generate(SynthSpec(kind, n=n, seed=8, sigma=1.0 if kind == "noisy_quadratic" else None))
    assert c.response.tobytes() != a.response.tobytes()


@given(st.integers(1, 50), st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_interaction_supports(n, seed):
    ds = gen_interaction(n, seed)
    assert ds.n == n and ds.p == 3
    assert np.all((ds.features >= 0) & (ds.features < 10))


def test_bad_spec():
    with pytest.raises(ValueError):
        SynthSpec("rent")
    with pytest.raises(ValueError):
        SynthSpec("interaction", n=0)
    with pytest.raises(ValueError):
        SynthSpec("noisy_quadratic", sigma=-1)
