from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import pytest

from exact_fa.errors import DomainError
from exact_fa.harness.simulate import (
    PRESETS,
    SimulationModel,
    draw_samples,
    exact_covariance,
    interpolate_covariance,
    load_model,
    run_generator,
    simulate_covariance,
)
from exact_fa.utils.rationals import round_to_decimals


def test_presets_have_positive_unique_variances():
    for name, model in PRESETS.items():
        assert model.name == name
        assert np.all(model.Psi > 0)
        assert np.allclose(np.diag(model.sigma), 1.0)
    assert PRESETS["s3-p3"].Psi == pytest.approx([0.19, 0.36, 0.64])
    assert PRESETS["s1"].k == 2


def test_model_validation():
    with pytest.raises(DomainError):
        SimulationModel(((1.1,), (0.5,), (0.5,)))
    with pytest.raises(DomainError):
        SimulationModel(((0.5,), (0.5,)), psi=(0.5,))
    with pytest.raises(DomainError):
        SimulationModel(((0.5, 0.1), (0.5,)))
    with pytest.raises(DomainError):
        SimulationModel(((0.5,), (0.5,)), sample_size=1)


def test_load_model_from_preset_and_file(tmp_path):
    assert load_model("S3-P3") is PRESETS["s3-p3"]
    assert load_model("s3-p3", sample_size=50).sample_size == 50
    path = tmp_path / "model.json"
    path.write_text(json.dumps({"L": [0.7, 0.6, 0.5], "N": 200, "name": "mine"}), encoding="utf-8")
    model = load_model(path)
    assert (model.p, model.k, model.sample_size, model.name) == (3, 1, 200, "mine")
    with pytest.raises(DomainError):
        load_model(tmp_path / "nope.json")


def test_run_streams_are_reproducible_and_independent():
    first = run_generator(7, 0).standard_normal(4)
    assert np.array_equal(first, run_generator(7, 0).standard_normal(4))
    assert not np.array_equal(first, run_generator(7, 1).standard_normal(4))
    assert not np.array_equal(first, run_generator(8, 0).standard_normal(4))


def test_samples_follow_the_model():
    model = SimulationModel(((0.9,), (0.8,), (0.6,)), sample_size=20000)
    samples = draw_samples(model, run_generator(3))
    assert samples.shape == (20000, 3)
    assert np.allclose(np.cov(samples, rowvar=False), model.sigma, atol=0.05)


def test_rounding_is_half_to_even():
    assert round_to_decimals(0.25, 1) == Fraction(1, 5)
    assert round_to_decimals(0.35, 1) == Fraction(2, 5)
    assert round_to_decimals(Fraction(-1, 8), 2) == Fraction(-3, 25)


def test_exact_covariance_is_symmetric():
    S = np.array([[1.04, 0.51], [0.49, 0.96]])
    rows = exact_covariance(S, 1)
    assert rows == [[Fraction(1), Fraction(1, 2)], [Fraction(1, 2), Fraction(1)]]
    unrounded = exact_covariance(np.array([[1.0, 0.25], [0.75, 1.0]]), None)
    assert unrounded[0][1] == unrounded[1][0] == Fraction(1, 2)


def test_simulated_problem_is_seeded():
    model = PRESETS["s3-p3"]
    first = simulate_covariance(model, seed=5, decimals=1)
    again = simulate_covariance(model, seed=5, decimals=1)
    other = simulate_covariance(model, seed=5, decimals=1, run=1)
    assert first.S == again.S
    assert first.S != other.S
    assert first.k == 1 and first.sample_size == model.sample_size
    assert all(value.denominator in (1, 2, 5, 10) for row in first.S for value in row)


def test_interpolation_is_exact(example1_S):
    identity = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    assert interpolate_covariance(example1_S, identity, Fraction(1)) == [list(row) for row in example1_S]
    assert interpolate_covariance(example1_S, identity, Fraction(0)) == identity
    middle = interpolate_covariance(example1_S, identity, Fraction(1, 2))
    assert middle[0][2] == Fraction(1, 6)
    with pytest.raises(DomainError):
        interpolate_covariance(example1_S, [[Fraction(1)]], Fraction(1, 2))
