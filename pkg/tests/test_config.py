from __future__ import annotations

import json
from fractions import Fraction

from exact_fa.config import (
    DEFAULT_MAX_BASIS_SIZE,
    DEFAULT_MAX_DEGREE,
    DEFAULT_MAX_SECONDS,
    DEFAULT_MAX_TERMS,
    AlgebraSettings,
    ConfigManager,
    FitSettings,
    StudyConfig,
    as_fraction,
)


def test_defaults():
    config = StudyConfig.default()
    assert config.mode == "classify"
    assert config.fit == FitSettings()
    assert config.fit.algorithm == "jennrich"
    assert config.study.classify_mode == "numeric"
    assert config.simulation.exact_decimals == 1
    assert config.simulation.numeric_decimals is None


def test_default_path_follows_the_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("EXACT_FA_HOME", str(tmp_path))
    manager = ConfigManager()
    assert manager.path == tmp_path / "exact-fa.json"
    assert manager.config == StudyConfig.default()


def test_save_and_load_round_trip(tmp_path):
    path = tmp_path / "config.json"
    manager = ConfigManager(path)
    manager.config.factors = 2
    manager.config.ridge = "1/100"
    manager.config.fit.starts = 7
    manager.config.study.profile_index = 1
    manager.save()
    loaded = ConfigManager(path).config
    assert loaded == manager.config
    assert json.loads(path.read_text(encoding="utf-8"))["fit"]["starts"] == 7


def test_partial_file_keeps_other_defaults(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"seed": 9, "algebra": {"max_degree": 12}}), encoding="utf-8")
    config = ConfigManager(path).config
    assert config.seed == 9
    assert config.algebra.max_degree == 12
    assert config.algebra.max_basis_size == StudyConfig.default().algebra.max_basis_size


def test_unreadable_file_falls_back_to_defaults(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{not json", encoding="utf-8")
    assert ConfigManager(path).config == StudyConfig.default()


def test_as_fraction_reads_floats_through_repr():
    assert as_fraction(0.1) == Fraction(1, 10)
    assert as_fraction("1/100") == Fraction(1, 100)
    assert as_fraction(Fraction(2, 3)) == Fraction(2, 3)


def test_algebra_budget_keywords(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"algebra": {"max_seconds": None, "max_reductions": 40}}), encoding="utf-8")
    algebra = ConfigManager(path).config.algebra
    assert algebra.max_seconds is None
    assert algebra.budget() == {
        "max_basis_size": DEFAULT_MAX_BASIS_SIZE,
        "max_degree": DEFAULT_MAX_DEGREE,
        "max_reductions": 40,
        "max_terms": DEFAULT_MAX_TERMS,
        "max_seconds": None,
    }
    assert AlgebraSettings().max_seconds == DEFAULT_MAX_SECONDS
