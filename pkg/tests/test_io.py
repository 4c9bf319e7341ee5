from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import pytest

from exact_fa.errors import DomainError
from exact_fa.harness.io import (
    covariance_from_samples,
    dumps_report,
    exact_text,
    read_covariance,
    write_covariance,
    write_json,
    write_table,
)


def test_exact_text():
    assert exact_text(Fraction(1, 4)) == "0.25"
    assert exact_text(Fraction(-7, 20)) == "-0.35"
    assert exact_text(Fraction(3)) == "3"
    assert exact_text(Fraction(1, 3)) == "1/3"


def test_read_csv_of_decimals(tmp_path):
    path = tmp_path / "S.csv"
    path.write_text("1.0,0.5,0.35\n0.5,1.0,0.2\n0.35,0.2,1.0\n\n", encoding="utf-8")
    S = read_covariance(path)
    assert S[0][2] == Fraction(7, 20)
    assert all(isinstance(value, Fraction) for row in S for value in row)


def test_read_json_of_rationals(tmp_path, example1_S):
    path = tmp_path / "S.json"
    path.write_text(json.dumps({"S": [["1", "1/2", "1/3"], ["1/2", "1", "2/3"], ["1/3", "2/3", "1"]]}), encoding="utf-8")
    assert read_covariance(path) == [list(row) for row in example1_S]


def test_covariance_files_round_trip(tmp_path, example1_S):
    for name in ("S.json", "S.csv"):
        path = tmp_path / name
        write_covariance(path, example1_S)
        assert read_covariance(path) == [list(row) for row in example1_S]


def test_read_rejects_bad_files(tmp_path):
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("1,0\n0\n", encoding="utf-8")
    with pytest.raises(DomainError):
        read_covariance(ragged)
    garbage = tmp_path / "garbage.csv"
    garbage.write_text("1,a\nb,1\n", encoding="utf-8")
    with pytest.raises(DomainError):
        read_covariance(garbage)
    with pytest.raises(DomainError):
        read_covariance(tmp_path / "missing.csv")
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(DomainError):
        read_covariance(broken)


def test_sample_covariance_uses_n_normalization():
    samples = np.array([[1.0, 2.0], [3.0, 6.0]])
    assert np.allclose(covariance_from_samples(samples), [[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(DomainError):
        covariance_from_samples(np.ones(3))


def test_reports_serialize_numpy_and_fractions(tmp_path):
    data = {"value": np.float64(0.5), "matrix": np.eye(2), "exact": Fraction(1, 3), "flag": np.bool_(True)}
    assert json.loads(dumps_report(data)) == {"value": 0.5, "matrix": [[1.0, 0.0], [0.0, 1.0]], "exact": "1/3", "flag": True}
    path = tmp_path / "report.json"
    write_json(data, path)
    assert json.loads(path.read_text(encoding="utf-8"))["exact"] == "1/3"


def test_write_table(tmp_path, capsys):
    rows = [{"run": 0, "pattern": "Proper", "extra": 1}]
    path = tmp_path / "runs.csv"
    write_table(rows, path, ("run", "pattern"))
    assert path.read_text(encoding="utf-8").splitlines() == ["run,pattern", "0,Proper"]
    write_table(rows, None, ("run", "pattern"))
    assert "0,Proper" in capsys.readouterr().out
