from __future__ import annotations

import pickle

import pytest

from exact_fa.errors import DomainError, PrecisionFailure, ResourceExceeded, SingularCovariance
from exact_fa.pool import WorkerPool


def _square(value: int) -> int:
    if value < 0:
        raise DomainError("negative")
    return value * value


def _stalled(value: int) -> int:
    if value:
        raise PrecisionFailure("l11 - 1", 20)
    raise ResourceExceeded("Groebner basis budget exhausted", {"basis_size": 6, "order": "grevlex"})


@pytest.mark.parametrize("workers", [1, 2])
def test_results_come_back_in_item_order(workers):
    results = WorkerPool(workers).run(_square, [3, -1, 2, 5])
    assert [result.index for result in results] == [0, 1, 2, 3]
    assert [result.value for result in results if result.ok] == [9, 4, 25]
    assert isinstance(results[1].error, DomainError)


def test_worker_errors_are_recorded_per_job():
    first, second = WorkerPool(2).run(_stalled, [0, 1])
    assert isinstance(first.error, ResourceExceeded)
    assert first.error.diagnostics == {"basis_size": 6, "order": "grevlex"}
    assert isinstance(second.error, PrecisionFailure)
    assert second.error.generator == "l11 - 1" and second.error.rounds == 20
    assert "20 rounds" in str(second.error)


@pytest.mark.parametrize(
    "error",
    [
        PrecisionFailure("l21^2 - 1/4", 3),
        ResourceExceeded("wall-clock budget exhausted", {"seconds": 1.5}),
        SingularCovariance(),
        DomainError("negative"),
    ],
)
def test_errors_survive_pickling(error):
    restored = pickle.loads(pickle.dumps(error))
    assert type(restored) is type(error)
    assert str(restored) == str(error)


def test_worker_count_is_at_least_one():
    assert WorkerPool(0).workers == 1
    assert WorkerPool(0).run(_square, []) == []
