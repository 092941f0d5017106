import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from k3ncount import ComponentCounter, InvalidQuery, LevelMismatch
from k3ncount.estimator import check_queries

X = np.array([[166, 15, 15], [10, 9, 3], [10, 9, 9], [2, 1, 1]])


def test_transform_counts():
    est = ComponentCounter(levels="ABCD").fit(X)
    assert est.transform(X).tolist() == [[2], [1], [0], [1]]
    assert est.predict(X).tolist() == [2, 1, 0, 1]


def test_get_set_params_and_clone():
    est = ComponentCounter(levels="AB", strict=False)
    assert est.get_params() == {"levels": "AB", "strict": False}
    other = clone(est.set_params(levels="C"))
    assert other.levels == "C" and other is not est


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ComponentCounter().transform(X)


def test_in_pipeline():
    pipe = make_pipeline(FunctionTransformer(lambda a: a), ComponentCounter())
    assert pipe.fit_transform(X).ravel().tolist() == [2, 1, 0, 1]


@pytest.mark.parametrize(
    "bad, error",
    [
        (np.array([[10, 9]]), ValueError),
        (np.array([[10.5, 9, 3]]), ValueError),
        (np.array([[10, 9, 5]]), InvalidQuery),
    ],
)
def test_input_validation(bad, error):
    with pytest.raises(error):
        ComponentCounter().fit(bad)


def test_float_rows_that_are_integral_are_accepted():
    assert [q.as_tuple() for q in check_queries([[10.0, 9.0, 3.0]])] == [(10, 9, 3)]


def test_bad_levels():
    with pytest.raises(ValueError):
        ComponentCounter(levels="AZ").fit(X)


def test_reports(monkeypatch):
    reports = ComponentCounter(levels="AB").fit(X).reports(X[:1])
    assert reports[0].counts["A"] == 2

    import k3ncount.counting as counting
    monkeypatch.setattr(counting, "glue_count", lambda q: (99, []))
    est = ComponentCounter(levels="AB").fit(X)
    with pytest.raises(LevelMismatch):
        est.transform(X[:1])
    assert ComponentCounter(levels="AB", strict=False).fit(X).transform(X[:1]).tolist() == [[2]]
