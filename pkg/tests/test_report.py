import csv
import io
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lgl_dyadic import DomainError, PropertyReport, check_quasi_uniform, from_json, lgl_grid, to_csv, to_json
from lgl_dyadic.report import CSV_LEAD, CSV_TAIL, SCHEMA_NAME, SCHEMA_VERSION


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_quasi_uniform_row_at_2000():
    c = check_quasi_uniform(lgl_grid(2000))
    r = PropertyReport("quasi_uniform", 2000, "holds", realized_constants={"C_g": c}, subject="lgl")
    (row,) = _rows(to_csv([r]))
    assert row["C_g"] == repr(c)
    assert abs(float(row["C_g"]) - 2.352303456118672) <= 1e-12


def test_empty_csv_is_header_only():
    assert to_csv([]) == ",".join(CSV_LEAD + CSV_TAIL) + "\n"


def test_mixed_kinds_refused():
    a = PropertyReport("mq", 3, "holds")
    b = PropertyReport("str", 3, "holds")
    with pytest.raises(DomainError):
        to_csv([a, b])


def test_fails_needs_witness():
    r = PropertyReport("nested", (19, 20), "fails", alpha=1.0)
    with pytest.raises(DomainError):
        to_json([r])
    with pytest.raises(DomainError):
        to_csv([r])


@pytest.mark.parametrize(
    "kwargs",
    [
        {"property": "bogus", "degree": 1, "verdict": "holds"},
        {"property": "mq", "degree": 1, "verdict": "maybe"},
    ],
)
def test_enums_are_checked(kwargs):
    with pytest.raises(DomainError):
        PropertyReport(**kwargs)


def test_non_finite_constant_refused():
    r = PropertyReport("quasi_uniform", 4, "holds", realized_constants={"C_g": float("inf")})
    with pytest.raises(DomainError):
        to_json([r])


def test_nested_failure_json():
    r = PropertyReport(
        "nested",
        (19, 20),
        "fails",
        alpha=1.0,
        witness={"missing_node": [6, 3], "missing_node_value": -0.90625},
        subject="standalone",
    )
    doc = json.loads(to_json([r]))
    assert doc["schema"] == SCHEMA_NAME and doc["schema_version"] == SCHEMA_VERSION
    (rep,) = doc["reports"]
    assert rep["verdict"] == "fails" and rep["degree"] == [19, 20]
    assert rep["witness"]["missing_node_value"] == -0.90625


def test_numpy_values_are_normalized():
    r = PropertyReport("mq", np.int64(7), "holds", realized_constants={"x": np.float64(0.1)},
                       witness={"k": np.int32(2), "v": np.array([1.5, 2.5])})
    assert type(r.degree) is int
    assert type(r.realized_constants["x"]) is float
    assert r.witness == {"k": 2, "v": [1.5, 2.5]}


def test_from_json_checks_schema():
    with pytest.raises(DomainError):
        from_json(json.dumps({"schema": "other", "schema_version": 1, "reports": []}))
    with pytest.raises(DomainError):
        from_json(json.dumps({"schema": SCHEMA_NAME, "schema_version": 99, "reports": []}))


def test_cardinality_campaign_shape():
    reports = [
        PropertyReport("cardinality", n, "reported", alpha=1.0,
                       realized_constants={"lgl_nodes": n + 1, "dyadic_nodes": 2 * n})
        for n in range(1, 101)
    ]
    rows = _rows(to_csv(reports))
    assert len(rows) == 100
    assert rows[0]["degree"] == "1" and rows[0]["lgl_nodes"] == "2" and rows[0]["dyadic_nodes"] == "2"


finite = st.floats(allow_nan=False, allow_infinity=False)


@settings(max_examples=100, deadline=None)
@given(
    values=st.dictionaries(st.sampled_from(["A", "B", "C_g", "ratio"]), finite, max_size=4),
    degree=st.one_of(st.integers(1, 3000), st.tuples(st.integers(1, 3000), st.integers(1, 3000))),
    alpha=st.one_of(st.none(), st.floats(0.01, 100)),
    verdict=st.sampled_from(["holds", "fails", "reported"]),
)
def test_round_trip_and_bit_exact_csv(values, degree, alpha, verdict):
    witness = {"k": 3, "x": 0.1} if verdict == "fails" else None
    r = PropertyReport("equivalence", degree, verdict, alpha=alpha, realized_constants=values,
                       witness=witness, runtime_ms=12, subject="nested")
    (back,) = from_json(to_json([r]))
    assert back == r
    (row,) = _rows(to_csv([r]))
    for name, v in values.items():
        assert float(row[name]) == v
    if alpha is not None:
        assert float(row["alpha"]) == alpha
    if witness:
        assert json.loads(row["witness"]) == witness


def test_column_order_is_stable():
    r = PropertyReport("equivalence", 5, "holds", realized_constants={"max_ratio": 2.0, "A": 1.0})
    header = to_csv([r]).splitlines()[0].split(",")
    assert header == list(CSV_LEAD) + ["A", "max_ratio"] + list(CSV_TAIL)
