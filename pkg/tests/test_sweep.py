import pytest

from spinbatt.sweep import (
    DEFAULT_OUTPUTS,
    SweepSpec,
    default_jobs,
    evaluate_point,
    expand_points,
    parameter_columns,
    parse_sweep_spec,
    run_sweep,
)


def equal_family_spec(outputs=("t_charge", "eta_max", "gamma")):
    return parse_sweep_spec(
        {
            "axes": {"n_b": [2, 4]},
            "constraints": {"n_c": "n_b", "m": "n_b"},
            "outputs": list(outputs),
        }
    )


class TestParseSweepSpec:
    def test_minimal(self):
        spec = parse_sweep_spec({"axes": {"n_b": [1], "n_c": [2], "m": [1]}})
        assert spec.outputs == DEFAULT_OUTPUTS
        assert spec.window is None

    def test_constraint_shorthand_and_scale(self):
        spec = parse_sweep_spec(
            {
                "axes": {"n_b": [2], "n_c": [10, 20]},
                "constraints": {"m": {"source": "n_c", "scale": 0.5}},
            }
        )
        assert spec.constraints["m"].source == "n_c"
        assert spec.constraints["m"].scale == 0.5

    @pytest.mark.parametrize(
        "doc,match",
        [
            ({}, "axes"),
            ({"axes": {}}, "axes"),
            ({"axes": {"bogus": [1]}}, "unknown axis"),
            ({"axes": {"n_b": []}}, "non-empty"),
            ({"axes": {"n_b": [1]}, "bogus": 1}, "unknown sweep spec keys"),
            ({"axes": {"n_b": [1], "n_c": [1], "m": [1]}, "outputs": ["nope"]}, "output fields"),
            ({"axes": {"n_b": [1], "n_c": [1], "m": [1]}, "window": -2}, "window"),
            (
                {"axes": {"n_b": [1], "n_c": [1], "m": [1]}, "constraints": {"m": "n_b"}},
                "both an axis and a constraint",
            ),
            (
                {"axes": {"n_b": [1], "n_c": [1]}, "constraints": {"m": "omega"}},
                "non-axis",
            ),
            ({"axes": {"n_b": [1], "n_c": [1]}}, "must define"),
        ],
    )
    def test_rejects_malformed_documents(self, doc, match):
        with pytest.raises(ValueError, match=match):
            parse_sweep_spec(doc)


class TestExpansion:
    def test_cartesian_product_in_canonical_order(self):
        spec = parse_sweep_spec(
            {"axes": {"m": [1, 2], "n_b": [1], "n_c": [3, 4]}}
        )
        points = expand_points(spec)
        assert points == [
            {"n_b": 1, "n_c": 3, "m": 1},
            {"n_b": 1, "n_c": 3, "m": 2},
            {"n_b": 1, "n_c": 4, "m": 1},
            {"n_b": 1, "n_c": 4, "m": 2},
        ]

    def test_constraints_substitute_and_round(self):
        spec = parse_sweep_spec(
            {
                "axes": {"n_b": [2], "n_c": [10, 15]},
                "constraints": {"m": {"source": "n_c", "scale": 0.5}},
            }
        )
        points = expand_points(spec)
        assert [p["m"] for p in points] == [5, 8]  # round(7.5) is banker's 8

    def test_parameter_columns_order(self):
        spec = parse_sweep_spec(
            {
                "axes": {"m": [1], "coupling": [1.0], "n_c": [4]},
                "constraints": {"n_b": "m"},
            }
        )
        assert parameter_columns(spec) == ["n_c", "m", "coupling", "n_b"]


class TestEvaluatePoint:
    def test_happy_path_fields(self):
        row = evaluate_point(
            ({"n_b": 1, "n_c": 1, "m": 1}, ("t_charge", "regime", "k"), None, 10.0)
        )
        assert row["error"] is None
        assert row["regime"] == "EQUAL"
        assert row["k"] == 1.0
        assert row["t_charge"] > 0

    def test_invalid_point_becomes_error_row(self):
        row = evaluate_point(
            ({"n_b": 1, "n_c": 1, "m": 5}, ("t_charge",), None, 10.0)
        )
        assert row["t_charge"] is None
        assert "ValueError" in row["error"]

    def test_window_failure_becomes_error_row(self):
        row = evaluate_point(
            ({"n_b": 1, "n_c": 1, "m": 1}, ("t_charge",), 0.01, 10.0)
        )
        assert "SearchWindowError" in row["error"]


class TestRunSweep:
    def test_serial_results(self):
        result = run_sweep(equal_family_spec(), jobs=1)
        assert result.columns == ["n_b", "n_c", "m", "t_charge", "eta_max", "gamma", "error"]
        assert len(result.rows) == 2
        assert all(row["error"] is None for row in result.rows)

    def test_parallel_equals_serial(self):
        spec = equal_family_spec()
        serial = run_sweep(spec, jobs=1)
        parallel = run_sweep(spec, jobs=3)
        assert serial.rows == parallel.rows

    def test_failures_do_not_stop_the_run(self):
        spec = parse_sweep_spec(
            {
                "axes": {"n_b": [1], "n_c": [1], "m": [1, 3]},
                "outputs": ["t_charge"],
            }
        )
        result = run_sweep(spec, jobs=1)
        assert result.rows[0]["error"] is None
        assert result.rows[1]["error"] is not None

    def test_jobs_validation(self):
        with pytest.raises(ValueError):
            run_sweep(equal_family_spec(), jobs=0)


class TestDefaultJobs:
    def test_env_variable(self, monkeypatch):
        monkeypatch.setenv("SPINBATT_JOBS", "6")
        assert default_jobs() == 6

    def test_fallback_serial(self, monkeypatch):
        monkeypatch.delenv("SPINBATT_JOBS", raising=False)
        assert default_jobs() == 1
        monkeypatch.setenv("SPINBATT_JOBS", "junk")
        assert default_jobs() == 1
