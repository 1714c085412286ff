import json
import math

import numpy as np
import pytest

import mtsf


def test_csv_round_trip(tmp_path):
    m = mtsf.parse_csv("time,a,b\n1,1.5,4\n2,2.5,5\n3,3.5,6\n", timestamp_column="time")
    assert m.shape == (3, 2)
    assert m.series_ids == ["a", "b"]
    assert m.timestamps == ["1", "2", "3"]
    path = tmp_path / "m.csv"
    mtsf.write_csv(m, path)
    again = mtsf.load_csv(path, timestamp_column="timestamp")
    np.testing.assert_array_equal(again.values, m.values)


def test_resample_and_slice():
    m = mtsf.SeriesMatrix(np.array([[1.0], [3.0], [5.0], [7.0]]))
    np.testing.assert_array_equal(mtsf.resample_mean(m, 2).values, [[2.0], [6.0]])
    np.testing.assert_array_equal(mtsf.resample_sum(m, 2).values, [[4.0], [12.0]])
    s = mtsf.slice_window(m, 2, 2)
    assert s.origin_index == 2
    np.testing.assert_array_equal(s.values, [[3.0], [5.0]])
    with pytest.raises(mtsf.DataError):
        mtsf.slice_window(m, 4, 2)
    with pytest.raises(mtsf.Error):
        mtsf.resample_mean(m, 0)


def test_scaler():
    values = np.array([[0.0, 4.0], [5.0, 4.0], [10.0, 4.0]])
    t = mtsf.fit_scaler(values)
    assert t.degenerate_columns == {1}
    np.testing.assert_allclose(t.apply(values), [[0, 0], [0.5, 0], [1, 0]])
    np.testing.assert_allclose(t.invert(np.array([1.2, 0.3])), [12.0, 4.0])


def test_metrics():
    assert mtsf.smape([2.0], [1.0]) == pytest.approx(2 / 3)
    assert mtsf.smape([1.0, 0.0], [0.0, 0.0]) == 1.0
    assert mtsf.maape([0.0], [5.0]) == pytest.approx(math.pi / 2)
    assert mtsf.mase([4.0], [3.0], np.array([[1.0], [2.0], [3.0]])) == pytest.approx(1.0)
    assert mtsf.mase([7.0], [6.0], np.full((3, 1), 7.0)) is None
    assert mtsf.cv_objective([0.3, 0.5], [0.4, 0.1]) == mtsf.smape([0.3, 0.5], [0.4, 0.1])


def test_plan_dump():
    p = mtsf.plan("matrix-list", 10, 8, window=3)
    assert len(p["folds"]) == 2
    assert p["folds"][0]["validation_input"] == "5:7->6:8"
    assert p["folds"][1]["target_row"] == 10
    assert p["dump"].count("\n") == 2
    with pytest.raises(mtsf.ConfigError):
        mtsf.plan("multidim", 10, 8, window=8)


def test_grid_search_and_run_single():
    assert "esn" in mtsf.family_names()
    assert mtsf.default_grid("ridge_ar")["p"] == [1, 2, 4, 8]
    data = mtsf.synthetic.seasonal_traffic(41, 4, 3).values
    scaled = mtsf.fit_scaler(data[:40]).apply(data[:40])
    r = mtsf.grid_search("ridge_ar", scaled, grid={"p": [1, 2], "lambda": 0.1})
    assert len(r["mean_errors"]) == 2
    assert len(r["fold_errors"][0]) == 8
    assert r["best"] == r["assignments"][r["best_index"]]

    run = mtsf.run_single(data, "ridge_ar", grid={"p": [1, 2], "lambda": [0.1]}, seed=5)
    assert run["forecast"].shape == (4,)
    assert 0.0 <= run["smape"] <= 2.0
    again = mtsf.run_single(data, "ridge_ar", grid={"p": [1, 2], "lambda": [0.1]}, seed=5)
    assert again == {**run, "forecast": again["forecast"]}
    np.testing.assert_array_equal(again["forecast"], run["forecast"])


def test_benchmark(tmp_path):
    mtsf.write_csv(mtsf.synthetic.random_walk(100, 3, 1), tmp_path / "walk.csv")
    cfg = {
        "datasets": [{"name": "walk", "csv": "walk.csv"}],
        "window_lengths": [40],
        "monte_carlo_runs": 2,
        "seed": 4,
        "models": ["naive", {"family": "ridge_ar", "grid": {"p": [1], "lambda": [1.0]}}],
    }
    (tmp_path / "cfg.json").write_text(json.dumps(cfg))
    report = mtsf.run_benchmark(tmp_path / "cfg.json")
    assert report["seed"] == 4
    assert len(report["cells"]) == 2
    assert all(len(c["runs"]) == 2 for c in report["cells"])
    assert mtsf.run_benchmark(tmp_path / "cfg.json", threads=3) == report
    assert "sMAPE" in mtsf.format_report(report)
    with pytest.raises(mtsf.IoError):
        mtsf.run_benchmark(tmp_path / "missing.json")
