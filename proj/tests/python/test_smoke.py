"""Smoke tests for the python bindings."""

import math

import pytest

import shufflecast as sc


def test_design_matrix_and_predict():
    rows = sc.build_design_matrix([sc.ParameterVector(4, 8)], 3)
    assert rows == [[1, 4, 16, 64, 8, 64, 512]]


def test_fit_recovers_known_coefficients():
    dataset = sc.ProfileDataset()
    dataset.input_bytes = 1
    for m in range(4, 33, 4):
        for r in range(4, 33, 4):
            load = 2.0 + 3.0 * m + 0.5 * r * r
            dataset.observations = dataset.observations + [
                sc.Observation(sc.ParameterVector(m, r), load)
            ]
    model = sc.fit(dataset, degree=3)
    expected = [2.0, 3.0, 0.0, 0.0, 0.0, 0.5, 0.0]
    assert all(abs(a - b) < 1e-6 for a, b in zip(model.coefficients, expected))
    assert sc.predict(model, sc.ParameterVector(10, 4)) == pytest.approx(40.0)


def test_model_document_round_trip():
    dataset = sc.ProfileDataset()
    dataset.input_bytes = 1
    obs = []
    for m in range(4, 33, 4):
        for r in range(4, 33, 4):
            obs.append(sc.Observation(sc.ParameterVector(m, r), 1.0 + 0.1 * m * m + r))
    dataset.observations = obs
    model = sc.fit(dataset, degree=3)
    loaded = sc.load_model(sc.save_model(model))
    assert list(loaded.coefficients) == list(model.coefficients)


def test_metrics():
    assert sc.mape([100.0], [75.0]) == pytest.approx(25.0)
    assert sc.pred25([100.0], [125.0]) == 0.0
    assert sc.rmse([3.0, 4.0], [0.0, 0.0]) == pytest.approx(math.sqrt(12.5))
    assert sc.r_squared([1.0, 2.0, 3.0], [1.0, 2.0, 5.0]) == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        sc.mape([0.0], [1.0])


def test_simulator_and_grid():
    cluster = sc.default_cluster()
    workload = sc.workload_preset("wordcount-like")
    workload.noise_sigma = 0.0
    workload.per_pair_overhead_bytes = 0.0
    record = sc.simulate_shuffle(cluster, workload, sc.ParameterVector(20, 20), seed=1)
    assert record.shuffle_bytes == pytest.approx(workload.input_bytes * 4 / 5)

    grid = sc.run_profile_grid(cluster, workload, [4, 8], [4, 8], 2, 42)
    assert len(grid.runs) == 8
    assert len(grid.dataset.observations) == 4


def test_paper_protocol(tmp_path):
    config = sc.PipelineConfig()
    config.workload = sc.workload_preset("wordcount-like", 100000000)
    config.grid_values = [4, 8, 12, 16]
    config.repetitions = 3
    config.degree = 2
    config.test_size = 5
    config.seed = 7
    config.out_dir = tmp_path / "artifacts"
    result = sc.run_paper_protocol(config)
    assert len(result.report.residuals) == 5
    assert (tmp_path / "artifacts" / "model.json").exists()
    assert (tmp_path / "artifacts" / "plot.csv").exists()


def test_ingest_round_trip():
    text = "app,maps,reduces,input_bytes,run,shuffle_bytes\nwc,4,8,12884901888,1,5000000\n"
    records = sc.parse_measurements_csv(text)
    assert records[0].num_maps == 4
    reparsed = sc.parse_measurements_csv(sc.serialize_measurements_csv(records))
    assert [(r.app, r.num_maps, r.num_reduces, r.input_bytes, r.run_index, r.shuffle_bytes)
            for r in reparsed] == [("wc", 4, 8, 12884901888, 1, 5000000.0)]
    dataset = sc.aggregate_runs(records)
    assert len(dataset.observations) == 1


def test_net_rate_log_integration():
    samples = sc.parse_net_rate_log("0 eth0 0.5 0.5\n20 eth0 0.5 0.5\n", "eth0")
    assert sc.integrate_window(samples, sc.ShuffleWindow(5.0, 15.0)) == pytest.approx(10000.0)
