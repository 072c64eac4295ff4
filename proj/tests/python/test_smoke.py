"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import mtsim


def test_rastrigin_known_values():
    assert mtsim.rastrigin(0.0, 0.0) == pytest.approx(0.0)
    assert mtsim.rastrigin(1.0, 1.0) == pytest.approx(2.0)


def test_weighted_frechet_toy_example():
    a = mtsim.AleCurve("t", "f", [0.0, 1.0], [0.0, 0.0], [0.5, 0.5])
    b = mtsim.AleCurve("t", "f", [0.0, 1.0], [1.0, 1.0], [0.5, 0.5])
    assert mtsim.weighted_frechet(a, b) == pytest.approx(2.0)
    assert mtsim.brute_force_frechet(a, b) == pytest.approx(2.0)
    assert mtsim.weight_ratio(0.1, 0.4) == pytest.approx(4.0)


def test_validation_errors_surface_as_value_errors():
    with pytest.raises(ValueError):
        mtsim.AleCurve("t", "f", [1.0, 0.0], [0.0, 0.0], [0.5, 0.5])
    with pytest.raises(ValueError):
        mtsim.TaskDataset("t", ["a"], np.zeros((1, 1)), [1.0])


def test_generate_task_and_dataset_shape():
    spec = mtsim.TaskSpec("task_1", n=500, seed=9)
    data = mtsim.generate_task(spec)
    assert data.n == 500
    assert data.feature_names == ["X1", "X2", "X3", "X4", "X5"]
    x3 = np.asarray(data.column("X3"))
    assert (x3 > 0).all() and (x3 < 1).all()


def test_ale_with_python_predictor():
    rng = np.random.default_rng(4)
    samples = rng.uniform(0.0, 1.0, size=(200, 2))
    targets = 2.0 * samples[:, 0]
    data = mtsim.TaskDataset("t", ["x1", "x2"], samples, targets.tolist())
    model = mtsim.predictor_from_callable("t", 2, lambda batch: 2.0 * batch[:, 0])

    curve = mtsim.ale_curve(model, data, "x1", 10)
    values = np.asarray(curve.values)
    knots = np.asarray(curve.knots)
    counts = np.asarray(curve.counts, dtype=float)
    center = (counts * knots).sum() / counts.sum()
    assert np.allclose(values, 2.0 * (knots - center), atol=1e-6)

    null = mtsim.ale_curve(model, data, "x2", 10)
    assert np.allclose(np.asarray(null.values), 0.0, atol=1e-10)


def test_end_to_end_similarity_and_clustering():
    specs = mtsim.synthetic_suite(11, 400, False)
    tasks = [mtsim.generate_task(s) for s in specs]
    models = [mtsim.oracle_model(s) for s in specs]
    options = mtsim.ProfileOptions()
    options.raw_k = 12
    options.grid_k = 12
    options.importance = mtsim.ImportanceSource.uniform
    profiles = mtsim.build_profiles(tasks, models, options)
    assert len(profiles) == 5

    matrix = mtsim.similarity_matrix(profiles, mtsim.Matching.by_name, False)
    values = matrix.values
    assert values.shape == (5, 5)
    assert np.allclose(np.diag(values), 0.0)
    assert np.allclose(values, values.T, atol=1e-9)  # uniform importances

    dendro = mtsim.ward_cluster(mtsim.symmetrize(matrix))
    labels = mtsim.cut_tree(dendro, 2)
    assert set(labels.values()) == {1, 2}
    assert "task_1" in mtsim.to_newick(dendro)


def test_permutation_importance_sums_to_one():
    spec = mtsim.TaskSpec("task_1", n=300, seed=5)
    data = mtsim.generate_task(spec)
    model = mtsim.oracle_model(spec)
    importance = mtsim.permutation_importance(model, data, repeats=3, seed=1)
    assert math.isclose(sum(importance.values()), 1.0, abs_tol=1e-9)
    assert importance["X3"] <= 1e-9
