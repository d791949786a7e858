"""Smoke tests for the Python bindings."""

import json

import numpy as np
import pytest

import ncalab


def test_seed_grid():
    g = ncalab.new_seed_grid(25)
    assert g.alive_count() == 1
    assert g.alive[12, 12] == 1
    assert g.signal.sum() == 0
    with pytest.raises(ValueError):
        ncalab.new_seed_grid(2)


def test_rollout_and_loss_anchor():
    trace = ncalab.rollout(ncalab.Genome(), 25, 50, True)
    assert trace.actions.shape == (50, 25, 25)
    assert trace.executed.sum() == 50  # the lone seed runs once per step
    target = ncalab.square_target(25, 12)
    assert abs(ncalab.loss(trace, target, 0, 50) - 0.2288) < 1e-12


def test_pair_counts_and_empowerment():
    trace = ncalab.rollout(ncalab.Genome(), 25, 50, False)
    assert len(ncalab.build_pairs(trace, 1)) == 49
    assert len(ncalab.build_pairs(trace, 45)) == 5
    assert len(ncalab.build_pairs(trace, 1, 5)) == 5
    assert ncalab.empowerment(trace, 1) == 0.0  # constant 128 action


def test_mutual_information():
    pairs = ncalab.SensorActionPairs(np.array([[0, 0], [1, 1]], dtype=np.uint8), 1)
    assert abs(ncalab.mutual_information(pairs) - 1.0) < 1e-12
    independent = ncalab.SensorActionPairs(
        np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=np.uint8), 1
    )
    assert abs(ncalab.mutual_information(independent)) < 1e-12


def test_targets():
    assert ncalab.square_target(25, 12).cell_count() == 144
    assert ncalab.triangle_target(25, 13).cell_count() == 49
    assert ncalab.x_target(25, 5).cell_count() == 21
    mask = ncalab.square_target(25, 12).mask
    assert mask.shape == (25, 25)
    assert mask[12, 12] == 1


def test_metrics():
    assert ncalab.instability(ncalab.Genome(), 25, 50) == 0.0
    u, p = ncalab.rank_sum_test(
        [float(i) for i in range(1, 21)], [float(100 + i) for i in range(1, 21)]
    )
    assert u == 0.0
    assert p < 1e-6
    grid = ncalab.new_seed_grid(9)
    assert ncalab.connected_components(grid) == 1
    assert ncalab.boundary_proportion(grid) == 0.0


def test_rng_and_mutation():
    rng = ncalab.Rng(7)
    parent = ncalab.random_genome(rng, 1)
    child = ncalab.mutate(parent, rng, 2)
    changed = int((child.weights != parent.weights).sum()) + int(
        (child.bias != parent.bias).sum()
    )
    assert changed <= 1
    assert child.parent_id == 1
    assert np.all(np.abs(parent.weights) <= 1.0)


def test_genome_json_roundtrip(tmp_path):
    rng = ncalab.Rng(11)
    g = ncalab.random_genome(rng, 5)
    path = str(tmp_path / "g.json")
    g.save(path)
    back = ncalab.Genome.load(path)
    assert np.array_equal(back.weights, g.weights)
    assert np.array_equal(back.bias, g.bias)
    assert back.id == 5


def test_evolve_smoke(tmp_path):
    cfg = ncalab.ExperimentConfig.from_json(
        json.dumps(
            {
                "variant": "bi_loss",
                "grid_size": 9,
                "steps": 10,
                "population_size": 4,
                "generations": 2,
                "replicates": 1,
                "master_seed": 3,
                "target": "square:4",
                "workers": 1,
            }
        )
    )
    cfg.output_dir = str(tmp_path / "run")
    out_dir = ncalab.cmd_evolve(cfg, True)
    assert (tmp_path / "run" / "summary.csv").exists()
    assert (tmp_path / "run" / "manifest.json").exists()
    champ = ncalab.Genome.load(str(tmp_path / "run" / "replicate_000" / "champion.json"))
    assert champ.weights.shape == (5, 10)
    assert out_dir == cfg.output_dir
