# SPDX-License-Identifier: Apache-2.0
import math

import numpy as np
import pytest

import bibc


def square(cx, cy, side):
    return bibc.Rectangle(bibc.Point(cx, cy), side, side)


def test_geometry():
    assert bibc.distance(bibc.Point(0, 0), bibc.Point(3, 4)) == pytest.approx(5.0)
    assert bibc.path_gain(bibc.Point(0, 0), bibc.Point(2, 0)) == 0.25
    assert len(bibc.boundary_points(square(0, 0, 5), 0.25)) == 80
    pts = bibc.partition_centroids(square(0.5, 0.5, 1), 2, 2)
    assert [tuple(p) for p in pts][0] == (0.25, 0.25)
    with pytest.raises(bibc.GeometryError):
        bibc.path_gain(bibc.Point(1, 1), bibc.Point(1, 1))


def test_deployment_text_round_trip():
    dep = bibc.Deployment([bibc.Point(0, 0), bibc.Point(10, 0), bibc.Point(4, 7)], 8, square(5, 5, 20))
    back = bibc.Deployment.from_text(dep.to_text())
    assert len(back) == 3
    assert back.aps[2] == bibc.Point(4, 7)
    assert bibc.nearest_ap(dep, bibc.Point(9, 1)) == 1
    with pytest.raises(ValueError):
        bibc.Deployment([bibc.Point(0, 0)], 1, square(0, 0, 2))


def test_probing_signal_is_numpy():
    phi = bibc.make_probing_signal(4, 8, 2.0)
    m = phi.matrix
    assert m.shape == (4, 8)
    np.testing.assert_allclose(m @ m.conj().T, 4.0 * np.eye(4), atol=1e-10)
    seqs = bibc.make_orthogonal_sequences(2)
    assert seqs.power_coefficient == 0.5


def test_detector_closed_form_and_mc():
    dep = bibc.Deployment([bibc.Point(-1, 0), bibc.Point(1, 0)], 1, square(0, 0, 4))
    cfg = bibc.DetectorConfig()
    cfg.ce_set = [0]
    r = bibc.closed_form_pe(dep, bibc.Point(0, 0), cfg, 2.0)
    assert r.pe == pytest.approx(0.158655253931457051, rel=1e-12)
    mc = bibc.monte_carlo_ber(dep, bibc.Point(0, 0), cfg, bibc.make_probing_signal(1, 2, 1.0), 20000, 3)
    assert abs(mc.ber - r.pe) < 4 * math.sqrt(r.pe * (1 - r.pe) / 20000)


def test_metrics():
    dep = bibc.Deployment([bibc.Point(1, 0), bibc.Point(-1, 0), bibc.Point(0, 1)], 1, square(0, 0, 4))
    o = bibc.Point(0, 0)
    assert bibc.lambda1(dep, o, [0, 1]) == pytest.approx(4.0)
    assert bibc.lambda2(dep, o, 2) == pytest.approx(4.0)
    assert bibc.lambda3(dep, o, [0, 1]) == pytest.approx(2.0)


def test_selection_and_campaign():
    rng = np.random.default_rng(4)
    aps = [bibc.Point(*xy) for xy in rng.uniform(0, 30, size=(12, 2))]
    dep = bibc.Deployment(aps, 8, square(15, 15, 30))
    region = square(15, 15, 5)
    ce = bibc.select_ce(dep, region)
    assert 0 <= ce.best.ce_index < 12
    step = bibc.default_boundary_step(region)
    best = bibc.exhaustive_pair(dep, region, step)
    pair = bibc.select_pair(dep, region, 11, step)
    bench = bibc.benchmark_pair(dep, region, step)
    assert pair.worst_value == best.worst_value
    assert bench.worst_value <= best.worst_value
    assert bibc.snr_gap_db(1.86, 1.0) == pytest.approx(2.695129442179163)

    cfg = bibc.CampaignConfig()
    cfg.k_list = [6]
    cfg.kappa_list = [2]
    cfg.n_deployments = 10
    cfg.snr_db = bibc.CampaignConfig.snr_grid(20.0, 80.0, 0.5)
    a = bibc.run_campaign(cfg, 1)
    b = bibc.run_campaign(cfg, 3)
    assert a.per_k[0].pe_benchmark == b.per_k[0].pe_benchmark
    assert all(o <= p for o, p in zip(a.per_k[0].pe_optimal[0], a.per_k[0].pe_benchmark))

    heat = bibc.emit_heatmap(dep, region, ce.best.ce_index, 5, 5, 60.0)
    assert len(heat.values) == 25 and len(heat.pe) == 25
