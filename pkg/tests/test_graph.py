# -*- coding: utf-8 -*-
import io
import math

import numpy as np
import pytest

from manifold_filter_combine.errors import ArgumentError, ConfigurationError
from manifold_filter_combine.graph import (GraphConfig, SparseGraph, assemble_laplacian, build_eps_graph,
                                           build_knn_graph, build_laplacian, check_connected, check_laplacian,
                                           eps_schedule, knn_schedule, laplacian_from_graph, laplacian_scaling,
                                           unit_ball_volume, write_edge_list)
from manifold_filter_combine.pointcloud import PointCloud, sample_sphere
from manifold_filter_combine.settings import Settings
from tests.helpers import complete_graph


def _brute_force_distances(points):
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt(np.sum(diff ** 2, axis=2))


def test_eps_schedule():
    assert eps_schedule(1000, 2, 1.0) == pytest.approx((math.log(1000) / 1000) ** (1.0 / 6))
    assert eps_schedule(1000, 2, 1.0) == pytest.approx(0.4364, abs=2e-4)
    assert eps_schedule(math.e, 3, 1.0) == pytest.approx((1 / math.e) ** (1.0 / 7))
    assert eps_schedule(1000, 2, 2.0) == pytest.approx(2 * eps_schedule(1000, 2, 1.0))


def test_knn_schedule():
    assert knn_schedule(1000, 2, 1.0) == int(round(math.log(1000) ** (1.0 / 3) * 100))
    assert knn_schedule(1000, 2, 1.0) == 190
    assert knn_schedule(1000, 2, 0.5) == int(math.floor(0.5 * math.log(1000) ** (1.0 / 3) * 100 + 0.5))
    assert knn_schedule(10, 2, 100.0) == 9


@pytest.mark.parametrize('schedule', [eps_schedule, knn_schedule])
def test_schedules_need_two_points(schedule):
    with pytest.raises(ArgumentError):
        schedule(1, 2, 1.0)


def test_eps_graph_strict_radius():
    cloud = PointCloud([[0.0, 0.0], [0.5, 0.0]], 1)
    graph = build_eps_graph(cloud, 1.0)
    assert graph.edge_count == 1
    assert graph.degrees.tolist() == [1, 1]
    cloud = PointCloud([[0.0, 0.0], [1.0, 0.0]], 1)
    assert build_eps_graph(cloud, 1.0).edge_count == 0


def test_eps_graph_matches_brute_force():
    cloud = sample_sphere(400, 5)
    eps = 0.3
    graph = build_eps_graph(cloud, eps)
    dist = _brute_force_distances(cloud.points)
    expected = (dist < eps) & ~np.eye(cloud.n, dtype=bool)
    assert np.array_equal(graph.adjacency.toarray() != 0, expected)


def test_eps_graph_on_schedule_is_usually_connected():
    connected = [check_connected(build_eps_graph(sample_sphere(500, seed), eps_schedule(500, 2, 1.9))).connected
                 for seed in range(10)]
    assert sum(connected) >= 9


def test_knn_collinear_example():
    cloud = PointCloud([[0.0], [1.0], [3.0]], 1)
    graph = build_knn_graph(cloud, 1)
    assert graph.edges().tolist() == [[0, 1], [1, 2]]
    assert graph.degrees.tolist() == [1, 2, 1]


def test_knn_full_neighborhood_is_complete():
    cloud = sample_sphere(12, 3)
    graph = build_knn_graph(cloud, 11)
    assert graph.edge_count == 12 * 11 // 2


def test_knn_graph_matches_brute_force():
    cloud = sample_sphere(300, 8)
    k = 7
    graph = build_knn_graph(cloud, k)
    dist = _brute_force_distances(cloud.points)
    expected = np.zeros((cloud.n, cloud.n), dtype=bool)
    for i in range(cloud.n):
        order = np.lexsort((np.arange(cloud.n), dist[i]))
        neighbors = [j for j in order if j != i][:k]
        expected[i, neighbors] = True
    expected |= expected.T
    assert np.array_equal(graph.adjacency.toarray() != 0, expected)
    assert graph.degrees.min() >= k


def test_knn_rejects_bad_k():
    cloud = sample_sphere(5, 0)
    with pytest.raises(ArgumentError):
        build_knn_graph(cloud, 5)


def test_from_edges_drops_loops_and_duplicates():
    graph = SparseGraph.from_edges(3, [0, 1, 0, 2], [1, 0, 0, 1])
    assert graph.edge_count == 2
    assert graph.adjacency.data.tolist() == [1.0] * 4


def test_laplacian_scaling_constants():
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert laplacian_scaling('epsilon', 100, 2, 0.5) == pytest.approx(0.20372, rel=1e-4)
    assert laplacian_scaling('knn', 100, 2, 10) == pytest.approx(4 * math.pi)


def test_two_vertex_laplacian():
    laplacian = laplacian_from_graph(SparseGraph.from_edges(2, [0], [1]), 1.0)
    assert laplacian.matrix.toarray().tolist() == [[1.0, -1.0], [-1.0, 1.0]]


def test_complete_graph_laplacian_spectrum():
    laplacian = laplacian_from_graph(complete_graph(3), 1.0)
    assert np.allclose(np.linalg.eigvalsh(laplacian.matrix.toarray()), [0.0, 3.0, 3.0])
    assert check_laplacian(laplacian)


def test_assemble_laplacian_dimension_mismatch():
    graph = SparseGraph.from_edges(2, [0], [1])
    with pytest.raises(ConfigurationError):
        assemble_laplacian(graph, GraphConfig('epsilon', intrinsic_dim=2), 2, 3, 0.5)


def test_build_laplacian_properties(sphere_cloud):
    graph, laplacian = build_laplacian(sphere_cloud, GraphConfig('knn'), check=True)
    m = laplacian.matrix
    assert (m != m.T).nnz == 0
    assert np.abs(m.dot(np.ones(m.shape[0]))).max() < 1e-8 * laplacian.scaling_s * laplacian.max_degree()
    assert laplacian.eps_or_k == knn_schedule(sphere_cloud.n, 2)
    assert laplacian.mode == 'knn'


def test_fingerprint_is_stable(sphere_cloud):
    _, a = build_laplacian(sphere_cloud, GraphConfig('epsilon'))
    _, b = build_laplacian(sphere_cloud, GraphConfig('epsilon'))
    _, c = build_laplacian(sphere_cloud, GraphConfig('epsilon', explicit_eps=0.5))
    assert a.fingerprint() == b.fingerprint()
    assert a.fingerprint() != c.fingerprint()


def test_connectivity_counts():
    assert check_connected(complete_graph(3)) == (True, 1)
    assert check_connected(SparseGraph.from_edges(4, [], [])) == (False, 4)
    assert check_connected(SparseGraph.from_edges(4, [0, 2], [1, 3])) == (False, 2)


def test_graph_config_resolution():
    config = GraphConfig('epsilon', explicit_eps=0.25)
    assert config.resolve(1000) == 0.25
    assert GraphConfig('knn', explicit_k=4).resolve(1000) == 4
    assert GraphConfig('epsilon').resolve(1000) == pytest.approx(eps_schedule(1000, 2, 1.9))
    with pytest.raises(ConfigurationError):
        GraphConfig('radius')


def test_graph_config_from_settings():
    settings = Settings(attributes={'EPS_SCALE': 2.5})
    assert GraphConfig.from_settings(settings, 'epsilon').scale_c == 2.5
    assert GraphConfig.from_settings(settings, 'knn').scale_c == 1.0


def test_write_edge_list():
    stream = io.StringIO()
    write_edge_list(complete_graph(3), stream)
    assert stream.getvalue() == "0 1\n0 2\n1 2\n"


def test_builders_match_brute_force_at_two_thousand_points():
    cloud = sample_sphere(2000, 21)
    points = cloud.points
    eps = eps_schedule(2000, 2, 1.0)
    k = 12
    eps_graph = build_eps_graph(cloud, eps).adjacency.tolil()
    knn_graph = build_knn_graph(cloud, k).adjacency.tolil()
    chosen = [set() for _ in range(cloud.n)]
    for i in range(cloud.n):
        dist = np.sqrt(np.sum((points - points[i]) ** 2, axis=1))
        within = set(np.flatnonzero(dist < eps).tolist()) - {i}
        assert set(eps_graph.rows[i]) == within
        order = np.lexsort((np.arange(cloud.n), dist))
        chosen[i] = set([j for j in order[:k + 1].tolist() if j != i][:k])
    for i in range(cloud.n):
        expected = chosen[i] | set(j for j in range(cloud.n) if i in chosen[j])
        assert set(knn_graph.rows[i]) == expected
