# -*- coding: utf-8 -*-
import pytest

from manifold_filter_combine.graph import GraphConfig, build_laplacian
from manifold_filter_combine.pointcloud import sample_sphere
from manifold_filter_combine.spectral.basis import eigensolve


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run full-size convergence tests')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def sphere_cloud():
    return sample_sphere(300, 7)


@pytest.fixture
def sphere_laplacian(sphere_cloud):
    graph, laplacian = build_laplacian(sphere_cloud, GraphConfig('epsilon'))
    return laplacian


@pytest.fixture
def sphere_basis(sphere_laplacian):
    return eigensolve(sphere_laplacian, sphere_laplacian.n)
