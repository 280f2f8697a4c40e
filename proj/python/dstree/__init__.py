"""Decorated stable trees: samplers, glued metrics and continuum marginals."""

import json

from . import _core
from ._core import DstreeError, bn_normalizer, ks_two_sample, ml_moment

__all__ = [
    "DstreeError",
    "run",
    "sample_tree",
    "glued_sample",
    "marginal_sample",
    "count_marked_trees",
    "series_from_closed_form",
    "ml_moment",
    "sample_ml",
    "bn_normalizer",
    "box_dimension",
    "gh_bounds",
    "ks_two_sample",
]


def _law(law):
    return "" if law is None else json.dumps(law)


def run(command, **config):
    """Run a CLI command in process; config keys match the JSON config file."""
    return json.loads(_core.run_command(command, json.dumps(config)))


def sample_tree(n, seed, law=None, alpha=1.5, conditioning="vertices"):
    """Outdegree sequence (depth-first order) of a conditioned BGW tree."""
    return _core.sample_tree(n, _law(law), alpha, conditioning, seed)


def glued_sample(n, seed, kit=None, law=None, alpha=1.5, gamma=1.0, beta=1.0, points=100):
    """Decorated tree with n vertices plus distances between mass-sampled points."""
    kit = kit or {"type": "cycle"}
    return _core.glued_sample(n, json.dumps(kit), _law(law), alpha, gamma, beta, points, seed)


def marginal_sample(k, seed, alpha=1.5, gamma=1.0, beta=1.0, kit=None, points=0, measure="tips", trunc_eps=1e-4):
    """k-spine continuum marginal; points=0 with measure 'tips' gives every tip once."""
    kit = kit or {"type": "cycle"}
    return _core.marginal_sample(k, alpha, gamma, beta, json.dumps(kit), points, measure, trunc_eps, seed)


def count_marked_trees(n, k):
    return int(_core.count_marked_trees(n, k))


def series_from_closed_form(k, n_max):
    return [int(c) for c in _core.series_from_closed_form(k, n_max)]


def sample_ml(eta, theta, count, seed):
    return _core.sample_ml(eta, theta, count, seed)


def box_dimension(distances, scales):
    return _core.box_dimension([list(map(float, row)) for row in distances], list(scales))


def gh_bounds(a, b, iterations=8, seed=1):
    """(lower, upper) bounds on the Gromov-Hausdorff distance of two distance matrices."""
    return _core.gh_bounds([list(map(float, r)) for r in a], [list(map(float, r)) for r in b], iterations, seed)
