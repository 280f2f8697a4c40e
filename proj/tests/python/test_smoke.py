import math

import pytest

import dstree


def test_printed_series():
    assert [dstree.count_marked_trees(n, 1) for n in range(1, 7)] == [1, 1, 5, 31, 215, 1597]
    assert dstree.series_from_closed_form(2, 6)[1:] == [1, 1, 7, 61, 595, 6217]


def test_tree_sampler_is_seeded():
    a = dstree.sample_tree(200, seed=4)
    assert len(a) == 200
    assert sum(a) == 199
    assert a == dstree.sample_tree(200, seed=4)
    assert dstree.sample_tree(9, seed=1, law={"type": "finite", "p": [0.5, 0, 0.5]}, conditioning="leaves").count(0) == 9


def test_glued_distances_form_a_metric():
    s = dstree.glued_sample(300, seed=2, points=40)
    d = s["distances"]
    assert len(d) == 40
    for i in range(40):
        assert d[i][i] == 0
        for j in range(40):
            assert d[i][j] == d[j][i]
            assert d[i][j] <= s["diameter"]


def test_marginal_and_analysis():
    m = dstree.marginal_sample(50, seed=3)
    d = m["distances"]
    assert len(d) == 50
    lo, hi = dstree.gh_bounds(d, d, iterations=2, seed=1)
    assert lo == 0 and hi <= 1e-12
    fit = dstree.box_dimension(d, [0.2, 0.1, 0.05])
    assert math.isfinite(fit["slope"])


def test_laws():
    assert dstree.ml_moment(0.5, 0.5, 1) == pytest.approx(math.sqrt(math.pi))
    x = dstree.sample_ml(0.5, 0.5, 20000, seed=5)
    assert sum(x) / len(x) == pytest.approx(math.sqrt(math.pi), rel=0.03)
    stat, p = dstree.ks_two_sample(x[:10000], x[10000:])
    assert p > 0.001
    assert dstree.bn_normalizer(1.5, 4000) > dstree.bn_normalizer(1.5, 1000)


def test_commands_and_errors(tmp_path):
    out = dstree.run("sample", n=50, seed=7, out=str(tmp_path))
    assert out["stats"]["vertices"] == 50
    assert (tmp_path / "summary.json").exists()
    with pytest.raises(dstree.DstreeError) as e:
        dstree.run("sample", n=50, seed=7, gamma=0.4, out=str(tmp_path))
    assert e.value.code == "ConfigError"
    with pytest.raises(dstree.DstreeError):
        dstree.sample_tree(4, seed=1, law={"type": "finite", "p": [0.5, 0, 0.5]})
