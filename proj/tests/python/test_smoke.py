import math

import pytest

import posdist

TOY = """# sent_id = 1
1\tThe\tthe\tDET\t_\t_\t2\tdet\t_\t_
2\tdog\tdog\tNOUN\t_\t_\t3\tnsubj\t_\t_
3\truns\trun\tVERB\t_\t_\t0\troot\t_\t_
4\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_

"""


def test_tags_and_mapping():
    assert len(posdist.TAGS) == 15
    assert posdist.TAGS[posdist.map_upos("SYM")] == "PUNCT"
    assert posdist.TAGS[posdist.map_upos("X")] == "PUNCT"
    with pytest.raises(posdist.DataError):
        posdist.map_upos("FOO")


def test_parse_and_count():
    sentences = posdist.parse_conllu(TOY)
    assert [[posdist.TAGS[t] for t in s] for s in sentences] == [["DET", "NOUN", "VERB", "PUNCT"]]
    assert len(posdist.parse_conllu(TOY, strip_final_punct=True)[0]) == 3
    counts = posdist.count_blocks(sentences, 2)
    assert sum(counts.values()) == 3
    assert posdist.encode_block([14, 14, 14]) == 3374


def test_entropy():
    assert posdist.entropy_plugin({0: 5, 1: 5}) == pytest.approx(1.0)
    h, sd = posdist.entropy_nsb({i: 1000 for i in range(8)}, 8)
    assert h == pytest.approx(3.0, abs=0.01)
    assert sd >= 0


def test_gain_and_memory():
    sentences = posdist.synthetic_corpus(1, 4, 20000, seed=3)
    curve = posdist.gain_curve(sentences, "plugin", L=4)
    assert curve["values"][0] > 0
    res = posdist.memory_test(sentences, 1, 5, seed=1, estimator="plugin", L=4)
    assert 0.0 <= res["p_value"] <= 1.0
    assert len(posdist.surrogates(sentences, 1, 2, seed=1, L=4)) == 2


def test_distances():
    p = {0: 0.5, 1: 0.5}
    assert posdist.js_distance(p, {2: 1.0}) == pytest.approx(1.0)
    assert posdist.hellinger_distance(p, {0: 1.0}) == pytest.approx(0.5412, abs=1e-4)


def test_analysis():
    labels = ["a", "b", "c"]
    m = [[0, 1, 2], [1, 0, 3], [2, 3, 0]]
    merges, order, newick = posdist.complete_linkage(labels, m)
    assert [h for _, _, h, _ in merges] == [1.0, 3.0]
    assert newick.endswith(";")
    edges = posdist.minimum_spanning_tree(labels, m)
    assert sorted(w for _, _, w in edges) == [1.0, 2.0]
    medoids, assignment, cost, sil = posdist.pam(labels, m, 2)
    assert len(medoids) == 2 and cost == pytest.approx(1.0)


def test_geo_and_registry():
    assert posdist.haversine_km(0, 0, 0, 180) == pytest.approx(math.pi * 6371.0088)
    reg = posdist.bundled_registry()
    assert len(reg) == 67
    x = [0.1, 0.5, 0.2, 0.9]
    assert posdist.distance_correlation(x, x) == pytest.approx(1.0)
    assert posdist.pearson(x, [2 * v for v in x]) == pytest.approx(1.0)


def test_against_scipy():
    np = pytest.importorskip("numpy")
    hierarchy = pytest.importorskip("scipy.cluster.hierarchy")
    from scipy.sparse.csgraph import minimum_spanning_tree
    from scipy.spatial.distance import jensenshannon, squareform

    rng = np.random.default_rng(4)
    pts = rng.random((9, 3))
    d = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
    labels = [f"p{i}" for i in range(9)]
    merges, _, _ = posdist.complete_linkage(labels, d.tolist())
    ref = hierarchy.linkage(squareform(d, checks=False), method="complete")
    assert np.allclose([h for _, _, h, _ in merges], ref[:, 2], atol=1e-12)
    edges = posdist.minimum_spanning_tree(labels, d.tolist())
    assert sum(w for _, _, w in edges) == pytest.approx(minimum_spanning_tree(d).sum(), abs=1e-12)

    p = rng.random(20)
    q = rng.random(20)
    q[:5] = 0
    p, q = p / p.sum(), q / q.sum()
    pm = {i: float(v) for i, v in enumerate(p)}
    qm = {i: float(v) for i, v in enumerate(q) if v > 0}
    assert posdist.js_distance(pm, qm, r=2) == pytest.approx(jensenshannon(p, q, base=2), abs=1e-12)
