import json
import math
import os

import pytest

import pnact

SCENARIO = os.environ.get("PNACT_SCENARIO")


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("pnact")


@pytest.fixture(scope="module")
def entities_path(workdir):
    # A small standalone space: two unit squares and one road segment.
    doc = {
        "type": "FeatureCollection",
        "features": [
            {
                "type": "Feature",
                "properties": {"id": "a1", "kind": "polygon"},
                "geometry": {
                    "type": "Polygon",
                    "coordinates": [[[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]]],
                },
            },
            {
                "type": "Feature",
                "properties": {"id": "a2", "kind": "polygon"},
                "geometry": {
                    "type": "Polygon",
                    "coordinates": [[[4, 0], [5, 0], [5, 1], [4, 1], [4, 0]]],
                },
            },
            {
                "type": "Feature",
                "properties": {"id": "l1", "kind": "segment"},
                "geometry": {"type": "LineString", "coordinates": [[1, 0.5], [4, 0.5]]},
            },
        ],
    }
    path = workdir / "entities.geojson"
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture(scope="module")
def space(entities_path):
    return pnact.PNSpace(entities_path)


def test_space_queries(space):
    assert len(space) == 3
    assert space.ids() == ["a1", "a2", "l1"]
    assert space.kind("a1") == "polygon"
    assert space.kind("l1") == "segment"

    ident, dist = space.nearest(0.5, 0.5)
    assert ident == "a1" and dist == 0.0
    ident, dist = space.nearest(4.5, 2.0)
    assert ident == "a2" and dist == pytest.approx(1.0)

    # Interior of a1: margin is half the gap to the road at x=1.
    assert space.margin(0.5, 0.5) == pytest.approx(0.25)
    assert space.misclassification_bound(0.5, 0.5, 1e-6) == 0.0
    assert pnact.misclassification_bound(0.0, 0.1) == 1.0


def test_marks_and_estimate(space, workdir):
    marks = pnact.compute_marks([0.25, 0.5, 0.75])
    assert marks == pytest.approx([0.375, 0.25, 0.375])
    assert sum(marks) == pytest.approx(1.0)

    gps = workdir / "gps.csv"
    rows = ["day,timestamp,x,y"]
    # 21600 s = t=0.25 etc: three observations, one per entity.
    rows.append("1,21600,0.5,0.5")
    rows.append("1,43200,2.5,0.5")
    rows.append("1,64800,4.5,0.5")
    gps.write_text("\n".join(rows) + "\n")

    naive = pnact.estimate(str(gps), space, mode="naive")
    assert naive == pytest.approx({"a1": 1 / 3, "a2": 1 / 3, "l1": 1 / 3})

    weighted = pnact.estimate(str(gps), space, mode="weighted")
    assert weighted == pytest.approx({"a1": 0.375, "a2": 0.375, "l1": 0.25})
    assert sum(weighted.values()) == pytest.approx(1.0)

    classes = pnact.estimate_by_class(str(gps), space, mode="weighted")
    assert classes["T_A"] == pytest.approx(0.75)
    assert classes["polygon"] == pytest.approx({"a1": 0.5, "a2": 0.5})
    assert classes["road"] == pytest.approx({"l1": 1.0})


def test_activity_spaces():
    table = {"e1": 0.6, "e2": 0.3, "e3": 0.1}
    space = pnact.level_space(table, 0.8)
    assert space["members"] == ["e1", "e2"]
    assert space["mass"] == pytest.approx(0.9)

    weighted = pnact.weighted_level_space(
        {"e1": 0.45, "e2": 0.45, "e3": 0.10}, {"e1": 10.0, "e2": 1.0, "e3": 1.0}, 0.5
    )
    assert weighted["members"] == ["e2", "e3"]
    assert weighted["total_weight"] == pytest.approx(2.0)
    assert not weighted["heuristic"]

    composed = pnact.composed_space({"a1": 1.0}, {"l1": 0.7, "l2": 0.3}, 0.9)
    assert composed["members"] == ["a1", "l1", "l2"]
    assert composed["mass"] == pytest.approx(1.0)

    with pytest.raises(pnact.InfeasibleError):
        pnact.weighted_level_space({"e1": 0.5}, {"e1": 1.0}, 0.9)
    with pytest.raises(pnact.ValidationError):
        pnact.level_space({"e1": 0.5}, 0.9)


def test_edit_distance():
    d = pnact.tw_edit_distance(["h", "w"], [0.6, 0.4], ["h"], [1.0])
    assert d == pytest.approx(0.4)
    assert pnact.tw_edit_distance(["h"], [1.0], ["h"], [1.0]) == 0.0
    # Symmetry.
    a = (["h", "w", "h"], [0.5, 0.3, 0.2])
    b = (["h", "p"], [0.7, 0.3])
    assert pnact.tw_edit_distance(*a, *b) == pytest.approx(pnact.tw_edit_distance(*b, *a))


@pytest.mark.skipif(SCENARIO is None, reason="scenario path not provided")
def test_simulate_and_truth(workdir):
    out = pnact.simulate(SCENARIO, str(workdir), n=4, m=59, sigma=0.05, seed=7)
    assert os.path.exists(out["gps"])
    assert os.path.exists(out["truth"])

    with open(out["gps"]) as fh:
        lines = fh.read().strip().splitlines()
    assert lines[0] == "day,timestamp,x,y"
    assert len(lines) == 1 + 4 * 59

    truth = pnact.analytic_truth(SCENARIO, 30)
    assert sum(truth.values()) == pytest.approx(1.0)
    assert truth["home"] > 0.6


@pytest.mark.skipif(SCENARIO is None, reason="scenario path not provided")
def test_cluster_days(workdir, tmp_path):
    sim_dir = tmp_path / "sim"
    sim_dir.mkdir()
    out = pnact.simulate(SCENARIO, str(sim_dir), n=6, m=199, sigma=0.02, seed=11)

    # Entity source: extract the embedded map from the scenario.
    with open(SCENARIO) as fh:
        sc = json.load(fh)
    entities = tmp_path / "map.geojson"
    entities.write_text(json.dumps(sc["map"]))

    space = pnact.PNSpace(str(entities))
    labels = pnact.cluster_days(out["gps"], space, tau=0.01, k=2)
    assert len(labels) == 6
    days = [d for d, _ in labels]
    assert days == sorted(days)
    ks = {c for _, c in labels}
    assert ks.issubset({0, 1}) and len(ks) == 2


def test_rmise():
    value, se = pnact.rmise([0.01, 0.03])
    assert value == pytest.approx(math.sqrt(0.02))
    assert se > 0.0
    perfect, se0 = pnact.rmise([0.0, 0.0, 0.0])
    assert perfect == 0.0 and se0 == 0.0
