import csv
import io
from fractions import Fraction
from functools import reduce

import pytest

import ncsync


def xor(*chunks):
    return bytes(reduce(lambda a, b: a ^ b, col) for col in zip(*chunks))


def test_path_topology():
    t = ncsync.path_graph(3)
    assert t.n == 3
    assert t.edges() == [(0, 1), (1, 2)]
    assert t.neighbors(1) == [0, 2]
    assert ncsync.average_degree(t) == Fraction(4, 3)
    assert ncsync.is_connected(t)


def test_topology_json_round_trip():
    t = ncsync.Topology.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    again = ncsync.Topology.from_json(t.to_json())
    assert again.edges() == t.edges()


def test_generate_geometric_is_seeded():
    a = ncsync.generate_geometric(8, 0.6, seed=5)
    b = ncsync.generate_geometric(8, 0.6, seed=5)
    if a is None:
        assert b is None
    else:
        assert a.edges() == b.edges()
        assert len(a.positions()) == 8


def test_encode_is_xor():
    payloads = [bytes([i, 2 * i, 255 - i]) for i in range(4)]
    assert ncsync.encode([0, 2, 3], payloads) == xor(payloads[0], payloads[2], payloads[3])


def test_classify():
    assert ncsync.classify([0, 1], [0, 1], owner=0, universe=3) == ("already_known", None)
    assert ncsync.classify([0, 2], [0, 1], owner=0, universe=3) == ("decodable", 2)
    assert ncsync.classify([1, 2], [0], owner=0, universe=3) == ("undecodable", 2)


def test_dbs_on_path_centre():
    t = ncsync.path_graph(3)
    held = [[0, 1], [0, 1, 2], [1, 2]]
    r = ncsync.dbs(1, held, t)
    assert r["chosen"] == [0, 2]
    assert r["beta"] == 2
    assert ncsync.dbs_single(1, held, t)["beta"] == 1
    assert ncsync.candidate_pool(1, held, t) == [0, 2]


def test_ns_picks_centre_first():
    t = ncsync.path_graph(3)
    r = ncsync.ns([[0], [1], [2]], t)
    assert r["chosen_node"] == 1
    assert r["dbs"]["beta"] == 2


@pytest.mark.parametrize("scheme,slots", [("u-dbs", 5), ("c-dbs", 4), ("c-dbs-ns", 4)])
def test_simulate_path3(scheme, slots):
    r = ncsync.simulate(ncsync.path_graph(3), scheme)
    assert r["converged"]
    assert r["slots"] == slots
    assert len(r["events"]) == slots
    assert r["events"][0]["slot"] == 1


def test_simulate_complete_graph():
    for n in (3, 4, 5):
        for scheme in ("U_DBS", "C_DBS", "C_DBS_NS"):
            assert ncsync.simulate(ncsync.complete_graph(n), scheme, trace=False)["slots"] == n


def test_unknown_scheme_rejected():
    with pytest.raises(ValueError):
        ncsync.simulate(ncsync.path_graph(3), "flooding")


def test_gd_and_sd():
    assert ncsync.compute_sd([4, 5, 6]) == 5.0
    assert ncsync.compute_gd([(5, 4), (6, 3)]) == pytest.approx((1.25 + 2.0) / 2)


def test_small_sweep_csv(tmp_path):
    cfg = ncsync.SweepConfig()
    cfg.node_sizes = [5]
    cfg.pe_values = [0.0]
    cfg.radius_grid = [0.6, 1.0]
    cfg.samples_per_cell = 20
    cfg.threads = 1
    text = ncsync.sweep_csv(cfg)
    assert text.splitlines()[0] == ncsync.CSV_HEADER
    rows = list(csv.DictReader(io.StringIO(text)))
    assert {r["scheme"] for r in rows} == {"U_DBS", "C_DBS", "C_DBS_NS"}
    assert sum(int(r["n_samples"]) for r in rows if r["scheme"] == "U_DBS") == 40

    out = tmp_path / "sweep.csv"
    ncsync.write_sweep_csv(cfg, out)
    assert out.read_text() == text

    records = ncsync.run_sweep(cfg)
    assert len(records) == len(rows)
