import math
import os

import pytest

import relnet

DATA = os.environ.get("RELNET_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def test_rbd_roundtrip():
    pump = relnet.load_rbd(os.path.join(DATA, "pump.json"))
    r = relnet.eval_rbd(pump)
    assert abs(r - 0.896643) < 1e-6

    net = relnet.rbd_to_network(pump)
    assert net.validate() == []
    scen = relnet.sample_scenarios(net, 2000, 5.0, seed=7)
    est = relnet.estimate_reliability(net, scen, milp=False)
    assert abs(est.value - r) < 0.03
    assert est.samples == 2000


def test_network_parse_and_eval():
    net = relnet.load_network(os.path.join(DATA, "3node.json"))
    assert net.num_nodes == 4
    assert "e12" in net.edge_ids()
    scen = relnet.sample_scenarios(net, 500, 5.0, seed=1)
    est = relnet.estimate_reliability(net, scen, milp=True)
    assert 0.0 < est.value < 1.0
    assert est.standard_error == pytest.approx(
        math.sqrt(est.value * (1 - est.value) / 500)
    )


def test_schema_error():
    with pytest.raises(relnet.SchemaError):
        relnet.parse_network('{"nodes": [{"id": "s", "role": "oops"}]}')


def test_design_and_pareto():
    net = relnet.load_network(os.path.join(DATA, "3node.json"))
    scen = relnet.sample_scenarios(net, 300, 5.0, seed=1)
    exact = relnet.solve_design(net, scen, budget=30.0)
    assert exact.cost <= 30.0 + 1e-6
    relaxed = relnet.solve_design(net, scen, budget=30.0, relaxed=True)
    assert relaxed.relaxed_objective >= exact.reliability - 1e-9
    assert relaxed.reliability <= exact.reliability + 1e-9
    assert 0.0 <= relnet.active_difference(exact, relaxed) <= 100.0

    frozen = relnet.apply_design(net, exact)
    est = relnet.estimate_reliability(frozen, scen, milp=True)
    assert est.value == pytest.approx(exact.reliability, abs=1e-12)

    rows = relnet.pareto(net, scen, [0.0, 15.0, 30.0])
    rel = [row["reliability"] for row in rows]
    assert rel == sorted(rel)
    assert all(row["cost"] <= row["budget"] + 1e-6 for row in rows)
