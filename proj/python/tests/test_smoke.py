import itertools
import json
import math
import random

import pytest

import ansc


def brute_force_tail(elements, beta, avail, req):
    if avail < req:
        return 1.0
    ps = [p for _, p in elements]
    q = beta * min(ps) if ps else 0.0
    ind = [0.0 if q >= 1.0 else (p - q) / (1.0 - q) for p in ps]
    headroom = avail - req
    total = 0.0
    for states in itertools.product((0, 1), repeat=len(elements)):
        prob = 1.0
        loss = 0
        for s, (cap, _), pi in zip(states, elements, ind):
            prob *= pi if s else 1.0 - pi
            loss += cap if s else 0
        if loss > headroom:
            total += prob
    all_fail = sum(c for c, _ in elements)
    return q * (1.0 if all_fail > headroom else 0.0) + (1.0 - q) * total


def test_safety_margin_examples():
    assert ansc.effective_safety_margin(120, 100) == pytest.approx(0.2, abs=1e-15)
    assert ansc.effective_safety_margin(80, 100) == pytest.approx(-0.2, abs=1e-15)
    assert ansc.effective_safety_margin(5, 0) == math.inf
    with pytest.raises(ansc.DomainError):
        ansc.effective_safety_margin(-1, 10)


def test_split_preserves_marginals():
    rng = random.Random(3)
    for _ in range(50):
        p = [rng.random() for _ in range(rng.randint(1, 8))]
        beta = rng.choice([0.0, 0.15, 0.5, 1.0])
        q, ind = ansc.split_common_cause(p, beta)
        for pi, ii in zip(p, ind):
            assert q + (1.0 - q) * ii == pytest.approx(pi, abs=1e-12)


def test_violation_matches_enumeration():
    rng = random.Random(11)
    for _ in range(30):
        elements = [(rng.randint(1, 20), rng.random() * 0.6) for _ in range(rng.randint(1, 8))]
        installed = sum(c for c, _ in elements)
        req = rng.randint(0, installed)
        beta = rng.choice([0.0, 0.15, 0.5, 1.0])
        got = ansc.violation_probability(elements, beta, installed, req)
        assert got == pytest.approx(brute_force_tail(elements, beta, installed, req), abs=1e-12)


def test_loss_distribution_sums_to_one():
    support, probs = ansc.layer_loss_distribution([(10, 0.1), (20, 0.2)], 0.15)
    assert support == sorted(support)
    assert sum(probs) == pytest.approx(1.0, abs=1e-12)


def test_persistence_and_colors():
    assert ansc.persistence_adjust(0.3, 36.5) == pytest.approx(0.3)
    assert ansc.persistence_adjust(0.3, 73.0) > 0.3
    assert ansc.map_color(0.9, 0.8, 0.5, 0.2) == "red"
    assert ansc.map_color(0.1, 0.8, 0.5, 0.2) == "green"
    ceiling, movement = ansc.posture_and_movement([0.2, 0.3, 0.25], 3)
    assert ceiling == pytest.approx(0.3)
    assert movement == pytest.approx(0.05)


def test_calibrate_respects_caps_with_ties():
    sites = [("a", 0.9), ("b", 0.9), ("c", 0.1)]
    budget = {"red_frac": 0.34, "orange_frac": 0.0, "amber_frac": 0.0}
    thresholds = ansc.calibrate(sites, budget)
    colors = ansc.assign_colors(sites, json.dumps(thresholds), json.dumps(budget))
    assert colors.count("red") <= math.ceil(0.34 * 3)


def test_audit_flags_overage():
    lines = []
    for day in range(1, 4):
        for i in range(400):
            color = "red" if i < 44 else "green"
            lines.append({"scope_id": f"dc-{i:03d}", "date": f"2026-01-0{day}", "color": color})
    report = ansc.audit(lines)
    assert not report["compliant"]
    assert report["colors"]["red"]["fraction"] == pytest.approx(0.11)


def test_pipeline_on_small_fleet():
    fleet = ansc.generate_fleet({"seed": 5, "n_regions": 3, "n_datacenters": 9})
    assert len(fleet["datacenters"]) == 9
    incidents = ansc.generate_incidents(fleet, {"start": fleet["created_at"], "preroll_days": 365}, seed=5)
    assert incidents
    cards = ansc.score(fleet, incidents)
    scopes = {c["scope"] for c in cards}
    assert scopes == {"layer", "datacenter", "region"}
    element = fleet["datacenters"][0]["layers"][0]["elements"][0]["id"]
    result = ansc.whatif(fleet, [{"kind": "repair_element", "element_id": element}], incidents)
    assert len(result["before"]) == len(result["after"])
    empty = ansc.whatif(fleet, [], incidents)
    assert empty["before"] == empty["after"]


def test_errors_are_typed():
    fleet = ansc.generate_fleet({"seed": 5, "n_regions": 1, "n_datacenters": 1})
    fleet["regions"] = []
    with pytest.raises(ansc.ValidationError):
        ansc.score(fleet)
    with pytest.raises(ansc.NotFoundError):
        good = ansc.generate_fleet({"seed": 5, "n_regions": 1, "n_datacenters": 1})
        ansc.whatif(good, [{"kind": "drain_element", "element_id": "missing"}])


def test_small_scenario_is_deterministic():
    spec = {
        "fleet": {"seed": 1, "n_regions": 2, "n_datacenters": 6},
        "scenario": {"duration_days": 20, "preroll_days": 200},
        "history_seed": 2,
    }
    first = ansc.run_scenario(spec)
    second = ansc.run_scenario(spec)
    assert first == second
    assert len(next(iter(first["series"].values()))) == 20
