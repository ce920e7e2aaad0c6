# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The kglf Authors

import os
import shutil
from pathlib import Path

import pytest

import kglf

SAMPLE = Path(os.environ.get("KGLF_SAMPLE", Path(__file__).resolve().parents[2] / "data" / "sample-city"))


@pytest.fixture
def bundle(tmp_path):
    dst = tmp_path / "bundle"
    shutil.copytree(SAMPLE, dst)
    return dst


def test_summary_and_nodes(bundle):
    e = kglf.Engine(bundle, persist=False)
    s = e.summary()
    assert s["nodes"] == 21
    assert s["links"] == 50
    people = e.nodes("Person")
    assert people and all(n["concept"] == "Person" for n in people)


def test_recommend_interleaved(bundle):
    e = kglf.Engine(bundle, persist=False)
    items = e.recommend("person-01", k=9, interleave=True)
    assert len(items) == 9
    assert sum(i["source"] == "baseline" for i in items) == 3
    for i in items:
        assert 0.0 <= i["score"] <= 1.0
        assert i["relation"] is None
        assert "compatible_relations" in i


def test_feedback_persists(bundle):
    e = kglf.Engine(bundle)
    out = e.feedback("person-01", "person-12", relation="knows", accepted=True, timestamp=1)
    assert out == {"feedback_count": 1, "train_job": None}
    other = e.recommend("person-02", k=1)[0]
    e.feedback(other["subject"], other["object"], accepted=False, timestamp=2)
    del e
    again = kglf.Engine(bundle, persist=False).summary()
    assert again["links"] == 51
    assert again["non_links"] == 1
    assert again["feedback"]["total"] == 2


def test_errors_carry_codes(bundle):
    e = kglf.Engine(bundle, persist=False)
    with pytest.raises(kglf.KglfError) as info:
        e.recommend("nobody")
    assert info.value.args[0] == "unknown_id"
    with pytest.raises(kglf.KglfError) as info:
        e.feedback("person-01", "person-12", accepted=True)
    assert info.value.args[0] == "invalid_argument"
    with pytest.raises(kglf.KglfError) as info:
        e.set_weights("existence", {"no-such-metric": 1.0})
    assert info.value.args[0] == "unknown_id"


def test_weights_and_training(bundle):
    e = kglf.Engine(bundle, persist=False)
    w = e.weights()
    assert abs(sum(w.values()) - 1.0) < 1e-12
    first = next(iter(w))
    e.set_weights("existence", {first: 2.0})
    assert e.weights()[first] == pytest.approx(1.0)
    job = e.train("existence")
    assert job["status"] == "done"
    assert job["standard"] == "silver"
    assert len(job["fitness_trace"]) == job["iterations"]
    assert abs(sum(e.weights().values()) - 1.0) < 1e-9


def test_export_anonymized(bundle, tmp_path):
    out = tmp_path / "anon"
    kglf.export_bundle(bundle, out, salt="pepper")
    text = (out / "nodes.jsonl").read_text()
    assert "person-01" not in text
    assert kglf.Engine(out, persist=False).summary()["links"] == 50


def test_generate_simulate_report(tmp_path):
    info = kglf.generate(tmp_path / "syn", seed=3, persons=30, stops=8, cities=4, links=120)
    assert info["hidden_links"] == 24
    runs = [kglf.simulate(tmp_path / "syn", seed=s, budget=120, retrain_every=60) for s in (0, 1)]
    for r in runs:
        assert r["events"] <= 120
        assert 0.0 <= r["ks"] <= 1.0
    kglf.write_report(runs, tmp_path / "tables")
    assert (tmp_path / "tables" / "summary.tsv").stat().st_size > 0
    with pytest.raises(kglf.KglfError):
        kglf.simulate(tmp_path / "syn", scoring="onehot:nope")
