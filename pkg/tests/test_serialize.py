import json
import math
import os

import pytest

from noisim.channels import PauliChannel
from noisim.choi import theorem1_check
from noisim.channels import DensityMatrix
from noisim.clusters import analyze_cluster
from noisim.dynamics import default_benchmark_config, run_benchmark
from noisim.encoder import encode_adaptive
from noisim.sampling import run_trials
from noisim.serialize import (
    atomic_write_text,
    benchmark_rows,
    certificate_to_dict,
    channel_from_dict,
    channel_to_dict,
    cluster_to_dict,
    encoding_to_dict,
    load_channel,
    sample_rows,
    save_channel,
    write_csv,
    write_json,
)

CHANNEL = PauliChannel([(0.5, "II"), (0.3, "XZ"), (0.2, "IY")])


def test_channel_round_trip(tmp_path):
    path = tmp_path / "ch.json"
    save_channel(CHANNEL, path)
    assert load_channel(path) == CHANNEL
    data = json.loads(path.read_text())
    assert data["n_qubits"] == 2
    assert [t["string"] for t in data["terms"]] == ["II", "IY", "XZ"]


def test_channel_from_dict_validation():
    with pytest.raises(ValueError):
        channel_from_dict({})
    with pytest.raises(ValueError):
        channel_from_dict({"terms": [{"weight": 1.0}]})
    with pytest.raises(ValueError):
        channel_from_dict(
            {"n_qubits": 3, "terms": [{"string": "XZ", "weight": 1.0}]}
        )


def test_atomic_write_replaces_and_leaves_no_temp(tmp_path):
    path = tmp_path / "out.txt"
    path.write_text("old")
    atomic_write_text("new", path)
    assert path.read_text() == "new"
    assert os.listdir(tmp_path) == ["out.txt"]


def test_write_json_is_stable(tmp_path):
    path = tmp_path / "a.json"
    write_json({"b": 1.5, "a": [1, 2]}, path)
    assert path.read_text() == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1.5\n}\n'


def test_write_csv_format(tmp_path):
    path = tmp_path / "t.csv"
    write_csv([{"b": 0.1, "a": 2, "c": "x", "d": True}], path)
    assert path.read_text() == "a,b,c,d\n2,0.1,x,true\n"
    with pytest.raises(ValueError):
        write_csv([], path)
    with pytest.raises(ValueError):
        write_csv([{"a": 1}, {"b": 2}], path)


def test_write_csv_full_float_precision(tmp_path):
    path = tmp_path / "t.csv"
    value = 1 / 3
    write_csv([{"v": value}], path)
    assert path.read_text().splitlines()[1] == repr(value)


def test_encoding_to_dict_contents():
    result = encode_adaptive(
        PauliChannel([(0.95, "II"), (0.03, "XZ"), (0.02, "IY")]),
        PauliChannel([(0.6, "II"), (0.4, "XX")]),
        tol=1e-6,
    )
    data = encoding_to_dict(result)
    assert data["mode"] == "adaptive"
    assert data["converged"] is True
    assert data["iterations"] == 1
    assert data["steps"][0]["node"] == "XZ"
    assert data["steps"][0]["residues"]["XZ"] == 0.0
    assert set(data["residues"]) == {"II", "XZ", "IY"}
    json.dumps(data)  # everything JSON-serializable


def test_cluster_and_certificate_dicts():
    cluster = cluster_to_dict(analyze_cluster("YI", ["XX", "ZZ"]))
    assert cluster["members"] == ["IY", "XZ", "YI", "ZX"]
    assert cluster["all_to_all"] is False

    ident = PauliChannel([(1.0, "I")])
    depol = PauliChannel([(0.25, "I"), (0.25, "X"), (0.25, "Y"), (0.25, "Z")])
    report = theorem1_check(ident, depol, DensityMatrix.maximally_mixed(2), math.inf)
    data = certificate_to_dict(report)
    assert data["p"] == "inf"
    assert data["renyi_entropy"] is None
    json.dumps(data)


def test_benchmark_and_sample_rows():
    result = run_benchmark(default_benchmark_config())
    rows = benchmark_rows(result)
    assert len(rows) == 201
    assert sorted(rows[0]) == ["gap", "site1_encoded", "site1_target",
                               "site2_encoded", "site2_target", "time"]
    assert rows[0]["site1_target"] == 1.0

    report = run_trials(CHANNEL, seed=2, n_trials=5, steps_per_trial=10)
    srows = sample_rows(report)
    assert [r["string"] for r in srows] == ["II", "IY", "XZ"]
    assert sum(r["count"] for r in srows) == 50
