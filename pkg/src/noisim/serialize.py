"""JSON and CSV serialization with atomic writes.

Output files are written to a temporary sibling and moved into place with
os.replace, so readers never observe partial files and reruns are
byte-for-byte stable: JSON uses indent=2 with sorted keys, CSV uses LF
line endings, alphabetical headers and repr() for floats.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Mapping, Sequence

from .channels import PauliChannel
from .choi import CertificateReport
from .clusters import Cluster
from .dynamics import BenchmarkResult
from .encoder import EncodingResult
from .sampling import SampleReport

__all__ = [
    "atomic_write_text",
    "benchmark_rows",
    "certificate_to_dict",
    "channel_from_dict",
    "channel_to_dict",
    "cluster_to_dict",
    "encoding_to_dict",
    "load_channel",
    "load_json",
    "sample_rows",
    "save_channel",
    "write_csv",
    "write_json",
]


def atomic_write_text(text: str, path: str | os.PathLike) -> None:
    target = Path(path)
    parent = target.parent if str(target.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=parent, prefix=target.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_json(data: Any, path: str | os.PathLike) -> None:
    atomic_write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", path)


def load_json(path: str | os.PathLike) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(rows: Sequence[Mapping[str, Any]], path: str | os.PathLike) -> None:
    if not rows:
        raise ValueError("refusing to write an empty CSV")
    headers = sorted(rows[0].keys())
    for row in rows:
        if sorted(row.keys()) != headers:
            raise ValueError("rows disagree on CSV headers")
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=headers, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(v) for k, v in row.items()})
    atomic_write_text(buf.getvalue(), path)


def channel_to_dict(channel: PauliChannel) -> dict:
    return {
        "n_qubits": channel.n_qubits,
        "terms": [{"string": s.text, "weight": w} for w, s in channel.terms],
    }


def channel_from_dict(data: Mapping[str, Any]) -> PauliChannel:
    if "terms" not in data:
        raise ValueError("channel object needs a 'terms' list")
    terms = []
    for i, entry in enumerate(data["terms"]):
        try:
            terms.append((float(entry["weight"]), entry["string"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"term {i} needs 'string' and 'weight' fields") from exc
    channel = PauliChannel(terms)
    declared = data.get("n_qubits")
    if declared is not None and int(declared) != channel.n_qubits:
        raise ValueError(
            f"declared n_qubits {declared} != string length {channel.n_qubits}"
        )
    return channel


def save_channel(channel: PauliChannel, path: str | os.PathLike) -> None:
    write_json(channel_to_dict(channel), path)


def load_channel(path: str | os.PathLike) -> PauliChannel:
    data = load_json(path)
    if not isinstance(data, Mapping):
        raise ValueError(f"{path}: expected a channel object")
    return channel_from_dict(data)


def encoding_to_dict(result: EncodingResult) -> dict:
    return {
        "mode": result.mode,
        "stop_reason": result.stop_reason,
        "converged": result.converged,
        "iterations": result.iterations,
        "encoded_mass": result.encoded_mass,
        "max_residue": result.max_residue,
        "min_residue": result.min_residue,
        "steps": [
            {
                "iteration": s.iteration,
                "node": s.node.text,
                "mass": s.mass,
                "residues": {p.text: r for p, r in s.residues},
            }
            for s in result.steps
        ],
        "residues": {s.text: r for s, r in result.residues.items()},
        "target": channel_to_dict(result.target),
        "noise": channel_to_dict(result.noise),
    }


def cluster_to_dict(cluster: Cluster) -> dict:
    return {
        "node": cluster.node.text,
        "members": sorted(s.text for s in cluster.members),
        "branching_dimension": cluster.branching_dimension,
        "cluster_dimension": cluster.cluster_dimension,
        "all_to_all": cluster.all_to_all,
        "leakage_entropy": cluster.leakage_entropy,
    }


def certificate_to_dict(report: CertificateReport) -> dict:
    return {
        "p": "inf" if math.isinf(report.p) else report.p,
        "dim": report.dim,
        "output_distance": report.output_distance,
        "choi_distance": report.choi_distance,
        "weighted_choi_distance": report.weighted_choi_distance,
        "renyi_entropy": report.renyi,
        "satisfied": report.satisfied,
        "checks": [
            {"name": c.name, "lhs": c.lhs, "rhs": c.rhs, "satisfied": c.satisfied}
            for c in report.checks
        ],
    }


def benchmark_rows(result: BenchmarkResult) -> list[dict]:
    n_sites = result.config.n_sites
    rows = []
    for i, t in enumerate(result.times):
        row: dict[str, Any] = {"time": float(t)}
        for q in range(1, n_sites + 1):
            row[f"site{q}_target"] = float(result.target_occupations[i, q - 1])
            row[f"site{q}_encoded"] = float(result.encoded_occupations[i, q - 1])
        row["gap"] = float(
            abs(result.target_occupations[i] - result.encoded_occupations[i]).max()
        )
        rows.append(row)
    return rows


def sample_rows(report: SampleReport) -> list[dict]:
    rows = []
    freqs = report.frequencies
    for i, (w, s) in enumerate(report.channel.terms):
        rows.append(
            {
                "string": s.text,
                "weight": w,
                "count": report.counts[i],
                "frequency": freqs[i],
            }
        )
    return rows
