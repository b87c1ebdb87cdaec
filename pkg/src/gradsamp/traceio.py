"""Trace persistence: JSON-lines traces, curve CSVs, one-line summaries.

A trace file is: one header object (echoing every effective parameter), one
object per iteration record with keys {k, x, f, eps, nu, g_norm, step_kind,
t, perturbed}, and one final status object.  Floats go through repr-faithful
JSON, so a file read back summarizes to the identical line.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

from .solver import RunTrace


@dataclass
class TraceFile:
    """A trace as read back from disk."""

    header: dict
    records: list[dict]
    status: dict


def _record_to_obj(r) -> dict:
    return {
        "k": r.k,
        "x": [float(c) for c in r.x],
        "f": float(r.f_val),
        "eps": float(r.eps_k),
        "nu": float(r.nu_k),
        "g_norm": float(r.g_norm),
        "step_kind": str(r.step_kind.value),
        "t": float(r.t_k),
        "perturbed": bool(r.perturbed),
    }


def write_trace(path: str, trace: RunTrace, header: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"type": "header", **header}) + "\n")
        for r in trace.records:
            fh.write(json.dumps(_record_to_obj(r)) + "\n")
        fh.write(
            json.dumps(
                {
                    "type": "status",
                    "status": str(trace.status.value),
                    "final_x": [float(c) for c in trace.final_x],
                    "final_f": float(trace.final_f),
                    "wall_time": float(trace.wall_time),
                }
            )
            + "\n"
        )


def read_trace(path: str) -> TraceFile:
    with open(path, encoding="utf-8") as fh:
        lines = [json.loads(line) for line in fh if line.strip()]
    if len(lines) < 2 or lines[0].get("type") != "header" or lines[-1].get("type") != "status":
        raise ValueError(f"{path} is not a trace file")
    return TraceFile(header=lines[0], records=lines[1:-1], status=lines[-1])


def _summary(status: str, iterations: int, final_f: float, final_x, sum_t_g: float) -> str:
    xs = ",".join(repr(float(c)) for c in final_x)
    return (
        f"status={status} iterations={iterations} final_f={float(final_f)!r} "
        f"final_x={xs} sum_t_g={float(sum_t_g)!r}"
    )


def summary_from_trace(trace: RunTrace) -> str:
    total = sum(r.t_k * r.g_norm for r in trace.records)
    return _summary(trace.status.value, len(trace.records), trace.final_f, trace.final_x, total)


def summary_from_file(path: str) -> str:
    tf = read_trace(path)
    total = sum(r["t"] * r["g_norm"] for r in tf.records)
    return _summary(
        tf.status["status"], len(tf.records), tf.status["final_f"], tf.status["final_x"], total
    )


def write_curves(path: str, trace: RunTrace) -> None:
    """Plot-friendly CSV: one row per iteration, k / f / g_norm / eps / nu / t."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "f", "g_norm", "eps", "nu", "t"])
        for r in trace.records:
            w.writerow(
                [r.k, repr(float(r.f_val)), repr(float(r.g_norm)), repr(float(r.eps_k)),
                 repr(float(r.nu_k)), repr(float(r.t_k))]
            )
