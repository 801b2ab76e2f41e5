"""Trajectory file format and report writers.

A trajectory file is plain text. The first line declares format and space:

    #dqtraj v1 space=qt count=500

followed by optional `#key value...` metadata lines and one record per
pose. Records are whitespace separated with a leading running index and
floats printed with 17 significant digits (lossless for float64):

    space "qt": index t_x t_y t_z q_w q_x q_y q_z   (scalar-first quaternion)
    space "dq": index q1 q2 q3 q4 q5 q6 q7 q8       (real part first)

Loaded records must satisfy the unit constraints to 1e-6 and are projected
exactly onto the manifold. All writes are atomic (temp file + rename).
"""

import csv
import io
import json
import os
import tempfile

import numpy as np

from . import dual
from .trajectory import PoseTrajectory

MAGIC = "#dqtraj"
FORMAT_VERSION = "v1"
LOAD_TOL = 1e-6
SPACES = ("qt", "dq")


class TrajectoryParseError(Exception):
    """Malformed trajectory file; message carries the offending line number."""


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(values):
    return " ".join(f"{v:.17g}" for v in values)


def write_trajectory(path, traj, space="qt", meta=None):
    """Write a trajectory in the declared space with optional metadata."""
    if space not in SPACES:
        raise ValueError(f"unknown space {space!r}")
    lines = [f"{MAGIC} {FORMAT_VERSION} space={space} count={len(traj)}"]
    for key in sorted(meta or {}):
        lines.append(f"#{key} {meta[key]}")
    if space == "qt":
        for i in range(len(traj)):
            lines.append(
                f"{i} {_fmt(traj.translations[i])} {_fmt(traj.rotations[i])}"
            )
    else:
        dqs = traj.to_dq()
        for i in range(len(traj)):
            lines.append(f"{i} {_fmt(dqs[i])}")
    _atomic_write(path, "\n".join(lines) + "\n")


def read_trajectory(path):
    """Parse a trajectory file; returns (trajectory, space, meta dict)."""
    with open(path) as handle:
        lines = handle.read().splitlines()
    if not lines or not lines[0].startswith(MAGIC + " "):
        raise TrajectoryParseError(f"line 1: not a {MAGIC} file")
    fields = lines[0].split()
    if len(fields) != 4 or fields[1] != FORMAT_VERSION:
        raise TrajectoryParseError(f"line 1: unsupported header {lines[0]!r}")
    try:
        space = dict(f.split("=", 1) for f in fields[2:])["space"]
        count = int(dict(f.split("=", 1) for f in fields[2:])["count"])
    except (ValueError, KeyError):
        raise TrajectoryParseError(f"line 1: unsupported header {lines[0]!r}")
    if space not in SPACES:
        raise TrajectoryParseError(f"line 1: unknown space {space!r}")

    meta = {}
    records = []
    width = 8 if space == "qt" else 9
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        if line.startswith("#"):
            if records:
                raise TrajectoryParseError(
                    f"line {lineno}: metadata after first record"
                )
            key, _, value = line[1:].partition(" ")
            meta[key] = value
            continue
        parts = line.split()
        if len(parts) != width:
            raise TrajectoryParseError(
                f"line {lineno}: expected {width} fields, got {len(parts)}"
            )
        try:
            index = int(parts[0])
            values = [float(p) for p in parts[1:]]
        except ValueError:
            raise TrajectoryParseError(f"line {lineno}: malformed number")
        if index != len(records):
            raise TrajectoryParseError(
                f"line {lineno}: record index {index}, expected {len(records)}"
            )
        records.append((lineno, values))

    if len(records) != count:
        raise TrajectoryParseError(
            f"header declares {count} records, found {len(records)}"
        )

    if space == "qt":
        rotations = np.empty((count, 4))
        translations = np.empty((count, 3))
        for row, (lineno, values) in enumerate(records):
            translations[row] = values[:3]
            rot = np.asarray(values[3:])
            err = abs(np.linalg.norm(rot) - 1.0)
            if err > LOAD_TOL:
                raise TrajectoryParseError(
                    f"line {lineno}: quaternion unit violation {err:.3g}"
                )
            rotations[row] = rot / np.linalg.norm(rot)
        traj = PoseTrajectory(rotations, translations)
    else:
        dqs = np.empty((count, 8))
        for row, (lineno, values) in enumerate(records):
            dq_row = np.asarray(values)
            norm_err, ortho_err = dual.unit_violation(dq_row)
            if norm_err > LOAD_TOL or ortho_err > LOAD_TOL:
                raise TrajectoryParseError(
                    f"line {lineno}: unit constraint violation "
                    f"({norm_err:.3g}, {ortho_err:.3g})"
                )
            dqs[row] = dual.dq_project(dq_row)
        traj = PoseTrajectory.from_dq(dqs)
    return traj, space, meta


def write_report(path, payload):
    """Deterministic JSON report (sorted keys, stable float formatting)."""
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_csv(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _atomic_write(path, buf.getvalue())
