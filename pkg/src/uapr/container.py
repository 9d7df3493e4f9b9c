"""Binary descriptor container and the CSV fixture fallback.

Layout: magic "UAPR", uint16-LE version (=1), uint32-LE manifest length,
UTF-8 JSON manifest {count, dim, members, has_variances, has_poses,
has_timestamps, label}, then the payload: descriptors as float32-LE in
[member][entry][dimension] order, optional variances (N x L float32),
optional poses (N x 3 float64), optional timestamps (N float64).
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import (
    BadMagic,
    ManifestMismatch,
    TruncatedPayload,
    VersionUnsupported,
)
from .types import DescriptorSet, validate_set

MAGIC = b"UAPR"
VERSION = 1


def write_descriptor_file(path, dataset: DescriptorSet) -> None:
    dataset = validate_set(dataset)
    manifest = {
        "count": dataset.count,
        "dim": dataset.dim,
        "members": dataset.member_count,
        "has_variances": dataset.variances is not None,
        "has_poses": dataset.has_poses,
        "has_timestamps": dataset.has_timestamps,
        "label": dataset.label,
    }
    blob = json.dumps(manifest, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<HI", VERSION, len(blob)))
        fh.write(blob)
        fh.write(np.ascontiguousarray(dataset.members, dtype="<f4").tobytes())
        if dataset.variances is not None:
            fh.write(np.ascontiguousarray(dataset.variances, dtype="<f4").tobytes())
        if dataset.has_poses:
            fh.write(np.ascontiguousarray(dataset.poses, dtype="<f8").tobytes())
        if dataset.has_timestamps:
            fh.write(np.ascontiguousarray(dataset.timestamps, dtype="<f8").tobytes())


def _take(buf: bytes, offset: int, nbytes: int, what: str) -> tuple[bytes, int]:
    if offset + nbytes > len(buf):
        raise TruncatedPayload(f"file ends inside {what}")
    return buf[offset : offset + nbytes], offset + nbytes


def read_binary(path) -> DescriptorSet:
    buf = Path(path).read_bytes()
    head, off = _take(buf, 0, 10, "header")
    if head[:4] != MAGIC:
        raise BadMagic(f"not a descriptor file: magic {head[:4]!r}")
    version, manifest_len = struct.unpack("<HI", head[4:])
    if version != VERSION:
        raise VersionUnsupported(f"unsupported container version {version}")
    blob, off = _take(buf, off, manifest_len, "manifest")
    try:
        manifest = json.loads(blob.decode("utf-8"))
        n = int(manifest["count"])
        dim = int(manifest["dim"])
        m = int(manifest["members"])
    except (ValueError, KeyError, UnicodeDecodeError) as exc:
        raise ManifestMismatch(f"bad manifest: {exc}") from exc
    if n < 1 or dim < 1 or m < 1:
        raise ManifestMismatch("manifest declares an empty axis")

    raw, off = _take(buf, off, m * n * dim * 4, "descriptor payload")
    members = np.frombuffer(raw, dtype="<f4").reshape(m, n, dim)
    variances = None
    if manifest.get("has_variances"):
        raw, off = _take(buf, off, n * dim * 4, "variance payload")
        variances = np.frombuffer(raw, dtype="<f4").reshape(n, dim)
    has_poses = bool(manifest.get("has_poses"))
    if has_poses:
        raw, off = _take(buf, off, n * 3 * 8, "pose payload")
        poses = np.frombuffer(raw, dtype="<f8").reshape(n, 3)
    else:
        poses = np.zeros((n, 3))
    has_timestamps = bool(manifest.get("has_timestamps"))
    if has_timestamps:
        raw, off = _take(buf, off, n * 8, "timestamp payload")
        timestamps = np.frombuffer(raw, dtype="<f8")
    else:
        timestamps = np.zeros(n)
    if off != len(buf):
        raise ManifestMismatch(
            f"payload size mismatch: {len(buf) - off} trailing bytes"
        )
    return validate_set(
        DescriptorSet(
            members=members,
            poses=poses,
            timestamps=timestamps,
            variances=variances,
            has_poses=has_poses,
            has_timestamps=has_timestamps,
            label=str(manifest.get("label", "")),
        )
    )


def read_csv(path) -> DescriptorSet:
    """Plain-text fixture variant: one row per entry with L descriptor
    values, then pose (3), then timestamp (1)."""
    rows = np.loadtxt(path, delimiter=",", ndmin=2)
    if rows.shape[1] < 5:
        raise ManifestMismatch("CSV rows need at least 1 descriptor value + pose + timestamp")
    dim = rows.shape[1] - 4
    return validate_set(
        DescriptorSet(
            members=rows[np.newaxis, :, :dim],
            poses=rows[:, dim : dim + 3],
            timestamps=rows[:, dim + 3],
        )
    )


def read_descriptor_file(path) -> DescriptorSet:
    """Reads either the binary container (sniffed by magic) or the CSV
    fixture variant."""
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head == MAGIC:
        return read_binary(path)
    if str(path).endswith(".csv"):
        return read_csv(path)
    raise BadMagic(f"{path}: not a descriptor container (and not a .csv fixture)")
