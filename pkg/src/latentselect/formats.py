"""On-disk formats: the EMB1 binary matrix, CSV matrices, and atomic writes.

EMB1 layout: 4 ASCII magic bytes "EMB1", then rows and cols as 32-bit
little-endian unsigned integers, then rows*cols little-endian 32-bit floats
in row-major order.

The CSV alternative has a header row ``f0,f1,...``, one sample per line,
decimal points, no thousands separators.
"""

from __future__ import annotations

import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from .errors import FormatError
from .linalg import as_matrix

EMB1_MAGIC = b"EMB1"


def atomic_write_bytes(path, data: bytes) -> None:
    """Write via a temp file in the same directory plus rename.

    A failed writer never leaves a partial file at ``path``.
    """
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name + ".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def emb1_bytes(m) -> bytes:
    m = as_matrix(m, allow_empty=True)
    header = EMB1_MAGIC + struct.pack("<II", m.shape[0], m.shape[1])
    return header + m.astype("<f4").tobytes(order="C")


def write_emb1(path, m) -> None:
    atomic_write_bytes(path, emb1_bytes(m))


def read_emb1(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < 12 or raw[:4] != EMB1_MAGIC:
        raise FormatError(f"{path}: not an EMB1 file (bad magic or truncated header)")
    rows, cols = struct.unpack("<II", raw[4:12])
    expected = 12 + 4 * rows * cols
    if len(raw) != expected:
        raise FormatError(f"{path}: expected {expected} bytes for {rows}x{cols}, got {len(raw)}")
    data = np.frombuffer(raw, dtype="<f4", offset=12).reshape(rows, cols)
    return as_matrix(data, allow_empty=True)


def matrix_csv_text(m) -> str:
    m = as_matrix(m, allow_empty=True)
    lines = [",".join(f"f{j}" for j in range(m.shape[1]))]
    for row in m:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def write_matrix_csv(path, m) -> None:
    atomic_write_text(path, matrix_csv_text(m))


def read_matrix_csv(path) -> np.ndarray:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise FormatError(f"{path}: empty CSV")
    header = lines[0].split(",")
    cols = len(header)
    if header[0].strip() != "f0":
        raise FormatError(f"{path}: matrix CSV header must start with 'f0'")
    rows = []
    for k, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != cols:
            raise FormatError(f"{path}: line {k} has {len(parts)} fields, expected {cols}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise FormatError(f"{path}: line {k}: {exc}") from exc
    arr = np.array(rows, dtype=np.float32).reshape(len(rows), cols)
    try:
        return as_matrix(arr, allow_empty=True)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def write_matrix(path, m) -> None:
    """Dispatch on extension: .csv writes CSV, anything else writes EMB1."""
    if str(path).endswith(".csv"):
        write_matrix_csv(path, m)
    else:
        write_emb1(path, m)


def read_matrix(path) -> np.ndarray:
    """Sniff the format: EMB1 magic wins, otherwise parse as CSV."""
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head == EMB1_MAGIC:
        return read_emb1(path)
    return read_matrix_csv(path)


def write_labels_csv(path, labels) -> None:
    atomic_write_text(path, "label\n" + "\n".join(str(v) for v in labels) + "\n")


def read_labels_csv(path) -> list[str]:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "label":
        raise FormatError(f"{path}: labels CSV must have a 'label' header")
    return [ln.strip() for ln in lines[1:]]


def write_targets_csv(path, targets) -> None:
    body = "\n".join(repr(float(v)) for v in np.asarray(targets, dtype=np.float64))
    atomic_write_text(path, "target\n" + body + "\n")


def read_targets_csv(path) -> np.ndarray:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "target":
        raise FormatError(f"{path}: targets CSV must have a 'target' header")
    try:
        return np.array([float(ln) for ln in lines[1:]], dtype=np.float64)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc
