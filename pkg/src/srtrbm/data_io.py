"""IDX dataset parsing, binarization, and the synthetic bars generator.

Dataset acquisition is an external step (see scripts/fetch_mnist.py); this
module only reads files that are already on disk.
"""

from __future__ import annotations

import gzip
import struct
from pathlib import Path

import numpy as np

_IDX_DTYPES = {
    0x08: np.dtype(">u1"),
    0x09: np.dtype(">i1"),
    0x0B: np.dtype(">i2"),
    0x0C: np.dtype(">i4"),
    0x0D: np.dtype(">f4"),
    0x0E: np.dtype(">f8"),
}

TRAIN_IMAGES = "train-images-idx3-ubyte"
TRAIN_LABELS = "train-labels-idx1-ubyte"
TEST_IMAGES = "t10k-images-idx3-ubyte"
TEST_LABELS = "t10k-labels-idx1-ubyte"


def _read_bytes(path) -> bytes:
    with open(path, "rb") as f:
        head = f.read(2)
        f.seek(0)
        if head == b"\x1f\x8b":
            return gzip.decompress(f.read())
        return f.read()


def load_idx(path) -> np.ndarray:
    """Parse a big-endian IDX file (gzipped or plain) into an ndarray."""
    blob = _read_bytes(path)
    if len(blob) < 4:
        raise ValueError("not an IDX file: too short")
    zero, dtype_code, ndim = blob[0] << 8 | blob[1], blob[2], blob[3]
    if zero != 0:
        raise ValueError("not an IDX file: bad magic prefix")
    if dtype_code not in _IDX_DTYPES:
        raise ValueError("unknown IDX dtype code 0x%02x" % dtype_code)
    dims = struct.unpack_from(">" + "I" * ndim, blob, 4)
    dtype = _IDX_DTYPES[dtype_code]
    count = int(np.prod(dims)) if dims else 0
    off = 4 + 4 * ndim
    expected = off + count * dtype.itemsize
    if len(blob) != expected:
        raise ValueError("IDX payload size mismatch: %d != %d" % (len(blob), expected))
    data = np.frombuffer(blob, dtype=dtype, count=count, offset=off)
    return data.reshape(dims).astype(dtype.newbyteorder("="))


def save_idx(path, array: np.ndarray) -> None:
    """Write an ndarray as an IDX file (inverse of load_idx)."""
    array = np.asarray(array)
    code = None
    for c, dt in _IDX_DTYPES.items():
        if dt.newbyteorder("=") == array.dtype:
            code = c
            break
    if code is None:
        raise ValueError("dtype %r not representable in IDX" % array.dtype)
    with open(path, "wb") as f:
        f.write(bytes([0, 0, code, array.ndim]))
        f.write(struct.pack(">" + "I" * array.ndim, *array.shape))
        f.write(array.astype(_IDX_DTYPES[code]).tobytes())


def binarize(x, threshold: float = 0.5) -> np.ndarray:
    """Strict threshold after scaling to [0, 1]; idempotent on binary input.

    Unsigned byte input is scaled by 1/255 first, so byte 128 maps to 1 and
    byte 127 maps to 0 at the default threshold. Float input is assumed to
    be already scaled.
    """
    x = np.asarray(x)
    if x.dtype == np.uint8:
        scaled = x.astype(np.float64) / 255.0
    else:
        scaled = x.astype(np.float64)
    return (scaled > threshold).astype(np.float64)


def find_idx_file(dataset_dir, stem: str) -> Path:
    """Locate an IDX file by stem, accepting a .gz suffix."""
    base = Path(dataset_dir)
    for name in (stem, stem + ".gz"):
        p = base / name
        if p.exists():
            return p
    raise FileNotFoundError("missing %s(.gz) under %s" % (stem, base))


def load_mnist(dataset_dir, train: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """(binarized flat images, labels) for the train or test split."""
    img_stem = TRAIN_IMAGES if train else TEST_IMAGES
    lab_stem = TRAIN_LABELS if train else TEST_LABELS
    images = load_idx(find_idx_file(dataset_dir, img_stem))
    labels = load_idx(find_idx_file(dataset_dir, lab_stem))
    if images.ndim != 3:
        raise ValueError("image file must be rank 3")
    if labels.shape != (images.shape[0],):
        raise ValueError("label count does not match image count")
    flat = binarize(images.reshape(images.shape[0], -1).astype(np.uint8))
    return flat, labels.astype(np.int64)


def synthetic_bars(side: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Random bars-and-stripes patterns on a side x side grid, flattened.

    Each sample picks an orientation fairly, then switches each full row
    (or column) on with probability 1/2; the family for side = 2 has
    2 * 2^2 = 8 members counting the duplicated uniform patterns.
    """
    if side < 1 or count < 0:
        raise ValueError("side must be >= 1 and count >= 0")
    horiz = rng.random(count) < 0.5
    line_on = (rng.random((count, side)) < 0.5).astype(np.float64)
    rows = np.repeat(line_on[:, :, None], side, axis=2)  # horizontal bars
    cols = np.repeat(line_on[:, None, :], side, axis=1)  # vertical stripes
    grids = np.where(horiz[:, None, None], rows, cols)
    return grids.reshape(count, side * side)
