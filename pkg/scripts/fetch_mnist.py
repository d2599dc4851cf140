"""Download the four MNIST IDX files into a local data directory.

Tries a list of long-lived public mirrors in order, validates the IDX
magic and the advertised record counts before keeping anything, and
writes the gzipped files under --out (default ./data) where the training
CLI and the desk-scale acceptance test look for them.

Usage:
    python3 scripts/fetch_mnist.py [--out DIR]
"""

import argparse
import gzip
import struct
import sys
import urllib.error
import urllib.request
from pathlib import Path

MIRRORS = (
    "https://ossci-datasets.s3.amazonaws.com/mnist/",
    "https://storage.googleapis.com/cvdf-datasets/mnist/",
    "https://yann.lecun.com/exdb/mnist/",
)

# filename -> (idx magic, number of records)
FILES = {
    "train-images-idx3-ubyte.gz": (2051, 60000),
    "train-labels-idx1-ubyte.gz": (2049, 60000),
    "t10k-images-idx3-ubyte.gz": (2051, 10000),
    "t10k-labels-idx1-ubyte.gz": (2049, 10000),
}


def validate(raw: bytes, magic: int, count: int) -> None:
    body = gzip.decompress(raw)
    got_magic, got_count = struct.unpack(">ii", body[:8])
    if got_magic != magic:
        raise ValueError("bad IDX magic %d, expected %d" % (got_magic, magic))
    if got_count != count:
        raise ValueError("found %d records, expected %d" % (got_count, count))


def fetch(name: str, magic: int, count: int) -> bytes:
    errors = []
    for base in MIRRORS:
        url = base + name
        try:
            with urllib.request.urlopen(url, timeout=60) as resp:
                raw = resp.read()
            validate(raw, magic, count)
            print("  ok  %s" % url)
            return raw
        except (urllib.error.URLError, OSError, ValueError) as exc:
            errors.append("%s: %s" % (url, exc))
    raise RuntimeError("all mirrors failed for %s:\n  %s" % (name, "\n  ".join(errors)))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="data", help="target directory (default ./data)")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for name, (magic, count) in FILES.items():
        target = out / name
        if target.exists():
            try:
                validate(target.read_bytes(), magic, count)
                print("  have %s" % target)
                continue
            except (OSError, ValueError):
                print("  invalid existing %s, refetching" % target)
        raw = fetch(name, magic, count)
        target.write_bytes(raw)
    print("MNIST ready under %s/" % out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
