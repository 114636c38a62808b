#!/usr/bin/env python3
"""Write an IDX image/label pair from a flat MNIST CSV.

Input rows hold 784 pixel values in 0..255 followed by the digit label, as in
the 5000 image sample shipped with mlxtend (mlxtend/data/data/mnist_5k.csv.gz).
Only the requested digits are kept, in file order.

    python3 tools/make_mnist_fixture.py mnist_5k.csv.gz data/mnist012 --digits 0 1 2
"""

import argparse
import csv
import gzip
import struct
from pathlib import Path


def read_rows(path):
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "rt", newline="") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            values = [int(float(v)) for v in row]
            if len(values) != 785:
                raise ValueError(f"expected 785 columns, got {len(values)}")
            yield values[:784], values[784]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("source", type=Path)
    ap.add_argument("prefix", type=Path, help="output prefix; writes <prefix>-images-idx3-ubyte and <prefix>-labels-idx1-ubyte")
    ap.add_argument("--digits", type=int, nargs="+", default=list(range(10)))
    args = ap.parse_args()

    keep = set(args.digits)
    images = bytearray()
    labels = bytearray()
    for pixels, label in read_rows(args.source):
        if label not in keep:
            continue
        images.extend(bytes(pixels))
        labels.append(label)
    count = len(labels)

    args.prefix.parent.mkdir(parents=True, exist_ok=True)
    with open(f"{args.prefix}-images-idx3-ubyte", "wb") as fh:
        fh.write(struct.pack(">IIII", 0x803, count, 28, 28))
        fh.write(images)
    with open(f"{args.prefix}-labels-idx1-ubyte", "wb") as fh:
        fh.write(struct.pack(">II", 0x801, count))
        fh.write(labels)
    print(f"wrote {count} images")


if __name__ == "__main__":
    main()
