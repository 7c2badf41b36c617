#!/usr/bin/env python3
# Copyright 2026 The QRC Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Convert an MNIST CSV (784 pixel columns, then the label) to IDX files.

Accepts a .csv, a .csv.gz, or a wheel/zip holding one (--member selects it).
Writes images.idx (magic 0x00000803) and labels.idx (magic 0x00000801).
"""

import argparse
import gzip
import hashlib
import io
import os
import struct
import zipfile


def read_rows(path, member):
    if zipfile.is_zipfile(path):
        with zipfile.ZipFile(path) as z:
            raw = z.read(member)
    else:
        with open(path, "rb") as f:
            raw = f.read()
    if raw[:2] == b"\x1f\x8b":
        raw = gzip.decompress(raw)
    for lineno, line in enumerate(io.StringIO(raw.decode("ascii")), 1):
        line = line.strip()
        if not line:
            continue
        cells = line.split(",")
        if len(cells) != 785:
            raise SystemExit(f"{path}:{lineno}: expected 785 fields, found {len(cells)}")
        yield [int(float(v)) for v in cells[:784]], int(float(cells[784]))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("source")
    ap.add_argument("out_dir")
    ap.add_argument("--member", default="mlxtend/data/data/mnist_5k.csv.gz")
    args = ap.parse_args()
    rows = list(read_rows(args.source, args.member))
    os.makedirs(args.out_dir, exist_ok=True)
    images = os.path.join(args.out_dir, "images.idx")
    labels = os.path.join(args.out_dir, "labels.idx")
    with open(images, "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(rows), 28, 28))
        for pixels, _ in rows:
            f.write(bytes(pixels))
    with open(labels, "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(rows)))
        f.write(bytes(label for _, label in rows))
    for p in (images, labels):
        with open(p, "rb") as f:
            print(p, hashlib.sha256(f.read()).hexdigest())


if __name__ == "__main__":
    main()
