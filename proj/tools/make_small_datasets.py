#!/usr/bin/env python3
# Copyright 2026 The mcsvm Authors
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
"""Regenerate tests/data/{iris,glass}.scale from the UCI tables.

The UCI iris and glass tables ship with the `pydataset` package (R's
`datasets::iris` and `MASS::fgl`). Features are min-max scaled to [-1, 1]
over the whole file and written with "%g", the same transformation the
LIBSVM `svm-scale` tool applies to produce the public *.scale files.

    pip install pydataset
    python tools/make_small_datasets.py tests/data
"""
import sys
from pathlib import Path

from pydataset import data

GLASS_TYPES = {"WinF": 1, "WinNF": 2, "Veh": 3, "Con": 5, "Tabl": 6, "Head": 7}
IRIS_TYPES = {"setosa": 1, "versicolor": 2, "virginica": 3}


def svm_scale(rows, lower=-1.0, upper=1.0):
    ncol = len(rows[0])
    lo = [min(r[j] for r in rows) for j in range(ncol)]
    hi = [max(r[j] for r in rows) for j in range(ncol)]
    out = []
    for r in rows:
        scaled = []
        for j, v in enumerate(r):
            if hi[j] == lo[j]:
                continue
            if v == lo[j]:
                s = lower
            elif v == hi[j]:
                s = upper
            else:
                s = lower + (upper - lower) * (v - lo[j]) / (hi[j] - lo[j])
            if s != 0:
                scaled.append((j + 1, s))
        out.append(scaled)
    return out


def write(path, labels, rows):
    with open(path, "w") as f:
        for y, feats in zip(labels, svm_scale(rows)):
            f.write(str(y) + "".join(" %d:%g" % (j, v) for j, v in feats) + "\n")


def main(outdir):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)

    fgl = data("fgl")
    # MASS stores the refractive index as (RI - 1.518) * 1000.
    rows = [[1.518 + r.RI / 1000.0, r.Na, r.Mg, r.Al, r.Si, r.K, r.Ca, r.Ba, r.Fe]
            for r in fgl.itertuples()]
    write(out / "glass.scale", [GLASS_TYPES[t] for t in fgl["type"]], rows)

    iris = data("iris")
    rows = iris.iloc[:, :4].values.tolist()
    write(out / "iris.scale", [IRIS_TYPES[s] for s in iris["Species"]], rows)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data")
