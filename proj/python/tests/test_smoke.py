# Copyright 2026 The mcsvm Authors.
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

import os
from pathlib import Path

import numpy as np
import pytest

import mcsvm

DATA = Path(os.environ.get("MCSVM_TEST_DATA_DIR", Path(__file__).resolve().parents[2] / "tests" / "data"))


def test_parse_and_properties():
    ds = mcsvm.parse_libsvm("3 1:1.0\n1 2:2.0\n")
    assert len(ds) == 2
    assert ds.dim == 2
    assert ds.label_names == ["3", "1"]
    assert ds.labels == ["3", "1"]
    assert mcsvm.parse_libsvm(ds.to_libsvm()).fingerprint() == ds.fingerprint()


def test_parse_errors_are_value_errors():
    with pytest.raises(ValueError):
        mcsvm.parse_libsvm("1 2:1 1:1")
    with pytest.raises(ValueError):
        mcsvm.parse_libsvm("")


@pytest.mark.parametrize("solver", ["llw", "ww", "ovr"])
def test_train_predict_evaluate(solver, tmp_path):
    ds = mcsvm.normalize(mcsvm.load_libsvm(DATA / "iris.scale"), "l2")
    config = mcsvm.SolverConfig()
    config.C = 10.0
    model, stats = mcsvm.train(solver, ds, config)
    assert stats["converged"]
    assert stats["epochs"][-1]["dual"] >= stats["initial_dual"]
    assert model.weights.shape == (3, 4)
    predictions = model.predict(ds)
    accuracy = np.mean([p == t for p, t in zip(predictions, ds.labels)])
    assert accuracy > 0.7
    report = mcsvm.evaluate(model, ds)
    assert report["micro_f1_pct"] == pytest.approx(100.0 - report["error_pct"])

    path = tmp_path / "model.bin"
    model.save(path)
    assert mcsvm.Model.load(path) == model


def test_schedule():
    assert mcsvm.match_class(8, 2, 1) == 7
    rounds = mcsvm.build_schedule(6)
    assert len(rounds) == 5
    pairs = {p for r in rounds for p in r}
    assert len(pairs) == 15


def test_bad_solver():
    ds = mcsvm.parse_libsvm("a 1:1\nb 2:1\n")
    with pytest.raises(ValueError):
        mcsvm.train("cs", ds)
