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

"""Multi-class linear SVM training by dual coordinate ascent.

Solvers: ``"llw"`` (Lee-Lin-Wahba), ``"ww"`` (Weston-Watkins) and
``"ovr"`` (one-vs-rest). Data is read in LIBSVM format.
"""

from ._mcsvm import (
    Dataset,
    Error,
    InvalidArgument,
    Model,
    ModelFormatError,
    ParseError,
    SolverConfig,
    build_schedule,
    evaluate,
    load_libsvm,
    match_class,
    normalize,
    parse_libsvm,
    split_holdout,
    train,
)

__all__ = [
    "Dataset",
    "Error",
    "InvalidArgument",
    "Model",
    "ModelFormatError",
    "ParseError",
    "SolverConfig",
    "build_schedule",
    "evaluate",
    "load_libsvm",
    "match_class",
    "normalize",
    "parse_libsvm",
    "split_holdout",
    "train",
]

__version__ = "0.1.0"
