# Copyright 2026 The xdual Authors.
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

"""Abductive and contrastive explanations of tree classifiers."""

from xdual._core import (
    Model,
    XdualError,
    brute_force,
    enumerate_all,
    extract_axp,
    extract_cxp,
    load_model,
    minimal_hitting_set,
    parse_model,
    run_cli,
    verify,
)

__all__ = [
    "Model",
    "XdualError",
    "brute_force",
    "enumerate_all",
    "extract_axp",
    "extract_cxp",
    "load_model",
    "minimal_hitting_set",
    "parse_model",
    "run_cli",
    "verify",
]
