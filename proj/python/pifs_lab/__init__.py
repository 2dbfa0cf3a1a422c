# Copyright 2026 The pifs-lab Authors
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
"""Numerical laboratory for parabolic iterated function systems."""

from ._core import (
    BernoulliSpec,
    ConcentratedBernoulli,
    SystemSpec,
    __version__,
    affine_system,
    box_count_dimension,
    concentrate,
    dimension_formula,
    exceptional_bound,
    local_dimension,
    lyapunov,
    project,
    run_config,
    sample_attractor,
)

__all__ = [
    "BernoulliSpec",
    "ConcentratedBernoulli",
    "SystemSpec",
    "__version__",
    "affine_system",
    "box_count_dimension",
    "concentrate",
    "dimension_formula",
    "exceptional_bound",
    "local_dimension",
    "lyapunov",
    "project",
    "run_config",
    "sample_attractor",
]
