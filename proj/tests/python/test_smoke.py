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
import math
import pathlib

import pytest

import pifs_lab as pl

CONFIGS = pathlib.Path(__file__).resolve().parents[2] / "configs"


def cantor():
    return pl.affine_system([1 / 3, 1 / 3], [0.0, 2 / 3], id="cantor")


def test_measures():
    mu = pl.BernoulliSpec.geometric(0.5)
    assert mu.prob(3) == 0.125
    assert mu.entropy() == pytest.approx(2 * math.log(2))
    assert mu.support_max() is None
    c = pl.concentrate(mu, 3)
    assert c.probs == [0.5, 0.25, 0.25]
    assert c.entropy() == pytest.approx(1.5 * math.log(2))
    assert pl.BernoulliSpec.with_log_power_tail([]).entropy() == math.inf


def test_dimension_formula_and_bound():
    assert pl.dimension_formula(math.log(2), math.log(3)) == pytest.approx(0.630930, abs=1e-6)
    assert pl.dimension_formula(math.inf, math.log(3)) == 1.0
    assert pl.exceptional_bound(0.5, 0.8, 2) == 1.5
    with pytest.raises(ValueError):
        pl.dimension_formula(1.0, 0.0)


def test_projection_and_lyapunov():
    x, err, depth, truncated = pl.project(cantor(), [2], [1], tol=1e-12)
    assert x == pytest.approx(2 / 3)
    assert err <= 0.5e-12 and not truncated
    est = pl.lyapunov(cantor(), pl.BernoulliSpec.uniform(2))
    assert est["mean"] == pytest.approx(math.log(3))
    assert est["std_error"] == 0.0


def test_empirical_dimension():
    xs, errs = pl.sample_attractor(cantor(), pl.BernoulliSpec.uniform(2), 100_000, seed=3)
    assert max(errs) < 1e-9
    scales = [3.0 ** -k for k in range(2, 8)]
    slope, r2, pairs = pl.box_count_dimension(xs, (0.0, 1.0), scales)
    assert abs(slope - math.log(2) / math.log(3)) < 0.05
    assert len(pairs) == len(scales)
    local, _, _ = pl.local_dimension(xs, scales[:5])
    assert abs(local - math.log(2) / math.log(3)) < 0.05


def test_run_config(tmp_path):
    res = pl.run_config(str(CONFIGS / "cantor.yaml"), kind="dimension", out=str(tmp_path))
    assert res["exit_code"] == 0
    assert "dimension: 0.630930" in res["summary"]
    assert (tmp_path / "cantor" / "profile.csv").exists()


def test_run_config_schema_error(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("experiment: {name: x, kind: dimension}\ndomain: [0, 1]\nsystem: {maps: [{rate: 0.5}]}\n")
    res = pl.run_config(str(bad), out=str(tmp_path))
    assert res["exit_code"] == 2
    assert "measure" in res["message"]
