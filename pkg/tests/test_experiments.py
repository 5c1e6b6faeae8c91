import csv
import io
import json

import numpy as np
import pytest

from kpset import gf2poly as gf
from kpset.experiments import (CSV_COLUMNS, ExperimentConfig, records_to_csv, run_experiment,
                               run_trial, summary_to_json)
from kpset.lattice import build_union, draw_recipe, korobov_numerators


def test_config_defaults_and_validation():
    cfg = ExperimentConfig(m=4, s=2)
    assert cfg.p == gf.smallest_irreducible(4) == 0b10011
    assert cfg.probe_box() == (9, 9)
    assert ExperimentConfig(m=1, s=1).probe_box() == (2,)
    with pytest.raises(ValueError):
        ExperimentConfig(m=3, s=2, p="0x9")
    with pytest.raises(ValueError):
        ExperimentConfig(m=3, s=2, trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig(m=3, s=2, mode="theorem3")
    with pytest.raises(ValueError):
        ExperimentConfig.from_json('{"m": 3, "s": 2, "bogus": 1}')
    cfg = ExperimentConfig.from_json('{"m": 3, "s": 2, "mode": "thm2", "p": "0xd"}')
    assert cfg.mode == "theorem2" and cfg.p == 0b1101


def test_trial_is_reproducible():
    cfg = ExperimentConfig(m=3, s=2, seed=5)
    assert run_trial(cfg, 4) == run_trial(cfg, 4)
    assert run_trial(cfg, 4) != run_trial(cfg, 5)


def test_record_fields():
    cfg = ExperimentConfig(m=3, s=2, seed=1, trials=3)
    rec = run_trial(cfg, 0)
    assert rec.satisfied == (rec.upper_bound <= rec.theorem_bound)
    assert rec.upper_bound == rec.grid_max + 2 / 8
    assert rec.max_abs_contribution <= 1
    assert rec.recipe_digest == draw_recipe(cfg.mode, 3, 2, cfg.p, 1, 0).digest()


@pytest.mark.parametrize("mode", ["theorem1", "theorem2"])
def test_workers_do_not_change_output(mode):
    cfg = ExperimentConfig(m=3, s=2, seed=99, trials=12, mode=mode)
    one = run_experiment(cfg, workers=1)
    four = run_experiment(cfg, workers=4)
    assert records_to_csv(one.records) == records_to_csv(four.records)
    assert summary_to_json(one.summary) == summary_to_json(four.summary)


def test_zero_shift_theorem2_is_the_p_set():
    cfg = ExperimentConfig(m=3, s=2, mode="theorem2", zero_shifts=True, trials=2)
    res = run_experiment(cfg)
    assert res.records[0].grid_max == res.records[1].grid_max
    U = build_union(draw_recipe("theorem2", 3, 2, cfg.p, 0, zero_shifts=True))
    want = np.concatenate([korobov_numerators(q, cfg.p, 2) for q in range(8)])
    assert np.array_equal(U.points, want)


def test_csv_format():
    res = run_experiment(ExperimentConfig(m=2, s=2, trials=3, seed=2))
    text = records_to_csv(res.records)
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == CSV_COLUMNS
    assert len(rows) == 4
    assert [r[0] for r in rows[1:]] == ["0", "1", "2"]
    assert all(r[CSV_COLUMNS.index("satisfied")] in {"0", "1"} for r in rows[1:])
    for r in rows[1:]:
        assert float(r[CSV_COLUMNS.index("grid_max")]) == res.records[int(r[0])].grid_max


def test_summary_contents():
    res = run_experiment(ExperimentConfig(m=3, s=2, trials=30, seed=4))
    data = json.loads(summary_to_json(res.summary))
    assert data["N"] == 64 and data["trials"] == 30
    assert 0 <= data["success_fraction"] <= 1
    assert data["ratio_min"] <= data["ratio_median"] <= data["ratio_max"]
    assert data["invariant_violations"] == 0
    assert not res.violated
