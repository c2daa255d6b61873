import json

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from isoread.generators import gen_cycle_pair, gen_petersen
from isoread.harness import (
    FAMILIES,
    bench_er,
    block_sweep,
    cosine,
    family_pairs,
    gm_fixture,
    holm_bonferroni,
    master_seed,
    one_sided_ttest,
    run_pair,
    run_suite,
    suite_pairs,
    t_cdf,
)
from isoread.readout import ReadoutConfig


def test_holm_examples():
    assert holm_bonferroni([0.01, 0.04], 0.05) == [True, True]
    assert holm_bonferroni([0.5], 0.05) == [False]
    assert holm_bonferroni([], 0.05) == []
    assert holm_bonferroni([0.04, 0.01, 0.03], 0.05) == [False, True, False]
    with pytest.raises(ValueError):
        holm_bonferroni([0.1], 1.0)


@given(st.floats(-50, 50), st.integers(1, 40))
def test_t_cdf_matches_scipy(t, df):
    assert abs(t_cdf(t, df) - stats.t.cdf(t, df)) <= 1e-10


def test_ttest_matches_scipy():
    x = [0.2, 0.5, 0.1, 0.4]
    ref = stats.ttest_1samp(x, 1.0, alternative="less").pvalue
    assert abs(one_sided_ttest(x) - ref) <= 1e-12
    assert one_sided_ttest([0.3]) is None
    assert one_sided_ttest([1.0, 1.0]) == 1.0
    assert one_sided_ttest([0.0, 0.0]) == 0.0


def test_cosine_zero_rule():
    assert cosine([1, 0], [2, 0]) == (1.0, None)
    assert cosine([0, 0], [0, 0]) == (1.0, "both-zero")
    assert cosine([0, 0], [1, 0]) == (0.0, "one-zero")
    assert cosine([1e-12, 0], [1, 0], 5.0, 5.0) == (0.0, "one-zero")


def test_suite_layout():
    specs = suite_pairs()
    assert len(specs) == 33
    assert [sum(s.family == f for s in specs) for f in FAMILIES] == [24, 3, 3, 3]
    assert len({s.pair_id for s in specs}) == 33


def test_gm_fixture_matches_search():
    fx = gm_fixture()
    assert fx["partition"] is None
    with pytest.raises(LookupError):
        family_pairs("gm-petersen")[0].build()


def test_run_pair_cycles():
    g, h = gen_cycle_pair(3)
    base = run_pair(g, h, readout_kind="sum", master=1)
    assert base.mean_cosine >= 0.999999 and not base.separated
    iso = run_pair(g, h, readout_kind="isotypic", master=1)
    assert iso.mean_cosine <= 0.05 and iso.separated
    assert len(iso.cosines) == 5
    assert iso.bundle_seconds >= 0 and iso.total_seconds >= iso.bundle_seconds


@pytest.mark.parametrize("kind", ["sum", "mean", "max", "meanmax", "isotypic", "isotypic-linear"])
def test_identical_graphs(kind):
    g = gen_petersen()
    r = run_pair(g, g, readout_kind=kind, seeds=2, master=3)
    assert all(abs(c - 1.0) <= 1e-9 for c in r.cosines)


def test_run_pair_validation():
    g, h = gen_cycle_pair(3)
    with pytest.raises(ValueError):
        run_pair(g, h, threshold=0.0)
    with pytest.raises(ValueError):
        run_pair(g, h, seeds=0)
    with pytest.raises(ValueError):
        run_pair(g, h, readout_kind="nope")


def test_workers_do_not_change_results():
    g, h = gen_cycle_pair(5)
    a = run_pair(g, h, seeds=4, master=9)
    b = run_pair(g, h, seeds=4, master=9, workers=3)
    assert a.cosines == b.cosines
    s1 = run_suite(("cycles",), seeds=1, master=2)
    s2 = run_suite(("cycles",), seeds=1, master=2, workers=4)
    assert s1.to_json(timings=False) == s2.to_json(timings=False)
    assert s1.to_csv(timings=False) == s2.to_csv(timings=False)


def test_suite_report_aggregates():
    rep = run_suite(("cfi-k3", "gm-petersen"), seeds=1, master=0)
    agg = rep.aggregates()
    assert agg["cfi-k3"]["count"] == 3
    assert agg["gm-petersen"]["errors"] == 3
    assert agg["gm-petersen"]["mean_cosine"] is None
    for r in rep.rows:
        assert r.separated == (r.mean_cosine < r.threshold)
    data = json.loads(rep.to_json())
    assert len(data["pairs"]) == 6
    assert "bundle_seconds" not in json.loads(rep.to_json(timings=False))["pairs"][0]
    assert rep.to_csv().splitlines()[0].startswith("pair_id,family,mean_cosine")
    assert "total" in rep.table()


def test_block_sweep_small():
    counts = block_sweep((1, 8), families=("cycles",), master=0)
    assert counts[1] <= counts[8]
    with pytest.raises(ValueError):
        block_sweep((0,), families=("cycles",))


def test_bench_er_csv():
    rows, text = bench_er([8, 12], p=0.2, count=3, seed=1)
    assert len(rows) == 2
    lines = text.strip().splitlines()
    assert lines[0].startswith("n,count,capped,median_bundle")
    assert len(lines) == 3
    _, empty = bench_er([8, 12], count=0)
    assert empty.strip().splitlines() == [lines[0]]


def test_bench_er_empty_graphs_hit_cap():
    rows, _ = bench_er([10], p=0.0, count=2, readout_cfg=ReadoutConfig(cap_auts=1000))
    assert rows[0]["capped"] == 2
    assert rows[0]["median_total"] >= 0


def test_master_seed_env(monkeypatch):
    monkeypatch.setenv("ISOREAD_SEED", "42")
    assert master_seed() == 42
    monkeypatch.delenv("ISOREAD_SEED")
    assert master_seed(7) == 7
