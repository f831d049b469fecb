# SPDX-License-Identifier: Apache-2.0
"""Smoke tests for the Python bindings (stdlib only)."""

import math
import os
import sys
import tempfile

import hashbeam as hb


def approx(a, b, tol=1e-12):
    return abs(a - b) <= tol


def test_array_ops():
    cfg = hb.ArrayConfig(8)
    v = hb.steering_vector(cfg, 0.3)
    assert len(v) == 8
    assert approx(abs(hb.inner_product(v, v)), 1.0)
    f = hb.dft_beam(cfg, 4)
    assert approx(sum(abs(x) ** 2 for x in f), 1.0)

    ch = hb.Channel([hb.ChannelPath(1.0 + 0j, cfg.grid_angle(3))])
    h = hb.synthesize_channel(cfg, ch)
    assert approx(hb.beam_rsrp(h, hb.dft_beam(cfg, 3)), 1.0)
    bs = hb.beamspace_channel(cfg, ch)
    assert hb.best_beam(bs) == 3


def test_codebooks():
    cb = hb.gen_proposed_random(16, 8, 4, seed=7)
    assert (cb.rows, cb.cols, cb.l_per_row) == (8, 16, 4)
    assert cb.provenance == "proposed_random"
    assert cb.seed == 7
    st = hb.stats(cb)
    assert st.column_counts == [2] * 16
    for row in range(cb.rows):
        assert len(cb.row_members(row)) == 4

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "cb.hcb")
        hb.save(cb, path)
        back = hb.load(path)
        assert back == cb

    try:
        hb.gen_proposed_random(8, 6, 2, seed=1)
    except ValueError as e:
        assert "divisible" in str(e)
    else:
        raise AssertionError("divisibility violation not raised")


def test_training():
    cfg = hb.ArrayConfig(16)
    sweep = hb.gen_sweeping(16)
    acc = hb.run_campaign(sweep, hb.on_grid_los_sampler(cfg), sigma2=0.0, trials=2000, seed=3)
    assert acc == 1.0

    cb = hb.gen_proposed_random(16, 8, 4, seed=5)
    sampler = hb.on_grid_los_sampler_fixed(cfg, 9)
    a = hb.run_campaign(cb, sampler, sigma2=1e-3, trials=4000, seed=11, threads=2)
    b = hb.run_campaign(cb, sampler, sigma2=1e-3, trials=4000, seed=11, threads=1)
    assert a == b  # bit-stable across thread counts

    h = hb.synthesize_channel(cfg, hb.Channel([hb.ChannelPath(1.0 + 0j, cfg.grid_angle(9))]))
    y = hb.measure(cb, h, sigma2=0.0, seed=1)
    out = hb.vote_and_select(cb, y)
    assert out.selected == 9
    assert len(out.votes) == 16


def test_analysis():
    p = hb.p_tilde_proposed(128, 64, 8, hb.sigma2_from_snr_db(10.0, 128))
    assert 0.5 <= p <= 1.0
    report = hb.optimize_l(128, 64, hb.sigma2_from_snr_db(10.0, 128), family="proposed")
    assert report.l_values == [2, 4, 8, 16, 32, 64, 128]
    assert report.l_star == 8

    cb = hb.gen_proposed_random(16, 8, 4, seed=5)
    prob = hb.success_probability(cb, n_star=9, sigma2=0.01, method="noise_mc",
                                  trials=20000, seed=13)
    assert 0.0 <= prob <= 1.0

    pmf = hb.binomial_pmf(16, 0.25)
    assert approx(sum(pmf), 1.0, tol=1e-10)


def test_harness():
    cfg = hb.fig2_preset()
    cfg.n_antennas = 16
    cfg.m_trainings = 8
    cfg.l_values = [2, 4]
    cfg.trials = 300
    table = hb.run_experiment(cfg)
    csv = hb.csv_string(table)
    lines = csv.strip().split("\n")
    assert lines[0] == "experiment,family,L,snr_db,metric,value,stderr,trials,seed"
    assert len(lines) == 1 + 12
    assert csv == hb.csv_string(hb.run_experiment(cfg))  # deterministic
    meta = hb.metadata_string(cfg)
    assert "master_seed: 1" in meta


def main():
    tests = [test_array_ops, test_codebooks, test_training, test_analysis, test_harness]
    for test in tests:
        test()
        print(f"{test.__name__}: ok")
    print(f"python smoke: {len(tests)} checks passed (hashbeam {hb.__version__})")


if __name__ == "__main__":
    sys.exit(main())
