"""Acceptance criteria, one recorded PASS/FAIL line each, at the stated tolerances."""
import time

import numpy as np

from fgverify import inversion as inv
from fgverify.catalog import instance_names, build_instance, verify_grid, telescoping_residual
from fgverify.cli import cmd_suite, render_json
from fgverify.laurent import (UnivariateSeries, construct_orthogonal_to,
                              construct_self_orthogonal, cross_implies_self, cross_orth_scan,
                              eval_series, nonzero_pivots, pivot_scan, self_orth_scan,
                              theta_pair_series)
from fgverify.pairs import builtin_pairs, broken_pair, check_pair, default_sampler
from fgverify.qseries import jacobi_triple_residual, theta
from fgverify.registry import RunConfig, get_target, run_target
from fgverify.sampling import Sampler

SCHLOSSER = (0.31, 0.17, 0.23, 0.4)


def _run(name, **kw):
    cfg = RunConfig(seed=0, adversarial=True, **kw)
    return run_target(get_target(name, True), cfg)


def test_orthogonality_suite(acceptance):
    t0 = time.perf_counter()
    worst = {}
    for p in builtin_pairs():
        r = check_pair(p, default_sampler(p, seed=0), 1000, 1e-9)
        worst[p.name] = (r.status, r.max_rel_residual)
    dt = time.perf_counter() - t0
    ok = all(s == "pass" for s, _ in worst.values()) and dt < 5
    top = max(v for _, v in worst.values())
    assert acceptance.record("1 orthogonality: 7 pairs x 1000 samples", ok,
                             f"worst rel {top:.1e}, {dt:.2f}s")


def test_inversion_suite(acceptance):
    t0 = time.perf_counter()
    reports = [_run(f"inverse_{p.name}") for p in builtin_pairs()]
    dt = time.perf_counter() - t0
    ok = all(r.status == "pass" for r in reports) and dt < 10
    top = max(r.max_rel_residual for r in reports)
    assert acceptance.record("2 inversion: FG = GF = I, 12x12, 10 draws per pair", ok,
                             f"worst rel {top:.1e}, {dt:.2f}s")


def test_summation_suite(acceptance):
    t0 = time.perf_counter()
    names = instance_names()
    bad = []
    for name in names:
        r = verify_grid(build_instance(name), 1e-9, 6, 4)
        # every instance carries a display form, so it must have been compared somewhere
        if r.status != "pass" or r.detail["display_checks"] == 0:
            bad.append(name)
    dt = time.perf_counter() - t0
    ok = not bad and len(names) == 17 and dt < 30
    assert acceptance.record("3 summation: every instance, m <= 6, n <= 4, with display form",
                             ok, f"{len(names)} instances, failures {bad}, {dt:.2f}s")


def test_telescoping(acceptance):
    worst = 0.0
    for name in instance_names():
        inst = build_instance(name)
        for m in range(1, 7):
            worst = max(worst, telescoping_residual(inst.at(m, inst.n), m))
    assert acceptance.record("4 telescoping: isolated k = m summand, m = 1..6",
                             worst <= 1e-12, f"worst rel {worst:.1e}")


def _rand(rng, M):
    return UnivariateSeries(M, rng.normal(size=2 * M + 1) + 1j * rng.normal(size=2 * M + 1))


def test_characterisation(acceptance):
    rng = np.random.default_rng(0)
    M = 6
    ok, worst = True, 0.0
    for _ in range(3):
        g = construct_self_orthogonal(_rand(rng, M), _rand(rng, M))
        r, scale, count = self_orth_scan(g)
        ok &= count == 13 ** 4 and r <= 1e-12 * scale
        worst = max(worst, r / scale)
        for p in nonzero_pivots(g)[:3]:
            f = construct_orthogonal_to(g, _rand(rng, M), _rand(rng, M), p)
            r, scale, _ = cross_orth_scan(g, f)
            ok &= r <= 1e-12 * scale
            worst = max(worst, r / scale)
            implied, npiv, w = cross_implies_self(g, f)
            ok &= implied and npiv > 0
            r, scale = pivot_scan(g, p)
            ok &= r <= 1e-12 * max(scale, 1.0)
    assert acceptance.record("5 characterisation: exhaustive scans, window 6", bool(ok),
                             f"worst scaled {worst:.1e}")


def test_theta_identities(acceptance):
    s = Sampler(0)
    jt = 0.0
    for _ in range(100):
        q = s.base(0.05, 0.5)
        jt = max(jt, jacobi_triple_residual(s.scalar(0.5, 2.0), q))
    q = 0.3
    series = theta_pair_series(q, 12)
    rng = np.random.default_rng(1)
    pw = 0.0
    for _ in range(50):
        x = rng.uniform(0.5, 1.5) * np.exp(2j * np.pi * rng.uniform())
        y = rng.uniform(0.5, 1.5) * np.exp(2j * np.pi * rng.uniform())
        exact = y * theta(x * y, q) * theta(x / y, q)
        pw = max(pw, abs(eval_series(series, x, y) - exact) / max(1.0, abs(exact)))
    assert acceptance.record("6a Jacobi triple product, 100 samples", jt <= 1e-10, f"{jt:.1e}")
    assert acceptance.record("6b theta series pointwise, window 12", pw <= 1e-8, f"{pw:.1e}")


def test_bilateral_biorthogonality(acceptance):
    info = inv.schlosser_biorthogonality(*SCHLOSSER, 3, 25)
    r = info["max_residual"]
    assert acceptance.record("7a Schlosser biorthogonality |n|,|m| <= 3, K = 25",
                             r <= 1e-6, f"{r:.1e}")


def test_bilateral_decay_gate(acceptance):
    # the K = 25 truncation is required to satisfy the 1e-10 edge-term gate
    info = inv.schlosser_biorthogonality(*SCHLOSSER, 3, 25)
    g = info["gate_abs"]
    assert acceptance.record("7b decay gate at K = 25 (edge terms <= 1e-10)", g <= 1e-10,
                             f"edge {g:.1e}")


def test_bilateral_h_displayed_closed_form(acceptance):
    r = _run("schlosser_h")
    assert acceptance.record("7c bilateral h(M) against the displayed closed form",
                             r.max_rel_residual <= 1e-6, f"rel {r.max_rel_residual:.1e}")


def test_bilateral_h_derived_closed_form(acceptance):
    r = _run("schlosser_h_corrected")
    assert acceptance.record("7c' bilateral h(M) against the closed form derived from the sum",
                             r.max_rel_residual <= 1e-6, f"rel {r.max_rel_residual:.1e}")


def test_transformation(acceptance):
    t0 = time.perf_counter()
    r = _run("transformation_521")
    dt = time.perf_counter() - t0
    assert acceptance.record("7d three-term theta transformation, 50 samples",
                             r.max_rel_residual <= 1e-9 and dt < 30,
                             f"rel {r.max_rel_residual:.1e}")


def test_negative_controls(acceptance):
    bp = broken_pair()
    orth = check_pair(bp, default_sampler(bp, seed=0), 1000, 1e-9)
    invr = _run("inverse_BROKEN")
    summ = _run("sum_BROKEN")
    off = invr.detail.get("max_offdiag_rel", invr.max_rel_residual)
    ok = orth.status == "fail" and invr.status == "fail" and off >= 1e-3 and summ.status == "fail"
    assert acceptance.record("8 negative controls: broken pair fails all three", ok,
                             f"orth {orth.max_rel_residual:.1e}, offdiag {off:.1e}, "
                             f"sum {summ.max_rel_residual:.1e}")


def _residual_fields(reports):
    return [(r.name, r.status, r.max_abs_residual, r.max_rel_residual, r.samples_run)
            for r in reports]


def test_determinism(acceptance):
    cfg = RunConfig(seed=42, samples=200)
    a, b = cmd_suite(cfg), cmd_suite(cfg)
    same = _residual_fields(a) == _residual_fields(b)
    strip = lambda rs: [dict(r.to_dict(), elapsed_ms=0) for r in rs]
    same &= strip(a) == strip(b)
    assert acceptance.record("9 determinism: suite twice with seed 42", same,
                             f"{len(a)} reports")
