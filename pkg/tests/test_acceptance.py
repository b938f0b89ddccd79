"""Acceptance criteria, one test per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line each.
"""
import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from sobolev_kernels import (
    KernelMode,
    SobolevIndex,
    diagonal_1d,
    diagonal_nd,
    eval_kernel,
    kernel_nd,
    kernel_special_s_n_plus_3,
    series_1d,
)
from sobolev_kernels.cli import main
from sobolev_kernels.kernels import radial_moment_gamma
from sobolev_kernels.oracle import (
    fourier_quadrature_1d,
    kernel_oracle_nd,
    mollifier_delta_check,
    radial_moment_quadrature,
)
from sobolev_kernels.rkhs import build_gram, check_spd, fit_interpolant, native_norm_sq, residual
from sobolev_kernels.specfun import bessel_k_half, factorial
from sobolev_kernels.verify import run_verification

from conftest import sample_points

RATIO_R = (0.2, 0.5, 1.0, 2.0, 4.0)


def report(number, ok, detail):
    print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    assert ok, detail


def rel(a, b):
    return abs(a - b) / abs(b)


def test_criterion_1_closed_form_1d(spec):
    t0 = time.perf_counter()
    worst = 0.0
    for s in range(1, 9):
        k = series_1d(s)
        for r in (0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0):
            worst = max(worst, rel(eval_kernel(k, r), fourier_quadrature_1d(s, r, spec).value))
    exact = max(
        max(rel(eval_kernel(series_1d(1), r), math.exp(-r) / 2),
            rel(eval_kernel(series_1d(2), r), math.exp(-r) * (1 + r) / 4))
        for r in (0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0))
    elapsed = time.perf_counter() - t0
    report(1, worst <= 1e-9 and exact <= 1e-15 and elapsed <= 10,
           f"max rel err {worst:.2e} vs oracle, {exact:.1e} vs exact s=1,2, {elapsed:.2f}s")


def test_criterion_2_diagonal(spec):
    worst = 0.0
    for s in range(1, 9):
        d = diagonal_1d(s)
        assert d == pytest.approx(math.comb(2 * s - 2, s - 1) * 2.0 ** (1 - 2 * s), rel=1e-15)
        worst = max(worst, rel(d, eval_kernel(series_1d(s), 0.0)),
                    rel(d, fourier_quadrature_1d(s, 0.0, spec).value))
    spots = (diagonal_1d(1), diagonal_1d(2), diagonal_1d(3)) == (0.5, 0.25, 3 / 16)
    report(2, worst <= 1e-10 and spots, f"max rel err {worst:.2e}, spot values exact: {spots}")


def test_criterion_3_bessel_route():
    worst = 0.0
    for s in range(1, 7):
        for r in (0.25, 1.0, 3.0):
            via_k = (r ** (s - 0.5) * bessel_k_half(s - 1, r)
                     / (math.sqrt(2 * math.pi) * 2 ** (s - 1) * factorial(s - 1)))
            worst = max(worst, rel(via_k, eval_kernel(series_1d(s), r)))
    report(3, worst <= 1e-10, f"max rel err {worst:.2e}")


def test_criterion_4_radial_moments(spec):
    worst, count = 0.0, 0
    for n in range(2, 10):
        for s in range(1, 13):
            if 2 * s > n - 1:
                idx = SobolevIndex(s, n)
                worst = max(worst, rel(radial_moment_gamma(idx), radial_moment_quadrature(idx, spec).value))
                count += 1
    anchors = {(2, 3): 0.5, (3, 3): 0.25, (4, 5): 1 / 12, (2, 2): math.pi / 4}
    anchor_err = max(rel(radial_moment_gamma(SobolevIndex(s, n)), v) for (s, n), v in anchors.items())
    report(4, worst <= 1e-10 and anchor_err <= 1e-15,
           f"{count} (s, n) pairs, max rel err {worst:.2e}, anchors {anchor_err:.1e}")


def test_criterion_5_ratio_constancy(spec):
    lines, ok = [], True
    for n in (3, 5, 7):
        idx = SobolevIndex(n + 3, n)
        oracle = [kernel_oracle_nd(idx, r, spec).value for r in RATIO_R]
        printed = [eval_kernel(kernel_nd(idx, KernelMode.PAPER_ODD), r) / o for r, o in zip(RATIO_R, oracle)]
        corrected = [eval_kernel(kernel_nd(idx), r) / o for r, o in zip(RATIO_R, oracle)]
        spread = max(printed) / min(printed) - 1
        unity = max(abs(c - 1) for c in corrected)
        ok &= spread <= 1e-7 and unity <= 1e-8
        lines.append(f"n={n}: printed constant {np.mean(printed):.10g} (spread {spread:.1e}), "
                     f"corrected |c-1| {unity:.1e}")
    anchor = rel(diagonal_nd(SobolevIndex(3, 3)), 1 / (32 * math.pi))
    ok &= anchor <= 1e-9
    report(5, ok, "; ".join(lines) + f"; diagonal(3,3) vs 1/(32 pi) {anchor:.1e}")


def test_criterion_6_special_shape(spec):
    worst, ok = 0.0, True
    for n in (2, 3, 4, 5):
        k = kernel_special_s_n_plus_3(n)
        # e^{-r}(1 + r) shape: A = 2 with equal rational coefficients
        ok &= k.A == 2 and k.coefficients[0] == k.coefficients[1] == Fraction(1)
        w = (n + 3) / 2
        o0 = kernel_oracle_nd(k.idx, 0.0, spec, exponent=w).value
        for r in RATIO_R:
            shape = eval_kernel(k, r) / eval_kernel(k, 0.0)
            worst = max(worst, rel(shape, math.exp(-r) * (1 + r)),
                        rel(shape, kernel_oracle_nd(k.idx, r, spec, exponent=w).value / o0))
    disc = run_verification(("special",), spec=spec)["paper_discrepancies"]
    names = [c["case"] for c in disc]
    listed = (any(x.startswith("C_n n=3") for x in names) and any(x.startswith("C_n n=5") for x in names)
              and any(x.startswith("C_(s,n) n=2") for x in names)
              and any(x.startswith("C_(s,n) n=4") for x in names))
    detail = ", ".join(f"{c['case'].split(' vs')[0]}: printed/oracle {c['ratio']:.6g}" for c in disc)
    report(6, ok and worst <= 1e-7 and listed, f"shape max rel err {worst:.2e}; {detail}")


def test_criterion_7_mollifier(spec):
    t0 = time.perf_counter()
    ok, lines = True, []
    for s, n in ((2, 1), (3, 3)):
        chk = mollifier_delta_check(SobolevIndex(s, n), KernelMode.CORRECTED, (1.0, 0.1, 0.01), spec)
        dec = all(b < a for a, b in zip(chk.errors, chk.errors[1:]))
        last = chk.relative_errors[-1]
        ok &= dec and last < 0.01
        lines.append(f"(s={s}, n={n}) relative errors "
                     + ", ".join(f"{e:.2e}" for e in chk.relative_errors))
    elapsed = time.perf_counter() - t0
    report(7, ok and elapsed <= 30, "; ".join(lines) + f"; {elapsed:.2f}s")


def test_criterion_8_rkhs_properties(rng):
    worst_res, worst_norm, failures = 0.0, 0.0, 0
    for _ in range(100):
        m = int(rng.integers(2, 51))
        n = int(rng.integers(1, 4))
        idx = SobolevIndex(n + 3, n)
        pts = sample_points(rng, m, n, 1e-3)
        system = build_gram(pts, idx, KernelMode.CORRECTED)
        if not check_spd(system):
            failures += 1
            continue
        # smooth target: values of a function in the native space
        y = np.sin(pts.sum(axis=1)) * np.exp(-0.05 * (pts ** 2).sum(axis=1))
        c = fit_interpolant(system, y)
        worst_res = max(worst_res, float(np.max(np.abs(residual(system, c, y)))),
                        float(np.max(np.abs(system.gram @ c - y))))
        for i in range(m):
            e = np.zeros(m)
            e[i] = 1.0
            worst_norm = max(worst_norm, abs(native_norm_sq(system, e) - system.kernel(0.0)))
    report(8, failures == 0 and worst_res <= 1e-8 and worst_norm == 0.0,
           f"SPD failures {failures}/100, max residual {worst_res:.2e}, norm identity error {worst_norm}")


def test_criterion_9_discrepancies_do_not_gate(capsys):
    code = main(["verify"])
    out = json.loads(capsys.readouterr().out)
    names = [c["case"] for c in out["paper_discrepancies"]]
    odd_high = any(x.startswith("paper-odd") and int(x.split("n=")[1].split()[0]) >= 5 for x in names)
    even_chain = any(x.startswith("paper-even") for x in names)
    report(9, code == 0 and out["summary"]["failed"] == 0 and odd_high and even_chain,
           f"exit {code}, {out['summary']['cases']} gating cases pass, "
           f"{len(names)} paper discrepancies reported")
