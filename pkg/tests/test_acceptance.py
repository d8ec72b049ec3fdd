"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line."""
import cmath
import time

import numpy as np
import pytest

from conftest import beta_scheme, scheme_for
from twisted_ybe.cli import main
from twisted_ybe.coefficients import check_constraints, check_recursions, deformation, nonresonant_momenta
from twisted_ybe.momentum import Momentum, random_generic
from twisted_ybe.rmatrix import (
    RMatrixSpec,
    build_baxterized,
    build_constant_r,
    build_dynamical_r,
    build_yangian_base,
    build_yangian_r,
    gl_scheme,
    spectral_parameter,
)
from twisted_ybe.tensor_core import identity, permutation, residual
from twisted_ybe.verify import (
    PerturbedBuilder,
    check_additive_dybe,
    check_constant_ybe,
    check_dynamical_ybe,
    check_hecke,
    check_hermiticity,
    check_reflection,
    check_spectral_dybe,
    check_unitarity,
    hermiticity_domain,
)

QS = [2.0, 1.3, 0.6 + 0.3j]
NS = [2, 3, 4]
YZ = [(1.3, 0.7), (2, 0.5), (0.9 + 0.1j, 1.1)]
BETA_CHOICES = {
    2: [(2.0, 1.0), (1.0, -3.0), (0.5 + 0.5j, -1.0)],
    3: [(3.0, 2.0, 1.0), (1.0, -2.0, 0.5), (2.0 + 1.0j, -1.0, 0.3)],
    4: [(1.0, 2.5, -1.0, 4.0), (4.0, 3.0, 2.0, 1.0), (0.7, -1.3 + 0.4j, 2.2, -3.1)],
}
CRITERION3_Q = 2.0
MOMENTA = 20


def report_line(capsys, number, title, ok, worst, tol, elapsed, budget=None, extra=""):
    status = "PASS" if ok else "FAIL"
    timing = f"{elapsed:.2f}s" + (f" (budget {budget:g}s)" if budget else "")
    with capsys.disabled():
        print(f"\n[acceptance] {status} criterion {number}: {title}; worst relative {worst:.3e} "
              f"vs {tol:g}; {timing}{(' ' + extra) if extra else ''}")


def criterion3_schemes(N):
    q = CRITERION3_Q
    out = [scheme_for(N, q, gauge="unitary"), scheme_for(N, q, gauge="upper_triangular")]
    for k, beta in enumerate(BETA_CHOICES[N]):
        out.append(beta_scheme(N, q, beta, gauge=("unitary", "upper_triangular")[k % 2]))
    return out


def test_criterion_1_hecke(capsys):
    tol, budget = 1e-10, 1.0
    start = time.perf_counter()
    worst = 0.0
    for N in NS:
        for q in QS:
            lam = deformation(q)
            worst = max(worst, check_hecke(build_constant_r(N, q), lam, tol).residual.relative)
            specs = [
                RMatrixSpec("dynamical", N, scheme=scheme_for(N, q)),
                RMatrixSpec("dynamical", N, scheme=scheme_for(N, q, gauge="upper_triangular")),
                RMatrixSpec("dynamical", N, scheme=beta_scheme(N, q, BETA_CHOICES[N][0])),
                RMatrixSpec("dynamical_sl", N, scheme=scheme_for(N, q)),
            ]
            specs += [RMatrixSpec("dynamical_super_sl", N, scheme=scheme_for(N, q, K=K))
                      for K in range(1, N)]
            for spec in specs:
                for m, _ in nonresonant_momenta(spec.scheme, 3, 1):
                    r = check_hecke(spec(m), lam, tol, spec.factor)
                    worst = max(worst, r.residual.relative)
    elapsed = time.perf_counter() - start
    ok = worst < tol and elapsed < budget
    report_line(capsys, 1, "Hecke relation, constant and dynamical builders", ok, worst, tol, elapsed, budget)
    assert worst < tol
    assert elapsed < budget


def test_criterion_2_constant_ybe(capsys):
    tol, budget = 1e-10, 1.0
    start = time.perf_counter()
    worst = max(check_constant_ybe(build_constant_r(N, q), tol).residual.relative
                for N in NS for q in QS)
    elapsed = time.perf_counter() - start
    ok = worst < tol and elapsed < budget
    report_line(capsys, 2, "constant braid relation", ok, worst, tol, elapsed, budget)
    assert worst < tol
    assert elapsed < budget


def test_criterion_3_twisted_ybe(capsys):
    tol, budget = 1e-9, 10.0
    start = time.perf_counter()
    worst, count = 0.0, 0
    for N in NS:
        for s in criterion3_schemes(N):
            spec = RMatrixSpec("dynamical", N, scheme=s)
            momenta = nonresonant_momenta(s, MOMENTA, 2026)
            assert len(momenta) == MOMENTA
            for m, _ in momenta:
                worst = max(worst, check_dynamical_ybe(spec, m, tol).residual.relative)
                count += 1
    elapsed = time.perf_counter() - start
    ok = worst < tol and elapsed < budget
    report_line(capsys, 3, f"twisted Yang-Baxter equation ({count} scheme/momentum pairs)",
                ok, worst, tol, elapsed, budget)
    assert count == 3 * 5 * MOMENTA
    assert worst < tol
    assert elapsed < budget


def test_criterion_4_constraints(capsys):
    tol = 1e-10
    start = time.perf_counter()
    schemes = [s for N in NS for s in criterion3_schemes(N)]
    for N, K in [(2, 1), (3, 1), (4, 2)]:
        schemes += [scheme_for(N, CRITERION3_Q, K=K, gauge=g) for g in ("unitary", "upper_triangular")]
        schemes += [beta_scheme(N, CRITERION3_Q, beta, K=K) for beta in BETA_CHOICES[N]]
    worst = 0.0
    for s in schemes:
        for m, _ in nonresonant_momenta(s, MOMENTA, 2026):
            worst = max(worst, check_constraints(s, m, tol).residual.relative,
                        check_recursions(s, m, tol).residual.relative)
    elapsed = time.perf_counter() - start
    report_line(capsys, 4, f"constraint system and recursions ({len(schemes)} schemes)",
                worst < tol, worst, tol, elapsed)
    assert worst < tol


def test_criterion_5_supergroup(capsys):
    tol = 1e-10
    start = time.perf_counter()
    hecke_worst, ybe_worst = 0.0, 0.0
    for N, K in [(2, 1), (3, 1), (4, 2)]:
        s = scheme_for(N, CRITERION3_Q, K=K)
        spec = RMatrixSpec("dynamical_super_sl", N, scheme=s)
        for m, _ in nonresonant_momenta(s, MOMENTA, 2026):
            hecke_worst = max(hecke_worst, check_hecke(spec(m), s.lam, tol, spec.factor).residual.relative)
            ybe_worst = max(ybe_worst, check_dynamical_ybe(spec, m, 1e-9).residual.relative)
    elapsed = time.perf_counter() - start
    report_line(capsys, 5, "supergroup Hecke relation", hecke_worst < tol, hecke_worst, tol, elapsed,
                extra=f"[ungraded twisted YBE worst relative residual {ybe_worst:.3e}]")
    assert hecke_worst < tol
    # recorded outcome: the ungraded equation holds at roundoff
    assert ybe_worst < 1e-9


def test_criterion_6_spectral(capsys):
    tol, budget = 1e-9, 10.0
    start = time.perf_counter()
    worst = 0.0
    for N in NS:
        for s in criterion3_schemes(N):
            spec = RMatrixSpec("dynamical", N, scheme=s)
            for m, _ in nonresonant_momenta(s, MOMENTA, 2026):
                R = spec(m)
                for y, z in YZ:
                    worst = max(worst, check_spectral_dybe(spec, m, y, z, s.lam, tol).residual.relative,
                                check_unitarity(R, y, s.lam, tol).residual.relative)
        for m, _ in nonresonant_momenta(scheme_for(N, CRITERION3_Q), MOMENTA, 2026):
            for t1, t2 in [(0.4, -0.9), (0.7, 0.7)]:
                worst = max(worst, check_additive_dybe(m, t1, t2, tol=tol).residual.relative)
    elapsed = time.perf_counter() - start
    ok = worst < tol and elapsed < budget
    report_line(capsys, 6, "spectral, unitarity and additive equations", ok, worst, tol, elapsed, budget)
    assert worst < tol
    assert elapsed < budget


def test_criterion_7_limits(capsys):
    start = time.perf_counter()
    theta = 0.7
    p = (0.9, -0.2, -0.7)

    gamma, h = 1e-4, 0.1
    q = cmath.exp(gamma * h)
    s = gl_scheme(3, q, h)
    m = Momentum(p, h)
    y = spectral_parameter(theta, s.lam)
    lhs = build_baxterized(build_dynamical_r(s, m), y, s.lam) / s.lam
    quantum = residual(lhs, build_yangian_r(m, theta)).absolute

    gamma, h = 1.0, 1e-4
    q = cmath.exp(gamma * h)
    s = gl_scheme(3, q, h)
    m = Momentum(p, h)
    y = spectral_parameter(theta, s.lam)
    lhs = build_baxterized(build_dynamical_r(s, m), y, s.lam) / s.lam
    classical = residual(lhs, theta * permutation(3) - identity(3, 2)).absolute

    elapsed = time.perf_counter() - start
    ok = quantum < 10 * 1e-4 and classical < 10 * 1e-4
    with capsys.disabled():
        print(f"\n[acceptance] {'PASS' if ok else 'FAIL'} criterion 7: limits; "
              f"q->1 error {quantum:.3e} vs {10 * 1e-4:g}, h->0 error {classical:.3e} vs {10 * 1e-4:g}; "
              f"{elapsed:.2f}s")
    assert quantum < 10 * 1e-4
    assert classical < 10 * 1e-4


def hermitian_momenta(scheme, count, seed):
    out, k = [], 0
    while len(out) < count:
        m = random_generic(scheme.N, scheme.h, (seed, k), scale=1.0)
        k += 1
        if hermiticity_domain(scheme, m) is None:
            out.append(m)
    return out


def test_criterion_8_hermiticity(capsys):
    tol = 1e-10
    start = time.perf_counter()
    worst, count = 0.0, 0
    for N in (2, 3):
        for q in (1.5, 2.0):
            s = scheme_for(N, q, h=0.1)
            spec = RMatrixSpec("dynamical_sl", N, scheme=s)
            for m in hermitian_momenta(s, MOMENTA, 8):
                r = check_hermiticity(s, m, tol, spec)
                assert r.status != "skip"
                worst = max(worst, r.residual.relative)
                count += 1
    elapsed = time.perf_counter() - start
    report_line(capsys, 8, f"hermiticity ({count} points)", worst < tol, worst, tol, elapsed)
    assert worst < tol


def test_criterion_9_negative_controls_and_determinism(capsys, tmp_path):
    start = time.perf_counter()
    s = scheme_for(3, CRITERION3_Q)
    m = random_generic(3, 0.1, 0)
    spec = RMatrixSpec("dynamical", 3, scheme=s)
    bad = PerturbedBuilder(spec, 1, 1, 0.05)
    herm_s = scheme_for(2, 1.5, h=1.0)
    herm_spec = RMatrixSpec("dynamical_sl", 2, scheme=herm_s)
    herm_m = Momentum((1.15, -1.15), 1.0)
    controls = {
        "hecke": check_hecke(bad(m), s.lam),
        "constant_ybe": check_constant_ybe(build_constant_r(3, CRITERION3_Q).with_entry(1, 1, 0.05)),
        "dynamical_ybe": check_dynamical_ybe(bad, m),
        "reflection": check_reflection(bad, m),
        "unitarity": check_unitarity(bad(m), 1.3, s.lam),
        "additive_dybe": check_additive_dybe(
            m, 0.4, -0.9, base_builder=lambda mm: build_yangian_base(mm).with_entry(1, 1, 0.05)),
        "hermiticity": check_hermiticity(herm_s, herm_m, builder=PerturbedBuilder(herm_spec, 1, 2, 0.05)),
        "constraints": check_constraints(_ShiftedB(s), m),
        "recursions": check_recursions(s, m, b=lambda mm, i, j: s.b(mm, i, j) + (0.05 if (i, j) == (0, 1) else 0)),
    }
    for n, (y, z) in enumerate(YZ):
        controls[f"spectral_dybe[{n}]"] = check_spectral_dybe(bad, m, y, z, s.lam)
    smallest = min(r.residual.relative for r in controls.values())
    weakest = min(controls, key=lambda k: controls[k].residual.relative)

    argv = ["check", "--group", "glq", "--n", "3", "--q", "2.0", "--h", "0.1", "--seed", "42",
            "--gauge", "unitary", "--b0", "canonical", "--tol", "1e-9", "--count", "5", "--quiet"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    identical = a.read_bytes() == b.read_bytes()

    elapsed = time.perf_counter() - start
    ok = smallest > 1e-3 and identical
    with capsys.disabled():
        print(f"\n[acceptance] {'PASS' if ok else 'FAIL'} criterion 9: negative controls "
              f"({len(controls)} checks, smallest relative residual {smallest:.3e} at {weakest}, "
              f"needs > 1e-3); reports byte-identical: {identical}; {elapsed:.2f}s")
    assert smallest > 1e-3
    assert identical


class _ShiftedB:
    """Scheme view with b_01 moved by 0.05 (constraints read coefficients, not a matrix)."""

    def __init__(self, scheme):
        self._s = scheme
        self.lam, self.N = scheme.lam, scheme.N

    def b(self, m, i, j):
        return self._s.b(m, i, j) + (0.05 if (i, j) == (0, 1) else 0)

    def a(self, m, i, j):
        return self._s.a(m, i, j)

    def describe(self):
        return "perturbed(" + self._s.describe() + ")"


@pytest.mark.parametrize("N", NS)
def test_criterion_3_schemes_are_distinct(N):
    assert len({s.describe() for s in criterion3_schemes(N)}) == 5
    assert np.all([len(set(b)) == N for b in BETA_CHOICES[N]])
