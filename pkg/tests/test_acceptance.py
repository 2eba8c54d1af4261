"""Acceptance gate: ten numbered criteria, one test per criterion.

Run with `pytest -v` so each criterion reports a single PASSED/FAILED
line. Expected values marked as oracle constants were computed with an
independent high-precision evaluation (mpmath/scipy) before this package
was built and are frozen here. Criteria that compare the exact counting
model against closed-form reference capacities fail where the exact
model genuinely falls short; those tests print a per-point table first
and then assert, so the failure is visible and attributable.
"""

import math
from dataclasses import replace

import pytest

import eabpsk as e
from eabpsk.detection import DetectionModel, Priors
from eabpsk.photostats import NegBinParams
from eabpsk.receivers import ChannelParams

P = e.DEFAULT_PARAMS  # n_s=0.01, n_b=1, eta=0.01, gain=1.1
EQ = e.EQUAL_PRIORS
UN = Priors.from_p0(0.45)

NB_IDLER = DetectionModel(e.NEGATIVE_BINOMIAL, e.OPA_IDLER)
NB_RETURN = DetectionModel(e.NEGATIVE_BINOMIAL, e.OPA_RETURN)
G_IDLER = DetectionModel(e.GAUSSIAN_APPROX, e.OPA_IDLER)
G_RETURN = DetectionModel(e.GAUSSIAN_APPROX, e.OPA_RETURN)
G_OPC = DetectionModel(e.GAUSSIAN_APPROX, e.OPC)
G_OH = DetectionModel(e.GAUSSIAN_APPROX, e.OH)


def log_grid(lo, hi, n):
    la, lb = math.log10(lo), math.log10(hi)
    return [10.0 ** (la + i * (lb - la) / (n - 1)) for i in range(n)]


def pe_at_optimum(priors, model, params):
    t = e.optimal_threshold(priors, model, params).threshold
    return e.error_probability(priors, t, model, params), t


def test_criterion_01_counting_distribution_normalization():
    """pmf sums to 1 within 1e-9 and the cdf matches brute-force summation
    within 1e-10 relative, for M in {1,10,100} x mean in {0.1,1,10}."""
    worst_norm, worst_cdf = 0.0, 0.0
    for m in (1, 10, 100):
        for nbar in (0.1, 1.0, 10.0):
            params = NegBinParams(m, nbar)
            total = m * nbar
            n_max = math.ceil(total + 20.0 * math.sqrt(total * (nbar + 1.0)) + 50.0)
            pmf = [e.nb_pmf(n, params) for n in range(n_max + 1)]
            norm_err = abs(math.fsum(pmf) - 1.0)
            worst_norm = max(worst_norm, norm_err)
            assert norm_err <= 1e-9, (m, nbar, norm_err)
            running = 0.0
            sigma = math.sqrt(total * (nbar + 1.0))
            probes = sorted({0, 1, int(total), min(n_max, int(total + 5 * sigma)), n_max})
            for n in range(n_max + 1):
                running += pmf[n]
                if n in probes:
                    rel = abs(e.nb_cdf(n, params) - running) / running
                    worst_cdf = max(worst_cdf, rel)
                    assert rel <= 1e-10, (m, nbar, n, rel)
    print(f"CRITERION 01: PASS (norm err {worst_norm:.2e}, cdf err {worst_cdf:.2e})")


def test_criterion_02_cdf_beta_cross_identity():
    """The summation path and the incomplete-beta path give the same
    dyadic-exact value 219/256 for cdf(5) at M=3, mean 1."""
    exact = 0.85546875
    by_sum = e.nb_cdf(5, NegBinParams(3, 1.0))
    by_beta = e.reg_inc_beta(0.5, 3.0, 6.0)
    assert abs(by_sum - exact) <= 1e-12
    assert abs(by_beta - exact) <= 1e-12
    print(f"CRITERION 02: PASS (sum {by_sum!r}, beta {by_beta!r})")


ORACLE_DERIVED = [
    # (label, oracle value, getter)
    ("amp return mean, theta=0", 1.207776333325,
     lambda: e.opa_mode_stats(P, e.RETURN_PORT, 0.0).mean),
    ("amp idler mean, theta=0", 0.217676333325,
     lambda: e.opa_mode_stats(P, e.IDLER_PORT, 0.0).mean),
    ("amp idler mean, theta=pi", 0.204343666675,
     lambda: e.opa_mode_stats(P, e.IDLER_PORT, math.pi).mean),
    ("conjugator mean, theta=0", 0.0200997512422418,
     lambda: e.opc_mode_stats(P, 0.0).mean),
    ("conjugator variance", 2.039496,
     lambda: e.opc_mode_stats(P, 0.0).std ** 2),
    ("hybrid variance", 1.0299,
     lambda: e.oh_mode_stats(P, e.BALANCED_BPSK, 0.0).std ** 2),
    ("thermal entropy g(0.01)", 0.080937407804588,
     lambda: e.g_thermal(0.01)),
    ("unassisted capacity", 9.99963934427241e-5,
     lambda: e.holevo_capacity(P)),
    ("homodyne capacity", 9.61732579845347e-5,
     lambda: e.homodyne_capacity(P)),
    ("assisted capacity bound", 3.84983992439645e-4,
     lambda: e.ultimate_capacity(P)),
]


def test_criterion_03_derived_values_at_defaults():
    """Ten derived quantities at the default operating point, each within
    1e-6 relative of the frozen oracle values."""
    worst = 0.0
    for label, oracle, getter in ORACLE_DERIVED:
        got = getter()
        rel = abs(got - oracle) / abs(oracle)
        worst = max(worst, rel)
        assert rel <= 1e-6, (label, got, oracle, rel)
    assert abs(e.ultimate_capacity(P) - 3.83e-4) / 3.83e-4 <= 0.02
    print(f"CRITERION 03: PASS (worst rel err {worst:.2e})")


def test_criterion_04_threshold_balance_identity():
    """|p0 F0(t) - p1 (1 - Fpi(t))| <= 1e-9 at the Gaussian balance root
    for every receiver, block size and prior pair; the equal-prior root
    agrees with the closed form within 1e-9."""
    worst_res, worst_gap = 0.0, 0.0
    for m in (1, 10, 100, 1000, 10000):
        params = replace(P, modes=m)
        for model in (G_RETURN, G_IDLER, G_OPC, G_OH):
            for pri in (EQ, UN):
                root = e.threshold_balance_root(pri, model, params)
                worst_res = max(worst_res, abs(root.residual))
                assert abs(root.residual) <= 1e-9, (model.receiver, m, pri.p0)
        for model in (G_RETURN, G_IDLER):
            s0, spi = e.receiver_mode_stats(model, params)
            closed = e.equal_prior_threshold_gaussian(s0, spi, m)
            root = e.threshold_balance_root(EQ, model, params).threshold
            gap = abs(root - closed) / max(1.0, abs(closed))
            worst_gap = max(worst_gap, gap)
            assert gap <= 1e-9, (model.receiver, m)
    print(f"CRITERION 04: PASS (max residual {worst_res:.2e}, max closed-form gap {worst_gap:.2e})")


def test_criterion_05_error_probability_orderings():
    """Equal-prior Gaussian PE: hybrid < conjugator < amplifier idler and
    return > idler on a log grid of block sizes; unequal-prior optimal
    threshold on the return port stays above the idler port. The hybrid
    improvement over the conjugator is logged against a soft 5-15% band."""
    ms = sorted({int(round(v)) for v in log_grid(10, 10000, 13)})
    improvements = []
    for m in ms:
        params = replace(P, modes=m)
        pe = {}
        for name, model in (("oh", G_OH), ("opc", G_OPC),
                            ("idler", G_IDLER), ("return", G_RETURN)):
            pe[name], _ = pe_at_optimum(EQ, model, params)
        assert pe["oh"] < pe["opc"] < pe["idler"], (m, pe)
        assert pe["return"] > pe["idler"], (m, pe)
        tr = e.optimal_threshold(UN, G_RETURN, params).threshold
        ti = e.optimal_threshold(UN, G_IDLER, params).threshold
        assert tr > ti, (m, tr, ti)
        improvements.append((m, (pe["opc"] - pe["oh"]) / pe["opc"]))
    in_band = [f"M={m}:{100 * v:.1f}%{'' if 0.05 <= v <= 0.15 else '*'}"
               for m, v in improvements]
    print("CRITERION 05: PASS (hybrid-vs-conjugator improvement, * = outside soft "
          "5-15% band: " + " ".join(in_band) + ")")


def test_criterion_06_single_block_capacity_vs_references():
    """Exact-counting amplifier capacity at M=1 against the closed-form
    reference capacities over nine signal strengths, plus the Gaussian
    receiver ordering at the default point.

    The exact counting model is known to fall below the unassisted
    references at the top of the signal range, where only the smoothed
    Gaussian model stays above them; the table shows every point."""
    rows = []
    for ns in log_grid(1e-3, 1e-1, 9):
        params = replace(P, n_s=ns)
        c = e.ea_capacity(NB_IDLER, params).capacity
        rows.append((ns, c, e.holevo_capacity(params),
                     e.homodyne_capacity(params), e.ultimate_capacity(params)))
    print("CRITERION 06 table:")
    print(f"  {'ns':>12s} {'c_nb':>12s} {'holevo':>12s} {'homodyne':>12s} {'ultimate':>12s} flags")
    for ns, c, hol, hom, ult in rows:
        flags = (">hol" if c > hol else "<HOL!") + " " + \
                (">hom" if c > hom else "<HOM!") + " " + \
                ("<ult" if c < ult else ">ULT!")
        print(f"  {ns:12.6g} {c:12.6g} {hol:12.6g} {hom:12.6g} {ult:12.6g} {flags}")
    c_opa = e.ea_capacity(G_IDLER, P).capacity
    c_oh = e.ea_capacity(G_OH, P).capacity
    c_opc = e.ea_capacity(G_OPC, P).capacity
    print(f"  M=1 Gaussian ordering: amplifier {c_opa:.6g} >= hybrid {c_oh:.6g} "
          f">= conjugator {c_opc:.6g}")
    assert c_opa >= c_oh >= c_opc
    assert all(c < ult for ns, c, hol, hom, ult in rows), "exceeds the assisted bound"
    bad_hol = [ns for ns, c, hol, hom, ult in rows if not c > hol]
    bad_hom = [ns for ns, c, hol, hom, ult in rows if not c > hom]
    assert not bad_hol, f"counting capacity at or below unassisted capacity at ns={bad_hol}"
    assert not bad_hom, f"counting capacity at or below homodyne capacity at ns={bad_hom}"
    print("CRITERION 06: PASS")


def test_criterion_07_optimal_prior_stays_near_half():
    """best_p0 within 0.5 +/- 0.02 for every receiver and model at the
    default point, for single blocks and ten-mode blocks."""
    worst = 0.0
    for m in (1, 10):
        params = replace(P, modes=m)
        for model in (NB_RETURN, NB_IDLER, G_RETURN, G_IDLER, G_OPC, G_OH):
            r = e.ea_capacity(model, params)
            worst = max(worst, abs(r.best_p0 - 0.5))
            assert abs(r.best_p0 - 0.5) <= 0.02, (model.receiver, model.kind, m, r.best_p0)
    print(f"CRITERION 07: PASS (max |best_p0 - 0.5| = {worst:.4f})")


def test_criterion_08_gaussian_model_overestimates_capacity():
    """Gaussian-minus-counting capacity gap on the idler port: nonnegative
    up to optimizer noise and at most 5e-3 at M=10; the M=100 gap is
    compared pointwise against the M=10 gap.

    The pointwise M=100 comparison fails mid-range: the Gaussian model's
    overestimate does not shrink uniformly with block size there. The
    table prints both gaps per point before the asserts."""
    ns_grid = log_grid(1e-3, 1.0, 7)
    rows10 = e.gaussian_vs_nb_capacity_error(replace(P, modes=10), ns_grid)
    rows100 = e.gaussian_vs_nb_capacity_error(replace(P, modes=100), ns_grid)
    print("CRITERION 08 table:")
    print(f"  {'ns':>12s} {'delta_M10':>12s} {'delta_M100':>12s} shrinks")
    for r10, r100 in zip(rows10, rows100):
        ok = r100["delta"] <= r10["delta"] + 1e-5
        print(f"  {r10['ns']:12.6g} {r10['delta']:12.6g} {r100['delta']:12.6g} "
              f"{'yes' if ok else 'NO!'}")
    for r in rows10:
        assert r["delta"] >= -1e-5, (r["ns"], r["delta"])
    assert max(r["delta"] for r in rows10) <= 5e-3
    growing = [r10["ns"] for r10, r100 in zip(rows10, rows100)
               if r100["delta"] > r10["delta"] + 1e-5]
    assert not growing, f"M=100 gap exceeds M=10 gap at ns={growing}"
    print("CRITERION 08: PASS")


def test_criterion_09_skewed_priors_help_small_blocks():
    """Per-mode rate ratio (0.45, 0.55) over (0.5, 0.5): at least 2 for
    blocks up to ten modes on the amplifier idler and conjugator
    receivers, and within [0.9, 1.1] at ten thousand modes."""
    logged = {}
    for name, model in (("amplifier", NB_IDLER), ("conjugator", G_OPC), ("hybrid", G_OH)):
        ratios = []
        for m in list(range(1, 11)) + [10000]:
            params = replace(P, modes=m)
            pe_u, _ = pe_at_optimum(UN, model, params)
            pe_e, _ = pe_at_optimum(EQ, model, params)
            ratios.append(e.information_rate(pe_u, m) / e.information_rate(pe_e, m))
        logged[name] = ratios
        if name in ("amplifier", "conjugator"):
            assert all(r >= 2.0 for r in ratios[:10]), (name, ratios[:10])
            assert 0.9 <= ratios[10] <= 1.1, (name, ratios[10])
    summary = "; ".join(
        f"{name} M1={r[0]:.1f} M10={r[9]:.2f} M1e4={r[10]:.3f}"
        for name, r in logged.items())
    print(f"CRITERION 09: PASS ({summary})")


def test_criterion_10_mode_budget():
    """A 35 nm band at 1550 nm over one microsecond supports 4.3704e6
    modes on a 4.3704 THz bandwidth, within 1e-3 relative."""
    bw, m = e.mode_count(1550e-9, 35e-9, 1e-6)
    assert abs(bw - 4.3704e12) / 4.3704e12 <= 1e-3
    assert abs(m - 4.3704e6) / 4.3704e6 <= 1e-3
    print(f"CRITERION 10: PASS (bandwidth {bw:.6g} Hz, modes {m:.6g})")
