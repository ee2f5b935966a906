"""End-to-end acceptance checks for the library's headline behaviors.

Each test prints exactly one [PASS]/[FAIL] line with a short detail so the
whole gate can be read off a single run.  Tolerances and scales are part of
the checked contract; failures are meant to be loud and reproducible.
"""

import math
import time
from pathlib import Path

import numpy as np

from entrobound import (
    DensityMatrix,
    SolverOptions,
    WeightTriple,
    basis_measurement,
    build_overlap,
    c_lower_bound,
    compare_state_independent,
    deficits_from_entropies,
    entanglement_witness_analytic,
    entanglement_witness_general,
    feasible_weight_grid,
    from_unitary,
    gibbs_gap,
    gibbs_state,
    haar_random_unitary,
    hessian_spectrum_at_ones,
    identity_overlap,
    measurement_distribution,
    measurement_from_unitary,
    mub_overlap,
    norm,
    norm_mub,
    norm_numeric,
    optimal_weights,
    partial_trace,
    random_density_matrix,
    randomness_bound_analytic,
    randomness_bound_numeric,
    rotated_measurement_2d,
    rotation_overlap_2d,
    run_compare_random,
    run_conjecture_fuzz,
    run_werner_masks,
    shannon_entropy,
    tensor_measurement,
    von_neumann_entropy,
    write_table,
)

R8 = SolverOptions(restarts=8)


def _report(ok: bool, label: str, detail: str = "") -> bool:
    tag = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[{tag}] {label}{suffix}")
    return ok


def _entropy_rows(p: np.ndarray) -> np.ndarray:
    """Shannon entropy (base 2) of each row of a matrix of distributions."""
    p = np.clip(p.real, 0.0, None)
    p = p / p.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0.0, p * np.log2(p), 0.0)
    return -terms.sum(axis=1)


def test_closed_form_matches_numeric_solver():
    """Contracting exponents: solver agrees with d**(1/s - 1/r) at 1e-8."""
    start = time.perf_counter()
    rng = np.random.default_rng(20260823)
    worst = 0.0
    for d in range(2, 7):
        pairs = []
        for _ in range(10):
            r = 1.0 + 3.0 * float(rng.uniform())
            s = 1.0 + (r - 1.0) * float(rng.uniform())
            pairs.append((r, s))
        for _ in range(100):
            c = from_unitary(haar_random_unitary(d, rng))
            for r, s in pairs:
                res = norm_numeric(c, r=r, s=s, opts=R8)
                worst = max(worst, abs(res.value - norm_mub(d, r=r, s=s)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 60.0
    assert _report(ok, "numeric norm matches the closed form whenever s <= r",
                   f"worst |diff| {worst:.3e}, {elapsed:.1f}s")


def test_extreme_exponents_give_largest_entry():
    """r = 1, s = inf reduces to the largest matrix entry, bitwise."""
    rng = np.random.default_rng(2)
    mats = [mub_overlap(d) for d in range(2, 7)]
    mats += [identity_overlap(d) for d in range(2, 7)]
    mats += [rotation_overlap_2d(t) for t in np.linspace(0.05, math.pi / 4, 9)]
    for d in range(2, 7):
        mats += [from_unitary(haar_random_unitary(d, rng)) for _ in range(3)]
    exact = sum(norm_numeric(c, r=1.0, s=math.inf).value == c.max_entry for c in mats)
    ok = exact == len(mats)
    assert _report(ok, "the (1, inf) norm equals the largest entry exactly",
                   f"{exact}/{len(mats)} matrices bitwise equal")


def test_norm_profile_departs_at_critical_weight():
    """Equal weights: constant-matrix value up to mu*, strict excess after."""
    start = time.perf_counter()
    c = rotation_overlap_2d(math.pi / 6)
    mus = np.linspace(0.5, 1.0, 200)
    max_equal_dev = 0.0
    min_excess_beyond = np.inf
    end_ok = True
    for mu in mus:
        w = WeightTriple(1.0, float(mu), float(mu))
        log_norm = norm(c, w, opts=R8).log_value
        dev = log_norm - (1.0 - 2.0 * float(mu))  # constant-matrix line
        if mu <= 2.0 / 3.0 + 1e-12:
            max_equal_dev = max(max_equal_dev, abs(dev))
        if mu >= 0.7:
            min_excess_beyond = min(min_excess_beyond, dev)
        if mu == 1.0:
            end_ok = abs(log_norm - math.log2(0.75)) <= 1e-9
    elapsed = time.perf_counter() - start
    ok = (max_equal_dev <= 1e-7 and min_excess_beyond > 1e-7
          and end_ok and elapsed < 60.0)
    assert _report(ok, "equal-weight profile leaves the constant line at mu = 2/3",
                   f"equal dev {max_equal_dev:.2e}, excess beyond {min_excess_beyond:.2e}, "
                   f"{elapsed:.1f}s")


def test_uncertainty_bound_holds_on_state_sweep():
    """1000 random states x 10 pairs x 25 weight triples per dimension."""
    start = time.perf_counter()
    rng = np.random.default_rng(4)
    worst = np.inf
    for d in (2, 3):
        g = rng.standard_normal((1000, d, d)) + 1j * rng.standard_normal((1000, d, d))
        mats = g @ np.conj(np.transpose(g, (0, 2, 1)))
        mats /= np.trace(mats, axis1=1, axis2=2).real[:, None, None]
        ev = np.clip(np.linalg.eigvalsh(mats), 0.0, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            s_rho = -np.where(ev > 0.0, ev * np.log2(ev), 0.0).sum(axis=1)
        triples = [
            WeightTriple(a, a * float(rng.uniform()), a * float(rng.uniform()))
            for a in rng.uniform(0.2, 1.0, size=25)
        ]
        for _ in range(10):
            x = measurement_from_unitary(haar_random_unitary(d, rng))
            y = measurement_from_unitary(haar_random_unitary(d, rng))
            c = build_overlap(x, y)
            h_x = _entropy_rows(np.einsum("nij,kji->nk", mats, x.projectors))
            h_y = _entropy_rows(np.einsum("nij,kji->nk", mats, y.projectors))
            for w in triples:
                c_val = c_lower_bound(c, w, opts=R8)
                gaps = w.lam * h_x + w.mu * h_y - w.alpha * s_rho - c_val
                worst = min(worst, float(gaps.min()))
    elapsed = time.perf_counter() - start
    ok = worst >= -1e-8 and elapsed < 300.0
    assert _report(ok, "weighted bound holds across random states, pairs, weights",
                   f"min gap {worst:+.3e}, {elapsed:.1f}s")


def test_curvature_sign_tracks_region_condition():
    """Stability of the uniform vector flips exactly with the region test."""
    rng = np.random.default_rng(5)
    axis = np.linspace(0.0, 1.0, 20)
    mismatches = 0
    checked = 0
    for i in range(50):
        c = from_unitary(haar_random_unitary(2 + (i % 4), rng))
        s2 = c.sigma2
        for mu in axis:
            for lam in axis:
                cond = (1.0 - mu) * (1.0 - lam) - mu * lam * s2**2
                if abs(cond) <= 1e-9:
                    continue
                checked += 1
                stable = hessian_spectrum_at_ones(c, float(mu), float(lam)).min() > 0.0
                if stable != (cond > 0.0):
                    mismatches += 1
    ok = mismatches == 0 and checked > 0
    assert _report(ok, "uniform-vector curvature sign matches the region condition",
                   f"{mismatches} mismatches in {checked} checks")


def test_qubit_constant_dominates_overlap_bounds():
    """d = 2: never behind either overlap bound; ties only at the edges."""
    rng = np.random.default_rng(6)
    ahead = 0
    for _ in range(1000):
        row = compare_state_independent(from_unitary(haar_random_unitary(2, rng)),
                                        opts=R8)
        ahead += int(row.ours >= max(row.bccrr, row.rpz2) - 1e-12)
    thetas = np.linspace(0.0, math.pi / 4, 101)
    tie_indices = []
    for i, theta in enumerate(thetas):
        row = compare_state_independent(rotation_overlap_2d(float(theta)), opts=R8)
        if abs(row.ours - max(row.bccrr, row.rpz2)) <= 1e-9:
            tie_indices.append(i)
    ok = ahead == 1000 and tie_indices == [0, 100]
    assert _report(ok, "qubit constant dominates both overlap bounds, ties only at edges",
                   f"{ahead}/1000 ahead, ties at sweep indices {tie_indices}")


def test_win_rate_dips_then_recovers_with_dimension():
    """Random matrices: certain win at d=2, dip at 3-4, recovery by 12."""
    start = time.perf_counter()
    table = run_compare_random(dims=(2, 3, 4, 8, 12), samples=1000, seed=1234)
    pct = table.stats["pct"]
    elapsed = time.perf_counter() - start
    ok = (pct[2] == 100.0 and pct[3] < 100.0 and pct[4] < 100.0 and pct[12] > pct[4])
    detail = ", ".join(f"d={d}: {pct[d]:.1f}%" for d in (2, 3, 4, 8, 12))
    assert _report(ok, "win rate is certain at d=2, dips at 3-4, recovers by 12",
                   f"{detail}, {elapsed:.1f}s")


def test_randomness_bounds_agree_on_feasible_region():
    """Numeric weight search reproduces the closed-form optimum at 1e-6."""
    rng = np.random.default_rng(8)
    c = rotation_overlap_2d(math.pi / 6)
    sigma2 = 0.5
    cached = [
        (mu, lam, norm(c, WeightTriple(1.0, lam, mu), opts=R8).log_value)
        for mu, lam in feasible_weight_grid(sigma2, 21)
    ]
    worst = 0.0
    for _ in range(100):
        h_y = float(rng.uniform(0.0, 1.0))
        h_x = float(rng.uniform(h_y, 1.0))
        dd = deficits_from_entropies(h_x, h_y, 2)
        analytic = randomness_bound_analytic(dd, sigma2).value
        mu_o, lam_o = optimal_weights(dd.gamma, sigma2)
        log_o = norm(c, WeightTriple(1.0, lam_o, mu_o), opts=R8).log_value
        numeric = max(
            max((1.0 - lam) * h_x - mu * h_y - lg for mu, lam, lg in cached),
            (1.0 - lam_o) * h_x - mu_o * h_y - log_o,
        )
        worst = max(worst, abs(numeric - analytic))
    # Unbiased pair: both routes give the deficit of H(Y), bitwise.
    h_y = float(rng.uniform(0.0, 1.0))
    h_x = float(rng.uniform(h_y, 1.0))
    exact_numeric = randomness_bound_numeric(h_x, h_y, mub_overlap(2), [(1.0, 1.0)])
    exact_analytic = randomness_bound_analytic(
        deficits_from_entropies(h_x, h_y, 2), 0.0).value
    ok = worst <= 1e-6 and exact_numeric == exact_analytic
    assert _report(ok, "numeric and closed-form randomness bounds agree on the region",
                   f"worst |diff| {worst:.3e}, unbiased case bitwise "
                   f"{'equal' if exact_numeric == exact_analytic else 'UNEQUAL'}")


def _random_separable_qubit_pair(rng):
    n = int(rng.integers(1, 9))
    weights = rng.dirichlet(np.ones(n))
    m = np.zeros((4, 4), dtype=complex)
    for wgt in weights:
        ka = haar_random_unitary(2, rng)[:, 0]
        kb = haar_random_unitary(2, rng)[:, 0]
        k = np.kron(ka, kb)
        m += wgt * np.outer(k, k.conj())
    return DensityMatrix(m)


def test_witness_specificity_and_sensitivity():
    """No separable false positives in 1000 draws; the singlet is caught."""
    rng = np.random.default_rng(9)
    x = tensor_measurement(basis_measurement(2), basis_measurement(2))
    false_flags = 0
    for _ in range(1000):
        rho = _random_separable_qubit_pair(rng)
        ta, tb = rng.uniform(0.05, math.pi / 4, size=2)
        y = tensor_measurement(rotated_measurement_2d(ta), rotated_measurement_2d(tb))
        h_x = shannon_entropy(measurement_distribution(rho, x))
        h_y = shannon_entropy(measurement_distribution(rho, y))
        s_max = max(
            von_neumann_entropy(partial_trace(rho, (2, 2), 0)),
            von_neumann_entropy(partial_trace(rho, (2, 2), 1)),
        )
        sigma2 = max(math.cos(2.0 * ta), math.cos(2.0 * tb))
        dd = deficits_from_entropies(h_x, h_y, 4)
        mu, lam = optimal_weights(dd.gamma, sigma2)
        if entanglement_witness_analytic(h_x, h_y, 4, sigma2, s_max):
            false_flags += 1
        elif entanglement_witness_general(h_x, h_y, rotation_overlap_2d(ta),
                                          rotation_overlap_2d(tb), s_max,
                                          mu, lam, opts=R8):
            false_flags += 1
    bell = np.zeros(4)
    bell[0] = bell[3] = 1.0 / math.sqrt(2.0)
    rho = DensityMatrix(np.outer(bell, bell))
    y = tensor_measurement(rotated_measurement_2d(math.pi / 4),
                           rotated_measurement_2d(math.pi / 4))
    h_x = shannon_entropy(measurement_distribution(rho, x))
    h_y = shannon_entropy(measurement_distribution(rho, y))
    s_max = max(
        von_neumann_entropy(partial_trace(rho, (2, 2), 0)),
        von_neumann_entropy(partial_trace(rho, (2, 2), 1)),
    )
    caught_general = entanglement_witness_general(
        h_x, h_y, mub_overlap(2), mub_overlap(2), s_max, 1.0, 1.0)
    caught_analytic = bool(entanglement_witness_analytic(h_x, h_y, 4, 0.0, s_max))
    ok = false_flags == 0 and caught_general and caught_analytic
    assert _report(ok, "witness never flags separable states and flags the singlet",
                   f"{false_flags}/1000 false positives, singlet caught: "
                   f"general={caught_general}, analytic={caught_analytic}")


def test_werner_masks_nest_and_cover_corner():
    """Detection masks shrink with phi, all keeping the unbiased corner."""
    start = time.perf_counter()
    table = run_werner_masks(phis=(-1.0, -0.5, -0.1), grid=50)
    detected = {phi: set() for phi in (-1.0, -0.5, -0.1)}
    theta_zero_clean = True
    for ta, tb, phi, flag in table.rows:
        if flag:
            detected[phi].add((ta, tb))
            if ta == 0.0 or tb == 0.0:
                theta_zero_clean = False
    nested = detected[-0.1] <= detected[-0.5] <= detected[-1.0]
    corner = table.stats["corner"]
    corner_all = corner[-1.0] and corner[-0.5] and corner[-0.1]
    elapsed = time.perf_counter() - start
    ok = nested and corner_all and theta_zero_clean and elapsed < 60.0
    assert _report(ok, "Werner masks nest and keep the unbiased corner at every phi",
                   f"sizes {len(detected[-1.0])}/{len(detected[-0.5])}/{len(detected[-0.1])}, "
                   f"corner flags {corner[-1.0]}/{corner[-0.5]}/{corner[-0.1]}, "
                   f"{elapsed:.1f}s")


def test_thermal_gap_nonnegative_and_tight():
    """Free-energy gap stays nonnegative; zero exactly at the Gibbs state."""
    rng = np.random.default_rng(11)
    worst = np.inf
    for d in (2, 3, 4):
        for _ in range(1000):
            rho = random_density_matrix(d, rng)
            g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            lind = (g + g.conj().T) / 2.0
            worst = min(worst, gibbs_gap(rho, lind))
    thermal_dev = 0.0
    for d in (2, 3, 4):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        lind = (g + g.conj().T) / 2.0
        thermal_dev = max(thermal_dev, abs(gibbs_gap(gibbs_state(lind), lind)))
    ok = worst >= -1e-9 and thermal_dev <= 1e-9
    assert _report(ok, "thermal gap is nonnegative and vanishes at equilibrium",
                   f"min gap {worst:+.3e}, gap at Gibbs state {thermal_dev:.3e}")


def test_equality_regime_census_is_clean():
    """Full fuzz census of the extended equality regime at d = 2, 3, 4."""
    table = run_conjecture_fuzz(dims=(2, 3, 4), samples=1000, grid=11, seed=0)
    violations = table.stats["violations"]
    if violations:
        artifacts = Path(__file__).parent / "artifacts"
        artifacts.mkdir(exist_ok=True)
        out = artifacts / "equality_regime_counterexamples.csv"
        with open(out, "w", encoding="utf-8", newline="") as f:
            write_table(table, f)
        detail = (f"{violations} counterexamples, max excess "
                  f"{table.stats['max_excess']:.3e}, full-precision rows in {out}")
    else:
        detail = "no excess above 1e-7 anywhere in the census"
    assert _report(violations == 0,
                   "equality regime census finds no counterexamples", detail)
