"""Acceptance criteria 1-10; each test prints one PASS/FAIL line."""
import time

import numpy as np
import pytest

from qubitkraus import qops
from qubitkraus.analytic import analytic_kraus, diagonal_coefficients
from qubitkraus.dynamics import concurrence, esd_time, evolve_kraus, integrate_master_equation
from qubitkraus.errors import FormulaDomainError
from qubitkraus.generator import tabulated_generator, to_printed_order
from qubitkraus.kraus import (
    apply_map,
    choi_from_kraus,
    choi_from_map,
    closed_form_map,
    kraus_from_choi,
    map_matrix,
    reduce_single_qubit,
    verify_cptp,
)
from qubitkraus.model import ModelParams, damping_rates
from qubitkraus.verify import run_verification

from conftest import ACCEPTANCE_TIMES, BETAS


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:2d} [{'PASS' if ok else 'FAIL'}] {title}: {detail}")
        assert ok, detail

    return emit


def rates_for(beta):
    return damping_rates(ModelParams(beta=beta))


def test_01_map_matrix_closed_forms(report):
    start = time.perf_counter()
    worst = 0.0
    for beta in BETAS:
        r = rates_for(beta)
        L = tabulated_generator(r)
        for t in ACCEPTANCE_TIMES:
            worst = max(worst, np.abs(to_printed_order(map_matrix(L, t)) - closed_form_map(r, t)).max())
    elapsed = time.perf_counter() - start
    report(1, "map matrix closed forms", worst <= 1e-10 and elapsed < 1.0,
           f"max|dF|={worst:.2e} (<=1e-10), runtime {elapsed:.3f}s (<1s)")


def test_02_cptp_invariants(report):
    choi_min, compl, unit, herm = np.inf, 0.0, 0.0, 0.0
    for beta in BETAS:
        L = tabulated_generator(rates_for(beta))
        for t in ACCEPTANCE_TIMES:
            S = choi_from_map(map_matrix(L, t))
            choi_min = min(choi_min, np.linalg.eigvalsh(S).min())
            rep = verify_cptp(kraus_from_choi(S, time=t))
            compl = max(compl, rep.completeness)
            unit = max(unit, rep.unitality)
            herm = max(herm, rep.max_hermiticity)
    ok = choi_min >= -1e-9 and max(compl, unit, herm) <= 1e-9
    report(2, "CPTP invariants", ok,
           f"Choi min eig={choi_min:.2e}, completeness={compl:.2e}, unitality={unit:.2e}, hermiticity={herm:.2e}")


def test_03_anchor_values(report):
    rng = np.random.default_rng(2024)
    r = rates_for(50.0)
    ks0 = kraus_from_choi(choi_from_map(map_matrix(tabulated_generator(r), 0.0)), time=0.0)
    dist = max(qops.trace_distance(apply_map(ks0, rho), rho)
               for rho in (qops.random_density_matrix(rng) for _ in range(20)))
    co = diagonal_coefficients(r, 0.0)
    ak = analytic_kraus(r, 0.0)
    exact = (co.B == 8.0 and co.A == 0.0 and co.A_prime == 1 / 16
             and np.array_equal(ak.operators[7], -np.eye(4)) and not ak.operators[:7].any())
    report(3, "t=0 anchors", dist <= 1e-10 and exact,
           f"identity-channel trace distance={dist:.2e}; B={co.B}, A={co.A}, A'={co.A_prime}, "
           f"K8=-I and K1..K7=0: {exact}")


def test_04_oracle_equivalence(report):
    start = time.perf_counter()
    worst = 0.0
    for beta in BETAS:
        p = ModelParams(beta=beta)
        t_esd = esd_time(p, qops.bell_plus()).esd_time
        times = np.linspace(0.0, 3 * t_esd, 50)
        kraus = evolve_kraus(p, qops.bell_plus(), times, "interaction")
        oracle = integrate_master_equation(tabulated_generator(damping_rates(p)), qops.bell_plus(), times)
        worst = max(worst, max(qops.trace_distance(a, b) for a, b in zip(kraus.states, oracle.states)))
    elapsed = time.perf_counter() - start
    report(4, "Kraus vs RK4 oracle", worst <= 1e-6 and elapsed < 10.0,
           f"max trace distance={worst:.2e} (<=1e-6), runtime {elapsed:.2f}s (<10s)")


def test_05_semigroup(report):
    rng = np.random.default_rng(5)
    worst = 0.0
    for beta in BETAS:
        L = tabulated_generator(rates_for(beta))
        for t1, t2 in rng.uniform(0.0, 0.05, size=(20, 2)):
            worst = max(worst, np.abs(map_matrix(L, t1 + t2) - map_matrix(L, t1) @ map_matrix(L, t2)).max())
    report(5, "semigroup", worst <= 1e-10, f"max|F(t1+t2)-F(t1)F(t2)|={worst:.2e} (<=1e-10)")


def _block_sum(S, idx):
    """sum K K over the Kraus operators of the Choi sub-block ``idx``."""
    masked = np.zeros_like(S)
    masked[np.ix_(idx, idx)] = S[np.ix_(idx, idx)]
    ks = kraus_from_choi(masked)
    return np.einsum("kab,kbc->ac", ks.operators, ks.operators)


def test_06_asymptotic_sums(report):
    eye = np.eye(4)
    diag = [qops.basis_index(0, 0), qops.basis_index(0, 3)]  # span of K7, K8
    rest = [n for n in range(16) if n not in diag]  # span of K1..K6
    worst, assignments = 0.0, set()
    for beta in BETAS:
        r = rates_for(beta)
        t = 60.0 / (16 * min(r.gamma1, r.gamma2))
        S = choi_from_map(map_matrix(tabulated_generator(r), t))
        s16, s78 = _block_sum(S, rest), _block_sum(S, diag)
        printed = max(np.abs(s16 - eye / 4).max(), np.abs(s78 - 3 * eye / 4).max())
        swapped = max(np.abs(s16 - 3 * eye / 4).max(), np.abs(s78 - eye / 4).max())
        worst = max(worst, min(printed, swapped))
        assignments.add("printed" if printed < swapped else "swapped")
    (found,) = assignments
    flag = "agrees with" if found == "printed" else "DISAGREES with"
    which = ("sum K1..K6 -> I/4, sum K7,K8 -> 3I/4" if found == "printed"
             else "sum K1..K6 -> 3I/4, sum K7,K8 -> I/4")
    report(6, "asymptotic sums", worst <= 1e-8,
           f"unordered pair {{I/4, 3I/4}} to {worst:.2e} (<=1e-8); {which}; {flag} the printed assignment")


def test_07_sudden_death(report):
    start = time.perf_counter()
    results = [esd_time(ModelParams(beta=b), qops.bell_plus()) for b in BETAS]
    elapsed = time.perf_counter() - start
    found = all(r.found for r in results)
    widths = [(r.bracket[1] - r.bracket[0]) / r.bracket[1] for r in results] if found else [np.inf]
    times = [r.esd_time for r in results] if found else []
    increasing = found and all(a < b for a, b in zip(times, times[1:]))
    c0 = concurrence(evolve_kraus(ModelParams(), qops.bell_plus(), [0.0]).states[0])
    ok = found and max(widths) <= 1e-6 and increasing and abs(c0 - 1) <= 1e-12 and elapsed < 5.0
    report(7, "entanglement sudden death", ok,
           "esd(beta=0,50,100)=" + ", ".join(f"{t:.6g}" for t in times)
           + f"; max relative bracket {max(widths):.2e}; C(0)={c0:.15f}; runtime {elapsed:.2f}s (<5s)")


def test_08_analytic_vs_numeric(report):
    choi_corrected, weight_dev, printed_failures, samples = 0.0, 0.0, 0, 0
    for beta in BETAS:
        r = rates_for(beta)
        L = tabulated_generator(r)
        for t in ACCEPTANCE_TIMES:
            samples += 1
            nk = kraus_from_choi(choi_from_map(map_matrix(L, t)), time=t)
            try:
                analytic_kraus(r, t, "printed")
            except FormulaDomainError:
                printed_failures += 1
            ak = analytic_kraus(r, t, "corrected")
            choi_corrected = max(choi_corrected, np.abs(choi_from_kraus(ak) - choi_from_kraus(nk)).max())
            numeric = list(nk.weights)
            for w in ak.weights[:6]:
                k = int(np.argmin(np.abs(np.array(numeric) - w)))
                weight_dev = max(weight_dev, abs(numeric.pop(k) - w))
    text = run_verification(ModelParams(), times=ACCEPTANCE_TIMES[::4]).format()
    documented = "[WARN]" in text and "analytic (printed B) evaluable" in text and "exp(280 tau)" in text
    # the deviation is isolated to the B term iff replacing that single term restores agreement
    isolated = choi_corrected <= 1e-9
    ok = weight_dev <= 1e-8 and isolated and documented
    report(8, "analytic vs numeric channel", ok,
           f"K1-K6 weight dev={weight_dev:.2e} (<=1e-8); printed B out of domain at {printed_failures}/{samples} "
           f"grid points; Choi distance with only the exp(280 tau) term corrected={choi_corrected:.2e}; "
           f"documented in verify report: {documented}")


def test_09_reduction(report):
    rng = np.random.default_rng(9)
    worst, b_min = 0.0, np.inf
    for _ in range(20):
        beta = float(rng.choice(BETAS))
        t = float(rng.choice(ACCEPTANCE_TIMES))
        ks = kraus_from_choi(choi_from_map(map_matrix(tabulated_generator(rates_for(beta)), t)), time=t)
        rho1 = qops.random_density_matrix(rng, 2)
        rho2 = qops.random_density_matrix(rng, 2)
        red = reduce_single_qubit(ks, rho2, trace_out=2, drop=-1.0)
        b_min = min(b_min, red.weights.min())
        full = qops.partial_trace(apply_map(ks, np.kron(rho1, rho2)), 2)
        worst = max(worst, np.abs(apply_map(red, rho1) - full).max())
    report(9, "single-qubit reduction", worst <= 1e-9 and b_min >= -1e-9,
           f"max|reduced - partial trace|={worst:.2e} (<=1e-9); min b eigenvalue={b_min:.2e}")


def test_10_concurrence(report):
    rng = np.random.default_rng(10)
    bell = abs(concurrence(qops.bell_plus()) - 1)
    prod = max(concurrence(np.kron(qops.random_density_matrix(rng, 2), qops.random_density_matrix(rng, 2)))
               for _ in range(50))
    lu = 0.0
    for _ in range(50):
        rho = qops.random_density_matrix(rng)
        u = np.kron(qops.random_unitary(rng), qops.random_unitary(rng))
        lu = max(lu, abs(concurrence(u @ rho @ u.conj().T) - concurrence(rho)))
    values = [concurrence(qops.random_density_matrix(rng, rank=1 + k % 4)) for k in range(1000)]
    in_range = min(values) >= 0 and max(values) <= 1
    ok = bell <= 1e-12 and prod <= 1e-9 and lu <= 1e-9 and in_range
    report(10, "concurrence", ok,
           f"|C(Bell)-1|={bell:.1e}; max C(product)={prod:.1e}; local-unitary dev={lu:.1e}; "
           f"1000 random states in [{min(values):.3f}, {max(values):.3f}]")
