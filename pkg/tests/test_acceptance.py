"""Acceptance criteria 1-12, one test each, at their stated tolerances."""

import itertools
import math
import time

import numpy as np

from qnet import elements as el
from qnet.algorithms import grover, qft, shor
from qnet.compiler import (
    exchange_reconstruct,
    gate_controlled,
    gate_toffoli,
    pauli_decompose,
    pauli_expand,
)
from qnet.network import (
    compose_product,
    compose_sum,
    evaluate,
    interior,
    materialize_network,
    q_of,
    run_on_vector,
)
from qnet.registers import RegisterLayout, make_augmented
from qnet.report import emit_report
from qnet import schrodinger as sch


def crand(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def maxerr(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def test_c01_element_algebra(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    for d in (2, 4, 8, 16):
        J = el.materialize_element(el.Jointer(), d)
        C = el.materialize_element(el.Connector(), d)
        worst = max(worst, np.abs(J @ J).max(), maxerr(C @ J + J @ C, np.eye(2 * d)))
        # Every pair of rotator/transitor factors I + M C_dag commutes.
        idx = range(d) if d <= 4 else (0, 1, d // 2, d - 1)
        mats = [el.materialize_element(el.Rotator(m, 0.3 - 0.7j), d) for m in idx]
        mats += [el.materialize_element(el.Transitor(m, n, 1.1 + 0.2j), d)
                 for m, n in itertools.permutations(idx, 2)]
        for A, B in itertools.combinations(mats, 2):
            worst = max(worst, maxerr(A @ B, B @ A))
    dt = time.perf_counter() - t0
    ok = criterion(1, worst <= 1e-14 and dt < 1.0, f"max err {worst:.1e}, {dt:.2f}s")
    assert ok


def test_c02_universal_action(rng, criterion):
    t0 = time.perf_counter()
    e1 = e0 = 0.0
    for _ in range(200):
        d = int(rng.integers(1, 17))
        U, psi = crand(rng, d, d), crand(rng, d)
        layout = RegisterLayout((d,))
        out = evaluate(q_of(U), make_augmented(psi, layout))
        e1 = max(e1, maxerr(out.branch(1), U @ psi))
        e0 = max(e0, maxerr(out.branch(0), psi))
    dt = time.perf_counter() - t0
    ok = criterion(2, max(e1, e0) <= 1e-11 and dt < 5.0,
                   f"branch1 err {e1:.1e}, branch0 err {e0:.1e}, {dt:.2f}s")
    assert ok


def test_c03_sum_law(rng, criterion):
    worst = 0.0
    for _ in range(100):
        d = int(rng.integers(1, 17))
        A, B = crand(rng, d, d), crand(rng, d, d)
        worst = max(worst, maxerr(materialize_network(compose_sum([q_of(A), q_of(B)])),
                                  materialize_network(q_of(A + B))))
    assert criterion(3, worst <= 1e-12, f"max err {worst:.1e}")


def test_c04_product_law(rng, criterion):
    e_act = e_nil = 0.0
    for r in range(1, 7):
        for _ in range(5):
            d = int(rng.integers(1, 17))
            Us = [crand(rng, d, d) / math.sqrt(2 * d) for _ in range(r)]
            psi = crand(rng, d)
            net = compose_product([q_of(U) for U in Us])
            want = psi
            for U in reversed(Us):
                want = U @ want
            e_act = max(e_act, maxerr(run_on_vector(net, psi), want))
            M = materialize_network(interior(net))
            e_nil = max(e_nil, np.linalg.norm(M @ M, 2))
    ok = criterion(4, e_act <= 1e-11 and e_nil <= 1e-12,
                   f"action err {e_act:.1e}, ||Q~^2|| {e_nil:.1e}")
    assert ok


def test_c05_exchange_and_pauli(rng, criterion):
    cnot = np.eye(4)[[0, 1, 3, 2]]
    swap = np.eye(4)[[0, 2, 1, 3]]
    exact = np.array_equal(el.exchange_gate(2, 3, 4), cnot) and np.array_equal(el.exchange_gate(1, 2, 4), swap)
    rec = 0.0
    for _ in range(100):
        d = int(rng.integers(1, 17))
        U = crand(rng, d, d)
        rec = max(rec, maxerr(exchange_reconstruct(U), U))
    pauli_exact = True
    for k in (1, 2, 3):
        for m, n in itertools.product(range(2**k), repeat=2):
            target = np.zeros((2**k, 2**k))
            target[m, n] = 1
            pauli_exact &= np.array_equal(pauli_expand(pauli_decompose(m, n, k)), target)
    ok = criterion(5, exact and rec <= 1e-12 and pauli_exact,
                   f"E(2,3)=CNOT & E(1,2)=SWAP {exact}, reconstruction err {rec:.1e}, Pauli exact {pauli_exact}")
    assert ok


def test_c06_gate_library(rng, criterion):
    perm = np.eye(8)[[0, 1, 2, 3, 4, 5, 7, 6]]
    net = gate_toffoli()
    toff = np.stack([run_on_vector(net, col) for col in np.eye(8)], axis=1)
    tof_exact = np.array_equal(toff, perm)
    worst = 0.0
    for i in range(50):
        d = 2 if i % 2 == 0 else 4
        U, _ = np.linalg.qr(crand(rng, d, d))
        ref = np.kron(np.diag([1, 0]), np.eye(d)) + np.kron(np.diag([0, 1]), U)
        worst = max(worst, maxerr(materialize_network(gate_controlled(U))[2 * d:, :2 * d], ref))
    ok = criterion(6, tof_exact and worst <= 1e-12, f"Toffoli exact {tof_exact}, controlled-U err {worst:.1e}")
    assert ok


def test_c07_qft(rng, criterion):
    act = 0.0
    for k in (1, 2, 3, 4):
        F, net = qft.qft_matrix(k), qft.qft_network(k)
        for _ in range(50):
            psi = crand(rng, 2**k)
            act = max(act, maxerr(run_on_vector(net, psi), F @ psi))
    uni = max(maxerr(qft.qft_matrix(k) @ qft.qft_matrix(k).conj().T, np.eye(2**k)) for k in range(1, 9))
    ok = criterion(7, act <= 1e-11 and uni <= 1e-12, f"action err {act:.1e}, unitarity err {uni:.1e}")
    assert ok


def test_c08_grover(criterion):
    t0 = time.perf_counter()
    k2 = [grover.grover_run(2, j, 1).success_probability for j in range(4)]
    k2_exact = all(p == 1.0 for p in k2)
    worst = 0.0
    for k in range(3, 7):
        theta = math.asin(2 ** (-k / 2))
        for j in (0, 2**k - 1, 2 ** (k - 1) + 1):
            T = 2 * grover.auto_iterations(k)
            rep = grover.grover_run(k, j, T)
            ref = [math.sin((2 * t + 1) * theta) ** 2 for t in range(T + 1)]
            worst = max(worst, maxerr(rep.per_iteration_probs, ref))
    dt = time.perf_counter() - t0
    ok = criterion(8, k2_exact and worst <= 1e-8 and dt < 10.0,
                   f"k=2 probabilities {k2}, trajectory err {worst:.1e}, {dt:.2f}s")
    assert ok


def test_c09_shor(criterion):
    t0 = time.perf_counter()
    r7 = shor.shor_run(15, 7, 8, mode="distribution")
    support = [y for y, _ in r7.peak_distribution]
    perr = max(abs(p - 0.25) for _, p in r7.peak_distribution)
    r11 = shor.shor_run(15, 11, 8, mode="distribution")
    a = emit_report(shor.shor_run(15, 7, 8, mode="sample", seed=11))
    b = emit_report(shor.shor_run(15, 7, 8, mode="sample", seed=11))
    dt = time.perf_counter() - t0
    ok = (support == [0, 64, 128, 192] and perr <= 1e-10 and r7.period_r == 4
          and set(r7.factors) == {3, 5} and r11.period_r == 2 and set(r11.factors) == {3, 5}
          and a == b and dt < 30.0)
    criterion(9, ok, f"support {support}, |p-1/4| {perr:.1e}, r(7)={r7.period_r} {r7.factors}, "
                     f"r(11)={r11.period_r} {r11.factors}, reproducible {a == b}, {dt:.2f}s")
    assert ok


def test_c10_schrodinger(criterion):
    t0 = time.perf_counter()
    kin = 0.0
    for N in (2, 4, 8, 16, 32, 64):
        for mu in (0.5, 1.0, 3.0):
            g = sch.Grid(N, 7.5)
            p = sch.momentum_op(g)
            kin = max(kin, maxerr(sch.kinetic_op(g, mu), p @ p / (2 * mu)))
    g = sch.Grid(64, 10.0)
    spec = sch.EvolutionSpec(1.0, 0.01, 0.1, sch.Potential("harmonic", (1.0,)))
    out = sch.compare_exact(g, spec, sch.gaussian_packet(g, 5.0, 1.0))
    ratios = [row["ratio"] for row in out["convergence"][1:]]
    growth = out["norm_growth_residual"]
    dt = time.perf_counter() - t0
    ok = (kin <= 1e-12 and all(1.7 <= r <= 2.3 for r in ratios) and growth <= 1e-12 and dt < 60.0)
    criterion(10, ok, f"kinetic err {kin:.1e}, ratios {[round(r, 4) for r in ratios]}, "
                      f"norm growth residual {growth:.1e}, {dt:.2f}s")
    assert ok


def _numbers(obj):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _numbers(obj[k])
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            yield from _numbers(v)
    elif isinstance(obj, (int, float)) and not isinstance(obj, bool):
        yield float(obj)
    else:
        yield obj


def _same(a, b, tol):
    import json
    xs = list(_numbers(json.loads(emit_report(a))["report"]))
    ys = list(_numbers(json.loads(emit_report(b))["report"]))
    if len(xs) != len(ys):
        return math.inf
    worst = 0.0
    for x, y in zip(xs, ys):
        if isinstance(x, float) and isinstance(y, float):
            worst = max(worst, abs(x - y))
        elif x != y:
            return math.inf
    return worst


def test_c11_heterotic_embedding(criterion):
    worst = 0.0
    swaps = [(), ("qft",), ("hprep",), ("qft", "hprep")]
    for ext in swaps[1:]:
        for k, j in ((3, 5), (4, 0)):
            worst = max(worst, _same(grover.grover_run(k, j, 3), grover.grover_run(k, j, 3, external=ext), 1e-10))
        for a in (7, 11):
            worst = max(worst, _same(shor.shor_run(15, a, 8, mode="distribution"),
                                     shor.shor_run(15, a, 8, mode="distribution", external=ext), 1e-10))
        worst = max(worst, _same(shor.shor_run(15, 7, 8, seed=4),
                                 shor.shor_run(15, 7, 8, seed=4, external=ext), 1e-10))
    assert criterion(11, worst <= 1e-10, f"max report-value change {worst:.1e}")


def test_c12_operation_count(rng, criterion):
    dim = 2**10
    U = crand(rng, dim, dim)
    counter = el.OpCounter()
    psi = crand(rng, dim)
    out = evaluate(q_of(U), make_augmented(psi, RegisterLayout((dim,))), counter)
    bound = 4 * dim**2 + 16 * dim
    correct = maxerr(out.branch(1), U @ psi) <= 1e-9
    ok = counter.count <= bound and correct
    criterion(12, ok, f"ops {counter.count} <= bound {bound}, action correct {correct}")
    assert ok
