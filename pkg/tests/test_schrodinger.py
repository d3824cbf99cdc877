import json

import numpy as np
import pytest
import scipy.linalg

from qnet import schrodinger as sch
from qnet.exceptions import CapacityError, RejectedInputError
from qnet.network import run_on_vector


def crand(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


HARMONIC = sch.Potential("harmonic", (1.0,))


@pytest.mark.parametrize("N", [4, 8, 16, 64])
def test_operators_hermitian_and_kinetic_identity(N):
    g = sch.Grid(N, 10.0)
    p, T = sch.momentum_op(g), sch.kinetic_op(g, 2.0)
    assert np.abs(p - p.conj().T).max() <= 1e-14
    assert np.abs(T - T.conj().T).max() <= 1e-14
    assert np.abs(T - p @ p / 4.0).max() <= 1e-12


def test_momentum_periodic_corners():
    g = sch.Grid(8, 4.0)
    p = sch.momentum_op(g)
    c = 0.5 * 8 / 4.0
    assert p[0, 1] == -1j * c and p[0, 7] == 1j * c
    assert p[7, 0] == -1j * c and p[7, 6] == 1j * c


def test_kinetic_spectrum_on_plane_waves():
    N, L, mu = 16, 5.0, 1.5
    g = sch.Grid(N, L)
    T = sch.kinetic_op(g, mu)
    for q in range(N):
        e = np.exp(2j * np.pi * q * np.arange(N) / N)
        E = (N / L) ** 2 * np.sin(2 * np.pi * q / N) ** 2 / (2 * mu)
        assert np.allclose(T @ e, E * e, atol=1e-12)


def test_potential_forms():
    g = sch.Grid(8, 8.0)
    assert not sch.Potential("zero").values(g).any()
    assert np.all(sch.Potential("const", (2.0,)).values(g) == 2.0)
    v = HARMONIC.values(g, mass=2.0)
    assert v[4] == 0 and v[0] == pytest.approx(16.0)
    w = sch.Potential("well", (3.0, 3.0)).values(g)
    assert list(w) == [0, 0, 0, -3, -3, -3, 0, 0]
    with pytest.raises(RejectedInputError):
        sch.potential_op(g, [np.inf] * 8)
    with pytest.raises(RejectedInputError):
        sch.Potential("table", (1.0,)).values(g)


def test_parse_potential(tmp_path):
    assert sch.parse_potential("harmonic:2") == sch.Potential("harmonic", (2.0,))
    assert sch.parse_potential("well:1,2") == sch.Potential("well", (1.0, 2.0))
    f = tmp_path / "v.json"
    f.write_text(json.dumps([0, 1, 2, 3]))
    assert sch.parse_potential(f"file:{f}").params == (0, 1, 2, 3)
    for bad in ("harmonic:x", "lol", "well:1"):
        with pytest.raises(RejectedInputError):
            sch.parse_potential(bad)


def test_grid_and_spec_validation():
    with pytest.raises(RejectedInputError):
        sch.Grid(6, 1.0)
    with pytest.raises(RejectedInputError):
        sch.Grid(8, -1.0)
    with pytest.raises(RejectedInputError):
        sch.EvolutionSpec(1.0, 0.2, 0.1)
    with pytest.raises(RejectedInputError):
        sch.EvolutionSpec(0.0, 0.01, 0.1)
    assert sch.EvolutionSpec(1.0, 0.03, 0.1).steps == 3


def test_step_dt_zero_is_identity(rng):
    g = sch.Grid(8, 10.0)
    psi = crand(rng, 8)
    net = sch.euler_step_network(g, sch.EvolutionSpec(1.0, 0.0, 1.0, HARMONIC))
    assert np.allclose(run_on_vector(net, psi), psi, atol=1e-15)


def test_step_network_matches_dense(rng):
    g = sch.Grid(8, 10.0)
    spec = sch.EvolutionSpec(1.0, 0.05, 1.0, HARMONIC)
    H = sch.hamiltonian(g, spec)
    psi = crand(rng, 8)
    out = run_on_vector(sch.euler_step_network(g, spec), psi)
    assert np.abs(out - (psi - 1j * 0.05 * H @ psi)).max() <= 1e-12
    # ||(1 - i dt H) psi||^2 = ||psi||^2 + dt^2 ||H psi||^2
    assert np.linalg.norm(out) ** 2 == pytest.approx(
        np.linalg.norm(psi) ** 2 + 0.05**2 * np.linalg.norm(H @ psi) ** 2, rel=1e-12)


@pytest.mark.parametrize("N,steps", [(8, 1), (8, 2), (16, 17), (64, 100)])
def test_evolution_matches_euler_power(rng, N, steps):
    g = sch.Grid(N, 10.0)
    spec = sch.EvolutionSpec(1.0, 0.001, 0.001 * steps, HARMONIC)
    assert spec.steps == steps
    step = np.eye(N) - 1j * spec.dt * sch.hamiltonian(g, spec)
    for _ in range(3):
        psi = crand(rng, N)
        assert np.allclose(run_on_vector(sch.evolve_network(g, spec), psi),
                           np.linalg.matrix_power(step, steps) @ psi, atol=1e-10, rtol=0)


def test_free_particle_plane_wave():
    N, L = 16, 10.0
    g = sch.Grid(N, L)
    spec = sch.EvolutionSpec(1.0, 0.02, 0.1)
    q = 3
    e = np.exp(2j * np.pi * q * np.arange(N) / N) / 4
    E = (N / L) ** 2 * np.sin(2 * np.pi * q / N) ** 2 / 2
    final, _ = sch.run_evolution(g, spec, e)
    assert np.allclose(final, (1 - 1j * spec.dt * E) ** spec.steps * e, atol=1e-13)


def test_step_cap():
    g = sch.Grid(4, 1.0)
    with pytest.raises(CapacityError):
        sch.evolve_network(g, sch.EvolutionSpec(1.0, 1e-3, 1.0), max_steps=10)


def test_compare_exact_zero_hamiltonian_has_no_error(monkeypatch):
    monkeypatch.setattr(sch, "kinetic_op", lambda g, mu: np.zeros((g.points_N,) * 2, dtype=complex))
    g = sch.Grid(8, 10.0)
    out = sch.compare_exact(g, sch.EvolutionSpec(1.0, 0.01, 0.05), sch.basis_state(g, 3))
    assert out["global_error"] == 0.0
    assert out["norm_history"] == [1.0] * 6


def test_compare_exact_harmonic_first_order():
    g = sch.Grid(64, 10.0)
    spec = sch.EvolutionSpec(1.0, 0.01, 0.1, HARMONIC)
    psi = sch.gaussian_packet(g, 5.0, 1.0)
    out = sch.compare_exact(g, spec, psi)
    exact = scipy.linalg.expm(-1j * sch.hamiltonian(g, spec) * 0.1) @ psi
    final, _ = sch.run_evolution(g, spec, psi)
    assert out["global_error"] == pytest.approx(np.linalg.norm(final - exact), rel=1e-9)
    orders = [row["order"] for row in out["convergence"][1:]]
    assert len(orders) == 3 and all(0.8 <= p <= 1.2 for p in orders)
    norms = out["norm_history"]
    assert norms[0] == pytest.approx(1.0) and all(b >= a for a, b in zip(norms, norms[1:]))
    assert out["norm_growth_residual"] <= 1e-12


def test_renormalized_variant_stays_unit(rng):
    g = sch.Grid(16, 10.0)
    spec = sch.EvolutionSpec(1.0, 0.05, 0.5, HARMONIC)
    psi = sch.gaussian_packet(g, 5.0, 1.0, 0.5)
    final, norms = sch.run_evolution(g, spec, psi, renormalize=True)
    raw, raw_norms = sch.run_evolution(g, spec, psi)
    assert np.linalg.norm(final) == pytest.approx(1.0)
    assert np.allclose(final, raw / np.linalg.norm(raw))
    assert norms[1] == pytest.approx(raw_norms[1])


def test_initial_states():
    g = sch.Grid(8, 8.0)
    assert np.linalg.norm(sch.gaussian_packet(g, 4.0, 1.0, 1.0)) == pytest.approx(1.0)
    with pytest.raises(RejectedInputError):
        sch.gaussian_packet(g, 4.0, 0.0)
    with pytest.raises(RejectedInputError):
        sch.basis_state(g, 8)
