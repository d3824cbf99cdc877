"""Discretized 1-D Schrodinger evolution on a periodic grid.

Natural units (hbar = 1). Grid points ``x_m = m L / N``; every stencil
wraps modulo ``N``. The Euler step ``1 - i dt H`` is compiled into a
sum-composed network and the full evolution chains ``round(T / dt)`` copies
of it through connectors. The scheme is first order and not unitary: the
norm grows by ``1 + dt**2 ||H psi||**2`` (squared) per step and is reported,
never silently removed.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._config import DEFAULT_MAX_STEPS
from .exceptions import CapacityError, RejectedInputError
from .linalg import expm_oracle
from .network import compose_product, compose_sum, evaluate_trace, interior, q_of, run_on_vector
from .registers import RegisterLayout, make_augmented
from .utils.validation import check_index, check_vector, is_power_of_two

__all__ = [
    "EvolutionSpec",
    "Grid",
    "Potential",
    "basis_state",
    "compare_exact",
    "euler_step_network",
    "evolve_network",
    "gaussian_packet",
    "hamiltonian",
    "kinetic_op",
    "momentum_op",
    "parse_potential",
    "potential_op",
    "run_evolution",
]


@dataclass(frozen=True)
class Grid:
    points_N: int
    length_L: float

    def __post_init__(self):
        if not is_power_of_two(self.points_N):
            raise RejectedInputError(f"grid size must be a power of two, got {self.points_N!r}")
        if not (self.length_L > 0 and math.isfinite(self.length_L)):
            raise RejectedInputError(f"box length must be positive, got {self.length_L!r}")

    @property
    def dx(self):
        return self.length_L / self.points_N

    @property
    def positions(self):
        return np.arange(self.points_N) * self.dx


@dataclass(frozen=True)
class Potential:
    """Named potential form.

    ``kind`` is one of ``zero``, ``const`` (``params=(c,)``), ``harmonic``
    (``(omega,)``, centred at ``L/2``), ``well`` (``(depth, width)``: ``-depth``
    inside a centred well) or ``table`` (one value per grid point).
    """

    kind: str = "zero"
    params: tuple = ()

    def values(self, grid, mass=1.0):
        x = grid.positions
        if self.kind == "zero":
            v = np.zeros_like(x)
        elif self.kind == "const":
            v = np.full_like(x, float(self.params[0]))
        elif self.kind == "harmonic":
            omega = float(self.params[0])
            v = 0.5 * mass * omega**2 * (x - grid.length_L / 2) ** 2
        elif self.kind == "well":
            depth, width = map(float, self.params)
            v = np.where(np.abs(x - grid.length_L / 2) < width / 2, -depth, 0.0)
        elif self.kind == "table":
            v = np.asarray(self.params, dtype=float)
            if v.shape != x.shape:
                raise RejectedInputError(f"tabulated potential needs {x.size} values, got {v.size}")
        else:
            raise RejectedInputError(f"unknown potential kind {self.kind!r}")
        return v


def parse_potential(text):
    """Parse CLI potential syntax: ``zero``, ``const:c``, ``harmonic:omega``,
    ``well:depth,width`` or ``file:path`` (JSON list of per-point values)."""
    kind, _, arg = text.partition(":")
    try:
        if kind == "zero":
            return Potential("zero")
        if kind == "const":
            return Potential("const", (float(arg),))
        if kind == "harmonic":
            return Potential("harmonic", (float(arg),))
        if kind == "well":
            depth, width = arg.split(",")
            return Potential("well", (float(depth), float(width)))
        if kind == "file":
            import json

            with open(arg) as fh:
                return Potential("table", tuple(float(v) for v in json.load(fh)))
    except ValueError as exc:
        raise RejectedInputError(f"bad potential spec {text!r}") from exc
    raise RejectedInputError(f"unknown potential {text!r}")


@dataclass(frozen=True)
class EvolutionSpec:
    mass_mu: float
    dt: float
    total_T: float
    potential: Potential = field(default_factory=Potential)

    def __post_init__(self):
        if not self.mass_mu > 0:
            raise RejectedInputError("mass must be positive")
        if not (self.dt >= 0 and self.total_T > 0):
            raise RejectedInputError("need dt >= 0 and total_T > 0")
        if self.dt > self.total_T:
            raise RejectedInputError("dt must not exceed total_T")

    @property
    def steps(self):
        if self.dt == 0:
            return 1
        return max(1, int(round(self.total_T / self.dt)))


def _shift(N, k):
    """``sum_m |x_m><x_{m+k}|`` with periodic wrap."""
    S = np.zeros((N, N), dtype=np.complex128)
    m = np.arange(N)
    S[m, (m + k) % N] += 1.0
    return S


def momentum_op(g):
    """Symmetrized central difference ``-(i/2)(N/L) sum (|m><m+1| - |m><m-1|)``."""
    N = g.points_N
    return -0.5j * (N / g.length_L) * (_shift(N, 1) - _shift(N, -1))


def kinetic_op(g, mu):
    """``-(1/8 mu)(N/L)^2 [sum(|m><m+2| + |m><m-2|) - 2 I]``, equal to ``p^2 / 2 mu``."""
    if not mu > 0:
        raise RejectedInputError("mass must be positive")
    N = g.points_N
    return -(1.0 / (8 * mu)) * (N / g.length_L) ** 2 * (_shift(N, 2) + _shift(N, -2) - 2 * np.eye(N))


def potential_op(g, V, mass=1.0):
    """Diagonal ``sum V(x_m) |x_m><x_m|``; ``V`` is a callable, array or :class:`Potential`."""
    if isinstance(V, Potential):
        values = V.values(g, mass)
    elif callable(V):
        values = np.array([V(x) for x in g.positions], dtype=float)
    else:
        values = np.asarray(V, dtype=float)
    if values.shape != (g.points_N,):
        raise RejectedInputError(f"potential must give {g.points_N} values")
    if not np.all(np.isfinite(values)):
        raise RejectedInputError("potential has non-finite values")
    return np.diag(values).astype(np.complex128)


def hamiltonian(g, spec):
    return kinetic_op(g, spec.mass_mu) + potential_op(g, spec.potential, spec.mass_mu)


def euler_step_network(g, spec):
    """``Q(1 - i dt H) = Q(I) Q(-i dt T) Q(-i dt V)`` by the sum law."""
    dt = spec.dt
    N = g.points_N
    parts = [
        q_of(np.eye(N), label="Q(I)"),
        q_of(-1j * dt * kinetic_op(g, spec.mass_mu), label="Q(-i dt T)"),
        q_of(-1j * dt * potential_op(g, spec.potential, spec.mass_mu), label="Q(-i dt V)"),
    ]
    return compose_sum(parts, label="Q(Omega(dt))")


def evolve_network(g, spec, max_steps=DEFAULT_MAX_STEPS):
    """Connector chain of ``steps`` identical Euler-step subnetworks."""
    steps = spec.steps
    if steps > max_steps:
        raise CapacityError(f"{steps} time steps exceed the limit {max_steps}")
    step = euler_step_network(g, spec)
    return compose_product([step] * steps, label=f"Q(Omega(T)) x{steps}")


def gaussian_packet(g, x0, sigma, k0=0.0):
    """Normalized ``exp(-(x - x0)^2 / (2 sigma^2) + i k0 x)`` sampled on the grid."""
    if not sigma > 0:
        raise RejectedInputError("sigma must be positive")
    x = g.positions
    psi = np.exp(-((x - x0) ** 2) / (2 * sigma**2) + 1j * k0 * x)
    return psi / np.linalg.norm(psi)


def basis_state(g, m):
    m = check_index(m, g.points_N, "m")
    psi = np.zeros(g.points_N, dtype=np.complex128)
    psi[m] = 1.0
    return psi


def run_evolution(g, spec, psi0, renormalize=False):
    """Evolve ``psi0`` through the network; returns ``(final, norm_history)``.

    ``norm_history[0]`` is the initial norm and entry ``i`` the norm after
    ``i`` steps (before any optional renormalization).
    """
    psi0 = check_vector(psi0, dim=g.points_N, name="psi0")
    if renormalize:
        step = euler_step_network(g, spec)
        psi = psi0
        norms = [float(np.linalg.norm(psi))]
        for _ in range(spec.steps):
            psi = run_on_vector(step, psi)
            nrm = float(np.linalg.norm(psi))
            norms.append(nrm)
            psi = psi / nrm
        return psi, norms
    net = interior(evolve_network(g, spec))
    trace = evaluate_trace(net, make_augmented(psi0, RegisterLayout((g.points_N,))))
    norms = [float(np.linalg.norm(psi0))]
    norms += [float(np.linalg.norm(trace[3 + 2 * i].branch(0))) for i in range(spec.steps)]
    return trace[-1].branch(1), norms


def compare_exact(g, spec, psi0, refinements=3):
    """Euler network versus ``expm(-i H T) psi0``.

    Returns a dict with the global error at ``spec.dt``, the norm history,
    the per-step growth residual, and a convergence table over
    ``dt, dt/2, ..., dt/2**refinements`` with observed orders
    ``log2(err(dt) / err(dt/2))``.
    """
    psi0 = check_vector(psi0, dim=g.points_N, name="psi0")
    H = hamiltonian(g, spec)
    final, norms = run_evolution(g, spec, psi0)
    T = spec.steps * spec.dt
    exact = expm_oracle(-1j * H * T) @ psi0
    global_error = float(np.linalg.norm(final - exact))

    # ||(1 - i dt H) psi||^2 = ||psi||^2 + dt^2 ||H psi||^2 for Hermitian H.
    psi = psi0
    growth_residual = 0.0
    for i in range(spec.steps):
        predicted = 1.0 + spec.dt**2 * np.linalg.norm(H @ psi) ** 2 / np.linalg.norm(psi) ** 2
        observed = (norms[i + 1] / norms[i]) ** 2
        growth_residual = max(growth_residual, abs(observed - predicted) / predicted)
        psi = psi - 1j * spec.dt * (H @ psi)

    table = []
    for level in range(refinements + 1):
        dt = spec.dt / 2**level
        sub = EvolutionSpec(spec.mass_mu, dt, spec.total_T, spec.potential)
        approx, _ = run_evolution(g, sub, psi0)
        exact_sub = expm_oracle(-1j * H * (sub.steps * dt)) @ psi0
        row = {"dt": dt, "steps": sub.steps, "error": float(np.linalg.norm(approx - exact_sub))}
        if table and row["error"] > 0 and table[-1]["error"] > 0:
            ratio = table[-1]["error"] / row["error"]
            row["ratio"] = ratio
            row["order"] = math.log2(ratio)
        table.append(row)
    return {
        "global_error": global_error,
        "steps": spec.steps,
        "norm_history": norms,
        "norm_growth_residual": growth_residual,
        "convergence": table,
    }
