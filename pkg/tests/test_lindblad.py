import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from eitsim import operators as ops
from eitsim.hamiltonians import build_h_eff, build_h_sys_prime, excitation_number, reference_params
from eitsim.integrate import rk4_linear_step_matrix, rk4_step
from eitsim.lindblad import (
    DensityMatrix, Dissipator, TraceDriftError, compare_full_vs_effective, evolve,
    lindblad_rhs, liouvillian, master_dissipators,
)
from eitsim.operators import DimensionError, HilbertSpace, Operator


def zero_h(space):
    return Operator(space, np.zeros((space.total_dim,) * 2))


def test_rhs_zero_without_dynamics():
    space = HilbertSpace(2)
    rho = DensityMatrix(space, np.eye(space.total_dim) / space.total_dim)
    assert np.all(lindblad_rhs(zero_h(space), [], rho) == 0)


def test_ground_state_is_dark(params):
    n = 3
    space = HilbertSpace(n)
    p = params.replace(omega_pu=0.0, g=0.0)
    rho = DensityMatrix.basis(space, "g", 0)
    out = lindblad_rhs(build_h_sys_prime(p, n), master_dissipators(p, space), rho)
    assert np.max(np.abs(out)) == 0.0


def test_excited_population_decays_at_gamma_f():
    # D[s-, G] on |e><e|: G (|g><g| - |e><e|), so dP_e/dt = -G
    space = HilbertSpace(1)
    rho = DensityMatrix.basis(space, "e", 0)
    out = lindblad_rhs(zero_h(space), [Dissipator(ops.sm(space), 0.03)], rho)
    e0, g0 = space.index("e", 0), space.index("g", 0)
    assert out[e0, e0].real == pytest.approx(-0.03, abs=1e-16)
    assert out[g0, g0].real == pytest.approx(0.03, abs=1e-16)


def test_rhs_dimension_mismatch():
    a, b = HilbertSpace(1), HilbertSpace(2)
    with pytest.raises(DimensionError):
        lindblad_rhs(zero_h(a), [], DensityMatrix.basis(b, "g", 0))


def test_dissipator_rate_nonnegative():
    with pytest.raises(ValueError):
        Dissipator(ops.sm(HilbertSpace(1)), -1.0)


def test_density_matrix_validation():
    space = HilbertSpace(1)
    with pytest.raises(ValueError):
        DensityMatrix(space, np.eye(4))
    with pytest.raises(ValueError):
        DensityMatrix(space, np.diag([1.5, -0.5, 0, 0]))


def random_rho(n, re, im, w):
    d = 2 * (n + 1)
    m = re[:d, :d] + 1j * im[:d, :d]
    r = m @ m.conj().T + np.diag(w[:d])
    return r / np.trace(r)


@settings(max_examples=30, deadline=None)
@given(
    arrays(float, (8, 8), elements=st.floats(-1, 1)),
    arrays(float, (8, 8), elements=st.floats(-1, 1)),
    arrays(float, (8,), elements=st.floats(0.01, 1)),
    st.floats(0, 0.1), st.floats(0, 0.1),
)
def test_rhs_traceless_and_hermitian(re, im, w, gf, gr):
    n = 3
    space = HilbertSpace(n)
    p = reference_params(gamma_f=gf, gamma_r=gr)
    rho = DensityMatrix(space, random_rho(n, re, im, w))
    out = lindblad_rhs(build_h_sys_prime(p, n), master_dissipators(p, space, 0.01), rho)
    assert abs(np.trace(out)) <= 1e-12
    assert np.max(np.abs(out - out.conj().T)) <= 1e-12
    # the superoperator is the same map
    L = liouvillian(build_h_sys_prime(p, n), master_dissipators(p, space, 0.01))
    assert np.allclose(L @ rho.matrix.ravel(), out.ravel(), atol=1e-13)


def test_linear_step_matrix_equals_staged_rk4(params):
    n = 2
    space = HilbertSpace(n)
    h = build_h_sys_prime(params, n)
    diss = master_dissipators(params, space)
    rho = DensityMatrix.basis(space, "g", 1).matrix
    dt = 0.002
    staged = rho.ravel()
    for _ in range(5):
        staged = rk4_step(lambda t, v: lindblad_rhs(h, diss, v.reshape(rho.shape)).ravel(), 0.0, staged, dt)
    P = rk4_linear_step_matrix(liouvillian(h, diss), dt)
    assert np.allclose(np.linalg.matrix_power(P, 5) @ rho.ravel(), staged, atol=1e-15)


def test_ground_state_stays_put(params):
    space = HilbertSpace(3)
    p = params.replace(omega_pu=0.0)
    traj = evolve(build_h_sys_prime(p.replace(g=0.0), 3), master_dissipators(p, space),
                  DensityMatrix.basis(space, "g", 0), t_end=50.0)
    assert np.all(traj.populations["P_g0"] == 1.0)


def test_zero_duration_single_sample(params):
    space = HilbertSpace(5)
    traj = evolve(build_h_sys_prime(params, 5), [], DensityMatrix.basis(space, "g", 1), t_end=0.0)
    assert traj.times.tolist() == [0.0]
    assert traj.populations["P_g1"][0] == 1.0


def test_stability_bound_enforced(params):
    space = HilbertSpace(5)
    with pytest.raises(ValueError, match="stability"):
        evolve(build_h_sys_prime(params, 5), [], DensityMatrix.basis(space, "g", 1), t_end=1.0, dt=0.01)


def test_trace_drift_aborts():
    # dt at the stability bound with a huge decay rate blows up the trace-preserving polynomial
    space = HilbertSpace(1)
    h = Operator(space, np.diag([1.0, 0, 0, 0]))
    diss = [Dissipator(ops.sm(space), 1e4)]
    with pytest.raises(TraceDriftError):
        evolve(h, diss, DensityMatrix.basis(space, "e", 0), t_end=1.0, dt=0.01, stride=0.01)


def test_effective_rabi_closed_form(params):
    # {|g,1>, |e,0>} block of the effective Hamiltonian: coupling Oc, splitting 2 Opu^2/Delta
    n = 5
    space = HilbertSpace(n)
    traj = evolve(build_h_eff(params, n), [], DensityMatrix.basis(space, "g", 1), t_end=400.0)
    oc = 2 * params.g * params.omega_pu / params.delta
    half_split = params.omega_pu**2 / params.delta
    rabi = np.hypot(oc, half_split)
    exact = (oc / rabi) ** 2 * np.sin(rabi * traj.times) ** 2
    assert np.max(np.abs(traj.populations["P_e0"] - exact)) < 1e-9
    assert (oc / rabi) ** 2 == pytest.approx(0.911, abs=5e-4)
    assert np.pi / (2 * rabi) == pytest.approx(187.4, abs=0.1)


def test_excitation_number_conserved_under_effective_model(params):
    n = 5
    space = HilbertSpace(n)
    traj = evolve(build_h_eff(params, n), [], DensityMatrix.basis(space, "g", 1), t_end=200.0,
                  observables={"n_exc": excitation_number(n)})
    assert np.max(np.abs(traj.expectations["n_exc"] - 1.0)) < 1e-8


def test_truncation_flag_for_tiny_cutoff(params):
    space = HilbertSpace(1)
    traj = evolve(build_h_sys_prime(params, 1), [], DensityMatrix.basis(space, "g", 1), t_end=5.0)
    assert traj.truncation_flag


def test_frozen_when_uncoupled_and_undriven():
    p = reference_params(g=0.0, omega_pu=0.0)
    comp = compare_full_vs_effective(p, damped=False, t_end=20.0, check_truncation=False)
    assert all(v == 0.0 for v in comp.max_deviation.values())
    assert np.all(comp.full.populations["P_g1"] == 1.0)


def test_damped_long_time_limit_is_ground(params):
    comp = compare_full_vs_effective(params, damped=True, t_end=1000.0, stride=5.0, check_truncation=False)
    assert comp.full.populations["P_g0"][-1] > 0.99


def test_optional_dephasing_channel(params):
    space = HilbertSpace(2)
    assert len(master_dissipators(params, space)) == 2
    diss = master_dissipators(params, space, dephasing_rate=0.01)
    assert len(diss) == 3 and diss[2].rate == 0.01
