"""Probe absorption and dispersion with the pump tuned to the resonator.

A flux qubit is pumped at the resonator frequency (Delta = omega = 1 GHz).
Far from delta = omega the probe sees an ordinary Lorentzian absorption line
of width Gamma_f. Near delta = omega the resonator opens a second path from
|g,1> to |e,0>, the two paths interfere, and absorption collapses into a
narrow window while the dispersion turns steep.

Run:  python3 demos/transparency_window.py
"""

import numpy as np

from eitsim import Route, reference_params, spectrum, steady_state

params = reference_params()
st = steady_state(params)
print(f"qubit population inversion   sigma_z0 = {st.sigma_z0:.5f}")
print(f"static resonator displacement     X0 = {st.x0:.5f}")
print(f"coherent dressed coupling    Omega_c = {1e3 * params.effective_coupling:.1f} MHz")
print(f"two-photon shift             Delta_s = {1e3 * params.energy_shift:.1f} MHz")

deltas = np.linspace(0.8, 1.2, 801)
chi = spectrum(params, deltas, Route.FULL)

# The window sits at delta = omega; report the dip and the two shoulders.
i = int(np.argmin(np.abs(deltas - params.omega)))
left = int(np.argmax(chi.imag[:i]))
right = i + int(np.argmax(chi.imag[i:]))
print()
print(f"absorption at the window centre  Im chi = {chi.imag[i]:.4f}")
print(f"shoulders  {deltas[left]:.4f} GHz -> {chi.imag[left]:.3f},  "
      f"{deltas[right]:.4f} GHz -> {chi.imag[right]:.3f}")
slope = (chi.real[i + 1] - chi.real[i - 1]) / (deltas[i + 1] - deltas[i - 1])
print(f"dispersion slope at the centre  dRe chi/d delta = {slope:.1f} per GHz")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\n(matplotlib not installed; skipping the figure)")
else:
    fig, (a, b) = plt.subplots(1, 2, figsize=(9, 3.5), sharex=True)
    a.plot(deltas, chi.imag)
    a.set(xlabel="delta (GHz)", ylabel="Im chi", title="absorption")
    b.plot(deltas, chi.real, color="C1")
    b.set(xlabel="delta (GHz)", ylabel="Re chi", title="dispersion")
    fig.tight_layout()
    fig.savefig("transparency_window.png", dpi=120)
    print("\nwrote transparency_window.png")
