"""Coherent exchange between |g,1> and |e,0>, with and without losses.

The pumped qubit-resonator Hamiltonian is compared against its dressed-state
reduction, in which a single photon and a qubit excitation swap at rate
Omega_c = 2 g Omega_pu / Delta. The system starts in |g,1> and both
Hamiltonians are evolved under the same dissipators.

Without losses the effective model is a two-level Rabi problem. Its first
maximum of P_e0 is slightly below one because the Stark shift
Omega_pu^2/Delta detunes the pair. With qubit decay switched on, the
population drains into |g,0>, the lowest rung of the lambda system.

Run:  python3 demos/population_transfer.py
"""

import numpy as np

from eitsim import reference_params
from eitsim.lindblad import compare_full_vs_effective

params = reference_params()

for damped in (False, True):
    comp = compare_full_vs_effective(params, damped=damped, t_end=400.0)
    label = "damped" if damped else "undamped"
    print(f"--- {label} ---")
    print("   t (ns)   P_e0 full  P_e0 eff   P_g1 full  P_g1 eff   P_g0 full  P_g0 eff")
    for t in (0, 50, 100, 187.5, 250, 300, 400):
        k = int(np.argmin(np.abs(comp.full.times - t)))
        f, e = comp.full.populations, comp.effective.populations
        print(f"  {comp.full.times[k]:6.1f}" + "".join(
            f"   {f[p][k]:8.4f}  {e[p][k]:8.4f}" for p in ("P_e0", "P_g1", "P_g0")))
    worst = ", ".join(f"{k} {v:.3f}" for k, v in comp.max_deviation.items())
    print(f"  largest full/effective gap: {worst}")
    print(f"  doubling the Fock cutoff moves populations by {comp.truncation_change:.1e}")
    print()

# The undamped effective run is a closed-form Rabi oscillation.
stark = params.omega_pu**2 / params.delta
oc = params.effective_coupling
rabi = np.hypot(oc, stark)
print(f"closed-form Rabi peak {oc**2 / rabi**2:.4f} at t = {np.pi / (2 * rabi):.1f} ns")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("(matplotlib not installed; skipping the figure)")
else:
    fig, axes = plt.subplots(1, 2, figsize=(10, 3.5), sharey=True)
    for ax, damped in zip(axes, (False, True)):
        comp = compare_full_vs_effective(params, damped=damped, t_end=400.0, check_truncation=False)
        for j, p in enumerate(("P_e0", "P_g1", "P_g0")):
            ax.plot(comp.full.times, comp.full.populations[p], color=f"C{j}", label=p)
            ax.plot(comp.effective.times, comp.effective.populations[p], color=f"C{j}", ls="--")
        ax.set(xlabel="t (ns)", title="damped" if damped else "undamped")
    axes[0].legend()
    fig.tight_layout()
    fig.savefig("population_transfer.png", dpi=120)
    print("wrote population_transfer.png (solid: pumped, dashed: effective)")
