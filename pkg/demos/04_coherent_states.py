"""Coherent states of the partner Hamiltonians.

Nonlinear states are eigenstates of L_k, linearized ones of L_L.  In the
oscillator limit (eps_i = 1/2 - i) the partner eigenstates are shifted
oscillator states, so position and momentum spreads have closed forms.
This demo cross-checks them against Fock-basis moments and writes the
uncertainty surfaces to demos/output/.

    python3 demos/04_coherent_states.py
"""

from pathlib import Path

import numpy as np

from hsusy import coherent as cs

out = Path(__file__).with_name("output")
out.mkdir(exist_ok=True)

configs = {
    "nonlinear_k1": cs.CoherentStateSpec(1, (-0.5,), 0j),
    "nonlinear_k2": cs.CoherentStateSpec(2, (-0.5, -1.5), 0j),
    "linear_k1_w1": cs.CoherentStateSpec(1, (-0.5,), 0j, "linear", 1.0),
    "linear_k2_w2": cs.CoherentStateSpec(2, (-0.5, -1.5), 0j, "linear", 2.0),
}

z = 1.3 + 0.4j
for name, spec in configs.items():
    c = cs.cs_coefficients(spec.at(z))
    closed = cs.closed_form_uncertainty(spec.at(z))
    fock = cs.fock_uncertainty(spec.at(z))
    print(f"{name:13s} terms {len(c):3d}  dx dp = {closed[2]:.10f}  "
          f"(Fock {fock[2]:.10f})  at z=0: {cs.uncertainty(spec)[2]:g}")
    rows = cs.uncertainty_surface(spec, np.linspace(-3, 3, 25), np.linspace(-3, 3, 25))
    (out / f"uncertainty_{name}.csv").write_text(cs.surface_csv(rows))

# Linearized products fall towards 1/2 as |z| grows.
spec = configs["linear_k1_w1"]
print("linearized k=1 product at r = 1, 2, 4, 8:",
      [round(cs.uncertainty(spec.at(r))[2], 12) for r in (1, 2, 4, 8)])

# Coherent states are not orthogonal; the kernel measures their overlap.
nl = configs["nonlinear_k1"]
print("<1|i> nonlinear k=1:", cs.kernel(nl, 1, 1j))
print("Gram matrix eigenvalues:",
      np.linalg.eigvalsh(cs.gram_matrix(nl, [0, 1, 1j, -2 + 0.5j])).round(6))

# Time evolution only rotates z.
c = cs.cs_coefficients(nl.at(z))
t = 0.9
rotated = cs.cs_coefficients(nl.at(z * np.exp(-1j * t))).c
m = min(len(c), len(rotated))
print("max |U(t)|z> - e^{-it/2}|z e^{-it}>| =",
      np.max(np.abs(cs.evolve(c, t)[:m] - np.exp(-0.5j * t) * rotated[:m])))
