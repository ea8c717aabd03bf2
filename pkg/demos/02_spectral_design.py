"""Designing spectra with second-order SUSY.

Each block builds one partner potential V2 of the oscillator and checks its
spectrum with the independent Sturm-bisection oracle, which only sees V2.
Potentials are written to demos/output/ as CSV for plotting.

    python3 demos/02_spectral_design.py
"""

from pathlib import Path

import numpy as np

from hsusy import Grid, build_chain, complex_case, confluent_case, eigenstate_seed, general_solution, real_case
from hsusy.verify import spectrum_report

out = Path(__file__).with_name("output")
out.mkdir(exist_ok=True)
grid = Grid(-12.0, 12.0, 4801)
osc = [n + 0.5 for n in range(6)]


def show(title, design, expected):
    rep = spectrum_report(design.v2, expected, 5e-3)
    print(f"\n{title}")
    print(rep.table())
    design.v2.to_csv(out / f"{title.split(':')[0].replace(' ', '_').lower()}.csv")


# Two new levels below the ground state (case a): both seeds sit under 1/2.
fig1 = real_case(general_solution(-1.0, 0.9, grid), general_solution(-1.2, 1.1, grid))
show("fig 1: levels at -1.2 and -1", fig1, [-1.2, -1.0, 0.5, 1.5, 2.5])

# Two levels between E_2 = 2.5 and E_3 = 3.5 (case b).  The seeds need 3 and 4
# nodes, which fixes the nu values.
fig2 = real_case(general_solution(3.2, 1.1, grid), general_solution(3.0, 0.9, grid))
show("fig 2: two levels in a gap", fig2, [0.5, 1.5, 2.5, 3.0, 3.2, 3.5])

# Confluent case: one level at 4, anywhere in the spectrum, as long as w0
# avoids the interval where w = w0 + int u^2 would vanish.
fig3 = confluent_case(general_solution(4.0, 1.0, grid), 5.0, 0.0)
print("\nadmissible w0 for the fig 3 seed:", fig3.report.w0_domain)
show("fig 3: one embedded level at 4", fig3, [0.5, 1.5, 2.5, 3.5, 4.0, 4.5])

# With a bound state as seed the confluent partner is isospectral.
fig4 = confluent_case(eigenstate_seed(1, grid), 1.0, 0.0)
show("fig 4: isospectral confluent partner", fig4, osc)

# Complex factorization energy: V2 comes out real and isospectral.
fig5 = complex_case(general_solution(5.4 + 0.05j, -1.0, grid))
print("\nmax |Im V2| =", fig5.max_imag_v2)
show("fig 5: complex factorization energy", fig5, osc)

# The same fig 1 potential from two first-order steps.
chain = build_chain([general_solution(-1.0, 0.9, grid), general_solution(-1.2, 1.1, grid)])
m = grid.interior(0.9)
print("\nchain vs direct, max |dV| on the interior:", np.max(np.abs(chain.vk.values - fig1.v2.values)[m]))
