"""Seed solutions of the oscillator equation at arbitrary energy.

Every SUSY transformation here starts from a solution u of
-u''/2 + x^2 u/2 = eps u that need not be normalizable.  This demo builds a
few of them, counts their nodes and shows where they decay.

    python3 demos/01_seed_solutions.py
"""

import numpy as np

from hsusy import Grid, general_solution
from hsusy.schrodinger import seed_nodes, tail_decay
from hsusy.specfun import kummer_series

grid = Grid(-8.0, 8.0, 3201)

print("eps     nu     nodes  decays(left,right)  ODE residual")
for eps, nu in [(-1.0, 0.9), (-1.2, 1.1), (-0.5, 0.2), (3.0, 0.9), (3.2, 1.1), (4.0, 1.0)]:
    u = general_solution(eps, nu, grid)
    print(f"{eps:5.2f}  {nu:5.2f}  {seed_nodes(u):5d}  {str(tail_decay(u.u.values)):>18}  "
          f"{u.ode_residual():.1e}")

# Below the ground level with |nu| < 1 the seed is nodeless; past |nu| = 1 a
# node appears, which is what the second seed of a two-step chain may have.

# The even part of a seed is e^{-x^2/2} 1F1(a, 1/2; x^2) with a = (1 - 2 eps)/4.
# For x of order 8 that series cancels heavily; the library notices and
# redoes the sum in exact integer arithmetic.
a = (1 - 2 * 4.0) / 4
for x in (2.0, 5.0, 8.0):
    res = kummer_series(a + 0.5, 1.5, -x * x)
    print(f"1F1({a + 0.5}, 3/2; -{x * x:g}) = {res.value.real:.15g}  "
          f"digits lost {res.digits_lost:4.1f}  exact path {res.extended}")

# The complex seed used for the complex design (fig5) decays on the right only.
u = general_solution(5.4 + 0.05j, -1.0, grid)
i = grid.index_of(6.0)
print("complex seed at x=6:", u.u.values[i], " |u| at the right edge:", abs(u.u.values[-1]))
print("decay flags:", tail_decay(u.u.values), " max |u| =", np.max(np.abs(u.u.values)))
