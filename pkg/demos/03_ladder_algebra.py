"""Ladder operators of the partner Hamiltonians.

L = B^+ a B lowers the isospectral part of the spectrum by one and closes a
polynomial Heisenberg algebra.  Inserting f(N) linearizes it so that
[L, L^+] = 1 on every level but the first.

    python3 demos/03_ladder_algebra.py
"""

from hsusy import Grid, oscillator_limit_chain
from hsusy.algebra import LadderSpec, algebra_report, number_op_eigenvalue

grid = Grid(-12.0, 12.0, 4801)

for k in (1, 2):
    chain = oscillator_limit_chain(k, grid)
    print(f"\nk={k}, eps={chain.epsilons}")
    nat = algebra_report(LadderSpec(chain, "natural"), 5)
    print(" n   <L+L>          N(E_n)         [L,L+] residual")
    for n in range(6):
        print(f"{n:2d}  {nat.number_op_measured[n]:12.6f}  {nat.number_op_values[n]:12.6f}"
              f"   {nat.commutator_residuals[n]:.1e}")
    # the roots of N(E) mark the extremal states: E = 1/2 and each eps, eps + 1
    roots = [0.5] + [e for e in chain.epsilons] + [e + 1 for e in chain.epsilons]
    print(" N at its roots:", [number_op_eigenvalue(chain.epsilons, r) for r in roots])
    for w in (0.0, 2.0):
        lin = algebra_report(LadderSpec(chain, "linearized", w), 4)
        print(f" linearized w={w:g}: predicted diagonal {lin.predicted_diagonal}, "
              f"worst residual {max(lin.commutator_residuals):.1e}")
