"""
Vector deformations: the [A, L^2k] coefficients and associativity
==================================================================

A deformed vector algebra keeps ``[L, L]`` and ``[L, A]`` and replaces
``[A, A]^1`` by ``-sqrt(2) g(L^2) L`` with a polynomial ``g``.  Commuting
``A`` past powers of ``L^2`` produces three families of exact numbers
``x, y, z`` that drive every later computation.
"""
from defangmom import check_associativity, commutator_A_L2k, solve_recursion
from defangmom.cli import table_style

# The recursion is solved in exact radical arithmetic.
tab = solve_recursion(5)
for k in range(2, 6):
    xs = [table_style(tab.x(k, i)) for i in range(k)]
    ys = [table_style(tab.y(k, i)) for i in range(k)]
    zs = [table_style(tab.z(k, i)) for i in range(k - 1)]
    print(f"k={k}  x={xs}\n     y={ys}\n     z={zs}")

# The same coefficients, assembled into a tensor expression over the
# standard cores A, [LxA]^1 and [[LxL]^2xA]^1 times powers of L^2.
print("\n[A, L^4]^1 =", commutator_A_L2k(2))

# Associativity reduces to one scalar condition.  It is checked here for
# every power of L^2 up to the sixth, using the normal-ordering engine.
rep = check_associativity(6)
print("\nassociativity up to k=6:", rep.to_json()["verdict"])
