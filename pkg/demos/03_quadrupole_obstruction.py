"""
No first-order deformation for a quadrupole generator
=====================================================

With ``[Q, Q]^1 = 3 sqrt(10) eps L + alpha L^2 L`` and
``[Q, Q]^3 = beta [[LxL]^2xL]^3`` the Jacobi identity for three ``Q``
gives two conditions.  Each reduces to a combination of the independent
tensors ``[LxQ]^Lam`` and ``[[LxL]^2xQ]^Lam``.
"""
from defangmom import first_order_obstruction, reduce_Q_brackets
from defangmom.quaddef import numeric_Q_brackets

for Lam in (1, 3):
    rep = reduce_Q_brackets(Lam)
    l2l, lll = rep.engine
    print(f"Lambda={Lam}: [Q, L^2 L] -> {l2l['LQ']} [LxQ] + {l2l['LLQ']} [[LxL]^2xQ]")
    print(f"          [Q, LLL]   -> {lll['LQ']} [LxQ] + {lll['LLQ']} [[LxL]^2xQ]")
    print("  engine == Leibniz rule:", rep.routes_agree)
    for line in rep.printed_mismatches():
        print("  differs from the commonly quoted closed form:", line)

# A numerical cross-check: random quadrupole matrices on a truncated tower.
num = numeric_Q_brackets()
print("\nnumerical [Q, LLL]^1 [LxQ] coefficient:", round(num[1][1]["LQ"], 12))

obs = first_order_obstruction()
print("\nconditions on (alpha, beta):")
for row in obs.conditions:
    line = f"  Lambda={row['Lambda']} {row['core']:>3}: {row['alpha']} alpha + {row['beta']} beta = 0"
    print(line.replace("+ -", "- "))
print("rank", obs.rank, "->", obs.solution_space, "solution;", obs.verdict)
