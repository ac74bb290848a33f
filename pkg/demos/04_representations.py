"""
Matrix realizations of deformed unirreps
========================================

Deformed so(4), so(3,1) and e(3) unirreps keep the so(3) content of their
undeformed counterparts; only the reduced matrix elements of ``A`` change,
through the function ``G(l^2, l0^2)``.  Here the matrices are built and the
defining relations checked numerically.
"""
from fractions import Fraction

import numpy as np

from defangmom import DeformationParams, realize, verify_realization
from defangmom.repbuilder import E3, So4, So31, casimir_series

# so(4) [3,1] with a first-order deformation a1 = 1/10.
p = DeformationParams.of(1, Fraction(1, 10))
m = realize(So4(3, 1), p)
rep = verify_realization(m)
print("so(4) [3,1]: dim", m.tower.dim, "max residual %.1e" % rep.max_residual)
print("  <C1d> matrix %.6f, closed form %.6f, series %.6f"
      % (rep.casimir_spectrum["C1d"], rep.casimir_closed_form["C1d"], casimir_series(So4(3, 1), p)[0]))
print("  C1d eigenvalues:", np.unique(np.round(np.linalg.eigvalsh(m.C1d), 10)))

# Noncompact towers are infinite; a cutoff keeps l <= 10 and the relations
# are checked on the interior l <= 9, where no truncated state is reached.
for label, a in [(So31(1, 2), (-1, Fraction(-1, 50))), (E3(1, 2), (0, Fraction(-1, 10)))]:
    m = realize(label, DeformationParams.of(*a), cutoff=10)
    rep = verify_realization(m, tol=1e-8)
    print(f"{label.algebra} {label}: interior max residual {rep.max_residual:.1e}, "
          f"<C1d> = {rep.casimir_spectrum['C1d']:.6f}")
