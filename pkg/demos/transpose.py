"""The transpose DM and the sequence 0 -> E1(DM) -> M -> M++ -> E2(DM) -> 0
for a few modules over F_3[S3] and a square-zero local algebra."""

import numpy as np

from workbench.algebras import group_algebra
from workbench.groups import symmetric
from workbench.homotopy import (
    dd_stable_identity_check,
    ext_all,
    random_presentation,
    square_zero_algebra,
    transpose,
    transpose_sequence_check,
)
from workbench.rings import FiniteField

rng = np.random.default_rng(1)
for A in (group_algebra(FiniteField(3), symmetric(3)), square_zero_algebra(FiniteField(2))):
    print(A.name)
    for _ in range(4):
        pres = random_presentation(A, rng)
        td = transpose(pres)
        seq = transpose_sequence_check(pres)
        dd = dd_stable_identity_check(pres)
        E = [e.dim for e in ext_all(pres)]
        print(f"  {pres.r}x{pres.s}: dim M={td.dims['M']} M+={td.dims['M+']} DM={td.dims['DM']} "
              f"E={E} seq={seq['dims']} DD-core {dd['dims']['core_M']}/{dd['dims']['core_DDM']}")
