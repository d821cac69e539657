"""Simple modules, projective covers and the Cartan/decomposition square of S3
in characteristics 2 and 3."""

import numpy as np

from workbench.ktheory import build_cell, square_check

for p in (2, 3):
    cell = build_cell("S3", p, rng=np.random.default_rng(0))
    rep = square_check("S3", p, cell=cell)
    print(f"S3 over F_{p}")
    print("  modular simples:", rep["modular_simples"])
    print("  ordinary simples:", rep["ordinary_simples"])
    print("  projective covers:", rep["pim_dims"])
    print("  D =", rep["D"])
    print("  C =", rep["C"], " det C =", rep["identities"]["detC"])
    print("  square holds:", rep["pass"])
