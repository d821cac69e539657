"""Residue algebras of a few one-dimensional p-adic groups H x Z_p."""

from workbench.iwasawa import bundled_specs, iwasawa_report

for spec in bundled_specs():
    rep = iwasawa_report(spec)
    line = f"{spec.name:16s} |H|={spec.H.order:<2d} N={spec.N} "
    if "p_radical" in rep:
        cert = rep["p_radical"]
        line += f"nilpotency={cert['nilpotency_index']} cartan={rep['p_cartan']['cartan_entry']} "
    if "augmentation_ideal" in rep:
        line += f"aug-generator={rep['augmentation_ideal']['pass']} "
    if "p_status" in rep:
        line += rep["p_status"] + " "
    print(line + ("ok" if rep["pass"] else "FAILED"))
