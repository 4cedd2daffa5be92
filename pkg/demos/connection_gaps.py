"""Quantify how far the canonical Hermitian geometry is from Kaehler.

For the constant-source potential every connection collapses onto the
flat one and all gaps vanish; for genuinely curved potentials the Chern
connection has torsion, the associated 2-form is not closed, and both
the flat and the real Levi-Civita connection disagree with it.
"""

from frobcdv import A3_POINT, catalog, connection_gap, flat_frame_h

import numpy as np

CASES = [
    ("cubic2", (0.3 + 0.1j, 0.7)),
    ("quartic2", (0.0, 1.0)),
    ("a3_3d", A3_POINT),
]

for name, point in CASES:
    spec = catalog(name)
    report = connection_gap(spec, point, 1e-5)
    print(f"== {name} at t = {point} ==")
    for line in report.summary_lines():
        print(" ", line)
    h = flat_frame_h(spec, point)
    off = np.max(np.abs(h - np.diag(np.diag(h))))
    print(f"  pairing off-diagonal weight: {off:.3e} (norm {np.linalg.norm(h):.3f})")
    print()
