"""Broadcastable Bell-diagonal states form four caps at the tetrahedron vertices.

A cube grid is filtered to valid states and classified; the caps are then
measured along the edges through each vertex.
"""

import numpy as np

from qbroadcast import ClonerSpec, cone_edge_sweep, scan

for locality in ("local", "nonlocal"):
    report = scan("bell", ClonerSpec.si(locality), 48)
    ok = report.column("optimally_broadcastable")
    c = report.params
    print(f"{locality}: {ok.sum()} of {len(report)} valid grid points broadcast")
    print(f"  inside the separable octahedron: {(ok & (np.abs(c).sum(axis=1) <= 1)).sum()}")
    t, edge_ok = cone_edge_sweep(locality, axis=0, sign=-1)
    print(f"  along c1 = -1, c2 = c3 = t: broadcast for t <= {t[edge_ok & (t < 0)].max():.4f}"
          f" and t >= {t[edge_ok & (t > 0)].min():.4f}\n")
