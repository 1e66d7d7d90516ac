"""Where can a Werner-like state p|psi><psi| + (1-p) I/4 be broadcast?

For each cloner the closed-form interval in alpha^2 is printed next to the
interval found by bisecting the numerical PPT verdict.
"""

from qbroadcast import werner_range, werner_range_numeric, werner_threshold

for locality in ("local", "nonlocal"):
    print(f"{locality} cloner")
    for p in (0.6, 0.76, 0.85, 0.95, 1.0):
        closed = werner_range(locality, p)
        numeric = werner_range_numeric(locality, p)
        if closed is None:
            print(f"  p={p:<5} no broadcasting (numeric: {numeric})")
        else:
            print(f"  p={p:<5} {closed[0]:.5f} < a^2 < {closed[1]:.5f}   bisection {numeric[0]:.5f}, {numeric[1]:.5f}")
    for a in (0.2, 0.5):
        print(f"  alpha^2={a}: broadcast for p > {werner_threshold(locality, a):.5f}")
    print()
