"""Discord cannot be broadcast optimally with the state-dependent cloner.

The same-side output pairs keep a strictly positive geometric discord for every
machine parameter, so the second condition of optimal broadcasting never holds.
"""

import numpy as np

from qbroadcast import ClonerSpec, clone_closed_form, geometric_discord, theorem_minimum_check
from qbroadcast.states import random_bloch_state

rng = np.random.default_rng(7)
states = [random_bloch_state(rng) for _ in range(25)]

for locality, hi in (("local", 0.5), ("nonlocal", 0.25)):
    lowest = min(
        geometric_discord(pair, check=False).value
        for lam in np.linspace(0.01, hi, 50)
        for s in states
        for pair in clone_closed_form(s, ClonerSpec.sd(locality, lam)).side
    )
    m = theorem_minimum_check(locality, 0.5)
    print(f"{locality}: smallest same-side discord over the sweep {lowest:.4f}")
    print(f"  closed-form expression at |x|^2 = 0.5: minimum {m.min_value:.4f} at lambda = {m.lambda_star:.4f}")
