"""A Gardner family whose limiting wave has a cusp rather than a corner.

With alpha = -sigma^2/(4c) the two roots of F'(u) = -c + sigma u + alpha u^2
merge into a double root at u = 2c/sigma, and the local law predicts
exponent 2/3 at the crest.

Run:  python demos/03_cusped_limit.py   (about ten seconds)
"""
import numpy as np

from gardner_ostrovsky import ContinuationSettings, CriticalGardner, continue_branch
from gardner_ostrovsky.analysis import holder_fit, predicted_holder, slack

family = CriticalGardner(beta=0.0, sigma=1.0)
settings = ContinuationSettings(max_n=2048, slack_floor=1e-4)
branch = continue_branch(family, 1, eps_start=0.01, eps_step=0.02, settings=settings)
t = branch.terminal
p = family.at_speed(t.c)
print(f"{len(branch.points)} points; terminal c = {t.c:.5f}, n = {t.profile.grid.n}")
print(f"max phi = {t.profile.samples.max():.4f}, double root 2c = {2 * t.c:.4f}, slack = {slack(p, t.c, t.profile):.1e}")

a, expo, const = predicted_holder(p, t.c, 2 * t.c)
i = int(np.argmax(t.profile.samples))
for window in (8, 16, 32):
    fit, c_fit = holder_fit(t.profile, t.profile.grid.nodes[i], window=window)
    print(f"window {window:2d}: exponent {fit:.3f} (predicted {expo:.3f}, order a = {a})")
