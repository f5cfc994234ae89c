"""Follow the beta = 0 branch from the first bifurcation up to the highest wave.

Run:  python demos/01_highest_wave_branch.py   (about ten seconds)
"""
import math

from gardner_ostrovsky import ModelParams, continue_branch, diagnose
from gardner_ostrovsky.analysis import slack

# %% The reduced equation: n(u) = u^2/2, no third-order dispersion.
params = ModelParams.gardner(beta=0.0, sigma=1.0, alpha=0.0)
branch = continue_branch(params, k0=1, eps_start=0.01, eps_step=0.01)
print(f"{len(branch.points)} points, stopped by {branch.termination.value}")

# %% Every tenth point.  The slack min(c - phi) shrinks as the crest sharpens.
print(f"{'eps':>8} {'c':>10} {'max phi':>10} {'slack':>10} {'n':>5}")
for pt in branch.points[::10] + [branch.terminal]:
    s = slack(params, pt.c, pt.profile)
    print(f"{pt.eps:8.4f} {pt.c:10.6f} {pt.profile.samples.max():10.6f} {s:10.2e} {pt.profile.grid.n:5d}")

# %% The terminal speed approaches pi^2/9, the speed of the explicit peaked wave.
t = branch.terminal
print(f"\nterminal c = {t.c:.6f}, pi^2/9 = {math.pi**2 / 9:.6f}")

# %% Near the highest wave the crest is Lipschitz: local exponent close to 1.
rep = diagnose(params, t.c, t.profile)
print(f"regime {rep.regime}: fitted exponent {rep.holder_exponent:.3f} (predicted {rep.predicted_exponent:.0f})")
print(f"Fourier decay slope {rep.fourier_decay_rate:.2f}, asymmetry {rep.asymmetry:.1e}, crests {rep.crest_count}")

# %% Small-amplitude end: (c - 1)/eps^2 settles to a constant.
for pt in branch.points[:3]:
    print(f"eps={pt.eps:.2f}: (c - 1)/eps^2 = {(pt.c - 1) / pt.eps**2:.5f}")
