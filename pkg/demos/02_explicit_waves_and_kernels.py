"""Check the two explicit peaked waves and the two convolution kernels.

Run:  python demos/02_explicit_waves_and_kernels.py
"""
import math

import numpy as np

from gardner_ostrovsky.exact_waves import ExactWave, verify_exact
from gardner_ostrovsky.fourier import TorusGrid, kernel_G, kernel_G_printed, kernel_G_series, kernel_K, kernel_K_series

# %% The corrected closed forms solve the steady equation up to the O(h^2)
# error of the trapezoid convolution; the printed variants do not.
for family, param in (("reduced", 1.0), ("reduced", -1.0), ("modified", 0.5), ("modified", 4.0)):
    good = verify_exact(ExactWave(family, param), 4096)
    bad = verify_exact(ExactWave(family, param, printed=True), 4096)
    print(f"{family:8s} param={param:5.1f}: corrected {good:.1e}, printed {bad:.2f}")

# %% Halving h divides the residual by four.
w = ExactWave("reduced", 1.0)
r = [verify_exact(w, n) for n in (1024, 2048, 4096)]
print("residual ratios:", [round(r[i] / r[i + 1], 2) for i in range(2)])

# %% D^{-2} is convolution with a piecewise quadratic.
g = TorusGrid(1000)
print(f"\nmax |K - series(1e5)|   = {np.max(np.abs(kernel_K(g.nodes) - kernel_K_series(g, 10**5))):.1e}")

# %% 1/(c + beta D^2) is convolution with a cosh profile of rate sqrt(c/beta).
for beta, c in ((1, 1), (0.5, 0.2), (2, 3)):
    series = kernel_G_series(g, beta, c, 10**6)
    print(
        f"beta={beta}, c={c}: cosh form {np.max(np.abs(kernel_G(g.nodes, beta, c) - series)):.1e}, "
        f"c/beta variant {np.max(np.abs(kernel_G_printed(g.nodes, beta, c) - series)):.2f}"
    )
print(f"(slope of the peaked wave at the crest: pi/3 = {math.pi / 3:.4f})")
