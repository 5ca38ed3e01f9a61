"""From XXZ anisotropy to the dimensionless disorder coupling g.

The exact Bethe-ansatz velocity and Luttinger parameter feed
g = 8 pi K gamma / u^2 with gamma = sigma_h^2 / pi^2. Attractive
anisotropy (delta < 0) slows the sound velocity and raises K, so the same
microscopic disorder produces a much larger g there.
"""
from tllfp.model import ModelParams

print(f"{'delta':>6} {'u':>8} {'K':>8} {'g(0.05)':>10} {'g(0.2)':>10}")
for delta in (-0.9, -0.7, -0.5, 0.0, 0.5, 0.9):
    a = ModelParams(delta, sigma_h=0.05).luttinger()
    b = ModelParams(delta, sigma_h=0.2).luttinger()
    print(f"{delta:6.2f} {a.u:8.4f} {a.K:8.4f} {a.g:10.3e} {b.g:10.3e}")
