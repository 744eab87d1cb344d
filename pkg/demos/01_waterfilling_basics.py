"""Water-filling on a single MIMO link, and what the KKT conditions look like.

Draws one 4x4 link, fills power across its eigenmodes under a colored-noise
covariance, and prints the per-mode powers next to the inverse channel gains
so the common water level is visible.  Ends with the two-player game where
each transmitter water-fills against the other's interference.
"""

import numpy as np

from swiptifc import draw_channel_set, iterative_waterfilling, waterfill
from swiptifc.linalg import inv_sqrt_psd, svd

rng = np.random.default_rng(7)
p = 10.0

h = (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))) / np.sqrt(2)
a = (rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))) / np.sqrt(2)
r_noise = np.eye(4) + a @ a.conj().T

tc = waterfill(h, r_noise, p)
print(f"budget {tc.budget:.3f} W, allocated {np.trace(tc.q).real:.6f} W")

# mode powers live on the right-singular vectors of the whitened channel
_, sv, v = svd(inv_sqrt_psd(r_noise) @ h)
powers = np.einsum("ji,jk,ki->i", v.conj(), tc.q, v).real
print("\nmode   gain s_i^2   1/s_i^2   power    power + 1/s_i^2")
for i, (s, pw) in enumerate(zip(sv, powers)):
    level = pw + 1.0 / s**2 if pw > 1e-9 else float("nan")
    print(f"{i:4d}   {s**2:9.4f}   {1 / s**2:7.4f}   {pw:6.4f}   {level:.6f}")
print("(active modes share one level; starved modes sit below it)")

# now the interference channel: both links water-fill against each other
cs = draw_channel_set(4, 4, [[1.0, 0.3], [0.3, 1.0]], seed=7)
game = iterative_waterfilling(cs, p)
r1, r2 = game.rates
print(f"\ntwo-link game: converged={game.converged} after {game.iterations} rounds")
print(f"rates {r1:.3f} + {r2:.3f} = {r1 + r2:.3f} bits/channel use")
print(f"last covariance change {game.deltas[-1]:.2e}")
