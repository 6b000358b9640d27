# %% [markdown]
# # Picking a cycle and a probability
#
# A random-interval schedule checks once per cycle of length T whether to arm,
# succeeding with probability p. The mean interval is T/p and the standard
# deviation is (T/p)·sqrt(1 - p). Short cycles with small p look exponential.
# The solver searches cycle lengths on the step grid and keeps the pair that
# hits the requested mean while staying close to a memoryless spread.

# %%
import numpy as np

from schedsim import ScheduleSpec, inter_arming_times, solve_cycle_params

for x in (5, 7, 10, 15, 30, 60):
    r = solve_cycle_params(x)
    print(f"x={x:>3}s  T={r.T:.3f}  p={r.p:.5f}  mean_err={r.mean_err:.1e}  sd/x={r.sd_ratio:.4f}")

# %% [markdown]
# A coarse cycle gives away the geometric staircase: the sd falls short of
# the mean. Shrinking T at a fixed mean pushes the ratio towards one.

# %%
for T in (1.0, 0.25, 0.05):
    spec = ScheduleSpec.from_cycle("RI", T, T / 5)
    iat = inter_arming_times(spec, 50_000, 0.005, rng=0)
    print(f"T={T:<5} mean={iat.mean():.3f}s  sd/mean={iat.std() / iat.mean():.3f}")

# %% [markdown]
# Sizes that cannot be met are reported, not approximated.

# %%
from schedsim import InfeasibleError

try:
    solve_cycle_params(0.001)
except InfeasibleError as exc:
    print("infeasible:", exc)

# %%
# histogram of one sample, in 1 s bins
iat = inter_arming_times(ScheduleSpec.ri(5), 20_000, 0.005, rng=1)
counts, edges = np.histogram(iat, bins=np.arange(0, 21))
for lo, c in zip(edges[:-1], counts):
    print(f"{lo:>4.0f}s {'#' * (c // 100)}")
