# %% [markdown]
# # Pausing pays: feedback under RDRL
#
# On a random differential-reinforcement-of-low-rates schedule each response
# restarts the clock, so only long enough pauses are reinforced. Reinforcement
# first rises with response rate and then collapses. A difference of two
# exponentials fits that hump, and fixing its rates at e⁶/V and e⁵/V leaves a
# curve with no free parameters whose peak has a closed form.

# %%
import numpy as np

from schedsim import ScheduleSpec, SessionConfig, fit, rdrl_predictions, run_sweep
from schedsim.models import Family, RFFModel, evaluate

config = SessionConfig(duration=300, repetitions=40, rates=np.arange(0, 201, 5.0), seed=2)
points = run_sweep(config, ScheduleSpec.rdrl(8))
B = np.array([p.B_nominal for p in points])
R = np.array([p.R_mean for p in points])
i = R.argmax()
print(f"simulated peak: R={R[i]:.3f}/min at B={B[i]:.0f}/min")

# %%
pred = rdrl_predictions(8)
print(f"closed form:    R={pred.Rm:.3f}/min at B={pred.Bm:.2f}/min, inflection at B={pred.Bi:.2f}")

# %% [markdown]
# Fit both forms. The two-parameter version should land near the reduced law.

# %%
free = fit("rdrl", B, R, size=8)
fixed = fit("rdrl_reduced", B, R, size=8)
print(f"free:    b={free.params['b']:.2f} (e^6/8={np.e**6 / 8:.2f})  "
      f"c={free.params['c']:.2f} (e^5/8={np.e**5 / 8:.2f})  R2={free.r2:.4f}")
print(f"reduced: R2={fixed.r2:.4f}")

# %%
model = RFFModel(Family.RDRL_2EXP, free.params)
for b in (0, 15, 30, 60, 120, 200):
    print(f"B={b:>3}  simulated={R[B == b][0]:.3f}  fitted={evaluate(model, b):.3f}")
