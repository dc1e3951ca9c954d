"""Plant hysteresis loops and the supervisory temperature limit.

Sweeps the phase fraction through a heat/cool cycle (major loop plus a
minor loop) and then slams the supervised plant with an absurd input to
show the temperature parking just under the limit.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from smasense.plant import PlantParams, Scenario, initial_state, phase_update, step

params = PlantParams()

# major loop with a minor-loop excursion on the way up
path = np.concatenate([
    np.linspace(22, 88, 250),       # heat into the band
    np.linspace(88, 78, 60),        # back off (minor loop)
    np.linspace(78, 115, 200),      # finish the transformation
    np.linspace(115, 22, 350),      # cool out
])
st = initial_state(params)
xs, ys = [], []
for t in path:
    st = phase_update(st, float(t), params)
    xs.append(t)
    ys.append(st.xi)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
ax1.plot(xs, ys, lw=0.8)
ax1.set_xlabel("temperature [degC]")
ax1.set_ylabel("austenite fraction")
ax1.set_title("hysteresis with a minor loop")

# supervised step response: u_nom ridiculous, T capped anyway
scen = Scenario(duration=2500, setpoint_schedule=((0.0, 2500),), seed=0, t_max_limit=135.0)
st = initial_state(params)
rng = np.random.default_rng(0)
temps = []
for _ in range(scen.duration):
    st, _ = step(st, 1e6, scen, params, rng)
    temps.append(st.T)
print(f"max supervised temperature: {max(temps):.6f} degC (limit 135)")
ax2.plot(np.arange(len(temps)) * scen.tick, temps)
ax2.axhline(135.0, ls="--", c="r")
ax2.set_xlabel("time [s]")
ax2.set_ylabel("temperature [degC]")
ax2.set_title("supervisor holds the limit")
fig.tight_layout()
fig.savefig("demos_hysteresis_safety.png", dpi=120)
print("wrote demos_hysteresis_safety.png")
