"""The human-contact demo, headless: push the limb, watch the LED.

Trains the served models in-process, replays a scripted push sequence
(0 -> 0.3 -> 0.8 -> 0 N), and prints the LED timeline.  For the live
version with the browser UI, fit the same models with the CLI and run
`smasense serve` (see the README).
"""

import numpy as np

from smasense import estimators as E, service
from smasense.datasets import (
    ContactPlan,
    NoContactPlan,
    ci_scale,
    generate_contact_dataset,
    generate_nocontact_dataset,
)
from smasense.plant import PlantParams

params = PlantParams()
print("collecting training data ...")
dc = generate_contact_dataset(ci_scale(ContactPlan(seed=11)), params)
df = generate_nocontact_dataset(NoContactPlan(seed=7), params)

lab = E.label_sma_force(df.theta_rad, params.limb)
pose = E.fit_pose_model(df.t_degc[lab.kept], df.r_ohm[lab.kept], lab.f_sma, params.limb)
cols = {k: np.concatenate([dc.columns()[k], df.columns()[k]]) for k in dc.columns()}
contact = E.fit_contact_model(cols, np.concatenate([dc.f_ext_n, df.f_ext_n]), "rttheta", 3)

script = """
600 {"type":"set_force","force_n":0.3}
650 {"type":"set_force","force_n":0.8}
700 {"type":"set_force","force_n":0.0}
"""
loop = service.DemoLoop(pose_model=pose, contact_model=contact, seed=3)
states = service.run_headless(loop, service.parse_replay_script(script), ticks=760)

print("tick | push  | F_ext_hat | led   | theta true/est [deg]")
for s in states[595:760:5]:
    print(f"{s.tick:4d} | {s.human_force:.2f}  | {s.f_ext_hat:+.3f}    | {s.led:5s} | "
          f"{np.degrees(s.theta_true):5.1f} / {np.degrees(s.theta_hat):5.1f}")

changes = [(s.tick, s.led) for i, s in enumerate(states) if i == 0 or states[i - 1].led != s.led]
print("\nLED transitions:", changes)
