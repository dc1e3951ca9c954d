"""Constant-curvature beam statics: angle, force, and plate contact.

Reproduces the bench numbers for the prototype limb (zeta = 4.1767,
1.07 N of muscle force at 15 degrees) and sweeps the contact statics
against a plate to show the force picked up once the tip lands.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from smasense import beam

proto = beam.LimbParams(elastic_modulus=1.79, width=60, thickness=3.5, length=105, moment_arm=3.5)
print(f"prototype limb: I = {proto.area_moment:.3f} mm^4, zeta = {proto.zeta:.4f} N")
print(f"muscle force at 15 deg: {beam.sma_force_from_angle(math.radians(15), proto.zeta):.4f} N "
      "(bench report: 1.06 N)")
print(f"tip displacement at 15 deg: {beam.tip_displacement(math.radians(15), proto.length):.2f} mm")

# force -> pose round trip on the invertible branch
theta = math.radians(33.0)
f = beam.sma_force_from_angle(theta, proto.zeta)
back = beam.angle_from_force(f, proto.zeta)
print(f"round trip at 33 deg: force {f:.4f} N -> {math.degrees(back):.4f} deg")

# contact against a plate 20 mm out
forces = np.linspace(0, 3.0, 200)
free_disp, plate_force = [], []
for fi in forces:
    _, delta, f_ext = beam.contact_statics(fi, 20.0, proto)
    free_disp.append(delta)
    plate_force.append(f_ext)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
ax1.plot(forces, free_disp)
ax1.axhline(20.0, ls="--", c="gray")
ax1.set_xlabel("muscle force [N]")
ax1.set_ylabel("tip displacement [mm]")
ax1.set_title("tip held at the plate")
ax2.plot(forces, plate_force)
ax2.set_xlabel("muscle force [N]")
ax2.set_ylabel("contact force [N]")
ax2.set_title("reaction grows past onset")
fig.tight_layout()
fig.savefig("demos_beam_statics.png", dpi=120)
print("wrote demos_beam_statics.png")
