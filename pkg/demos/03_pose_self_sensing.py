"""Pose self-sensing from temperature and resistance, no contact.

Collects the 600-row free-motion set by motor babbling, converts the
measured bend angles to muscle-force labels, fits the cold/hot
switching polynomial, and cross-validates it.  The fitted surfaces are
rendered against the raw samples.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from smasense import estimators as E
from smasense.datasets import NoContactPlan, generate_nocontact_dataset
from smasense.plant import PlantParams

params = PlantParams()
ds = generate_nocontact_dataset(NoContactPlan(seed=7), params)
lab = E.label_sma_force(ds.theta_rad, params.limb)
t, r, f = ds.t_degc[lab.kept], ds.r_ohm[lab.kept], lab.f_sma
cold, hot = E.split_hot_cold(t, r)
print(f"{len(ds)} rows collected; {cold.size} cold / {hot.size} hot")

model = E.fit_pose_model(t, r, f, params.limb)
X = np.column_stack([t, r])
report = E.cross_validate(
    lambda Xtr, ytr: E.fit_pose_model(Xtr[:, 0], Xtr[:, 1], ytr, params.limb),
    lambda m, Xq: E.predict_sma_force(m, Xq[:, 0], Xq[:, 1]),
    X, f, folds=3, seed=0,
)
print(f"held-out: {report.mean_abs_error:.3f} N, {report.mean_pct_error:.2f} %")
for fold in report.folds:
    print(f"  fold {fold.fold}: test mae {fold.test_mae:.3f} N over {fold.n_test} rows")

pred = E.predict_sma_force(model, t, r)
theta_hat = E.predict_pose(model, t[:5], r[:5])
print("first five poses, measured vs estimated (deg):")
for meas, est in zip(np.degrees(ds.theta_rad[lab.kept][:5]), np.degrees(theta_hat)):
    print(f"  {meas:6.2f}  {est:6.2f}")

fig = plt.figure(figsize=(9, 3.5))
ax = fig.add_subplot(121, projection="3d")
ax.scatter(t[cold], r[cold], f[cold], s=4, c="tab:blue", label="cold")
ax.scatter(t[hot], r[hot], f[hot], s=4, c="tab:orange", label="hot")
ax.set_xlabel("T [degC]")
ax.set_ylabel("R [ohm]")
ax.set_zlabel("muscle force [N]")
ax.legend()
ax2 = fig.add_subplot(122)
ax2.scatter(f, pred, s=4)
lims = [0, max(f.max(), pred.max())]
ax2.plot(lims, lims, "k--", lw=0.8)
ax2.set_xlabel("labeled force [N]")
ax2.set_ylabel("predicted force [N]")
fig.tight_layout()
fig.savefig("demos_pose_self_sensing.png", dpi=120)
print("wrote demos_pose_self_sensing.png")
