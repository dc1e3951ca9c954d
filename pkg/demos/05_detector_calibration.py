"""Contact-detector calibration: F_thresh sweep and the T_max limit.

Below the transformation band the resistance-based predictor matches
the temperature-based one; above it the resistance signal aliases and
the errors diverge.  The operational limit falls out of that sweep, and
the binary detector threshold is then calibrated below it.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from smasense import detector as D, estimators as E, poly
from smasense.datasets import ContactPlan, ci_scale, generate_contact_dataset
from smasense.plant import PlantParams

params = PlantParams()
ds = generate_contact_dataset(ci_scale(ContactPlan(seed=11)), params)
cols = ds.columns()

rows, limit = D.sweep_tmax(cols, ds.f_ext_n, subsets=("rttheta", "rtheta", "ttheta"), seed=0)
print("T_max | n     | {R,T,th} | {R,th}  | {T,th}")
for row in rows:
    if row.skipped:
        print(f"{row.t_max:5.0f} | {row.n_rows:5d} | skipped")
        continue
    print(f"{row.t_max:5.0f} | {row.n_rows:5d} | {row.mae['rttheta']:.4f}   "
          f"| {row.mae['rtheta']:.4f}  | {row.mae['ttheta']:.4f}")
print(f"\noperational limit for resistance-for-temperature: {limit:.0f} degC "
      f"(transformation band {params.a_s:.0f}..{params.a_f:.0f})")

# calibrate the binary detector below the limit, {R,theta} signals only
keep = np.flatnonzero(ds.t_degc <= limit)
sub = {k: v[keep] for k, v in cols.items()}
model = E.fit_contact_model(sub, ds.f_ext_n[keep], "rtheta", degree=3)
scores = poly.predict_many(model, E.contact_inputs(sub, "rtheta"))
calib = D.calibrate_threshold(scores, ds.contact[keep])
star = next(m for m in calib.metric_curves if m.f_thresh == calib.f_thresh_star)
print(f"F_thresh* = {calib.f_thresh_star:.3f} N  "
      f"(precision {star.precision:.3f}, recall {star.recall:.3f}, F1 {star.f1:.3f})")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
ts = [r.t_max for r in rows if not r.skipped]
for subset, c in (("rtheta", "tab:orange"), ("ttheta", "tab:green")):
    ax1.plot(ts, [r.mae[subset] for r in rows if not r.skipped], marker="o", ms=3,
             c=c, label="{" + ",".join(E.SIGNAL_SUBSETS[subset]) + "}")
ax1.axvline(limit, ls="--", c="gray")
ax1.set_xlabel("temperature cap [degC]")
ax1.set_ylabel("held-out mae [N]")
ax1.legend()
grid = [m.f_thresh for m in calib.metric_curves]
for field, c in (("precision", "tab:blue"), ("recall", "tab:red"), ("f1", "tab:purple")):
    ax2.plot(grid, [getattr(m, field) for m in calib.metric_curves], c=c, label=field)
ax2.axvline(calib.f_thresh_star, ls="--", c="gray")
ax2.set_xlabel("F_thresh [N]")
ax2.legend()
fig.tight_layout()
fig.savefig("demos_detector_calibration.png", dpi=120)
print("wrote demos_detector_calibration.png")
