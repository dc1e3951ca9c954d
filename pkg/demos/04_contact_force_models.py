"""External contact-force regression over three signal subsets.

Collects the (plate distance x temperature limit) grid, fits the cubic
polynomial per subset, and prints the cross-validated error comparison:
the resistance-based and temperature-based variants are close, dropping
either hurts differently.
"""

import numpy as np

from smasense import estimators as E, poly
from smasense.datasets import ContactPlan, ci_scale, generate_contact_dataset
from smasense.plant import PlantParams

params = PlantParams()
ds = generate_contact_dataset(ci_scale(ContactPlan(seed=11)), params)
print(f"{len(ds)} rows over 16 grid cells; contact fraction {ds.contact.mean():.2f}")
print(f"external force range: 0 .. {ds.f_ext_n.max():.2f} N\n")

cols = ds.columns()
print("signal subset | held-out mae [N]")
print("--------------|-----------------")
for subset in ("rttheta", "rtheta", "ttheta"):
    X = E.contact_inputs(cols, subset)
    names = E.SIGNAL_SUBSETS[subset]
    report = E.cross_validate(
        lambda Xtr, ytr: poly.fit_poly(Xtr, ytr, 3, names),
        poly.predict_many, X, ds.f_ext_n, folds=3, seed=0,
    )
    label = "{" + ",".join(names) + "}"
    print(f"{label:13s} | {report.mean_abs_error:.4f}")

model = E.fit_contact_model(cols, ds.f_ext_n, "rttheta", degree=3)
pred = poly.predict_many(model, E.contact_inputs(cols, "rttheta"))
worst = np.argsort(np.abs(pred - ds.f_ext_n))[-3:]
print("\nthree worst rows (true vs predicted N):")
for i in worst:
    print(f"  T={ds.t_degc[i]:6.1f}  theta={np.degrees(ds.theta_rad[i]):5.1f} deg  "
          f"{ds.f_ext_n[i]:.3f} vs {pred[i]:.3f}")
