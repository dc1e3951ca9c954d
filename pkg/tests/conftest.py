import numpy as np
import pytest

from smasense import estimators, fileio
from smasense.datasets import (
    ContactPlan,
    NoContactPlan,
    ci_scale,
    generate_contact_dataset,
    generate_nocontact_dataset,
)
from smasense.plant import PlantParams


@pytest.fixture(scope="session")
def default_params():
    return PlantParams()


@pytest.fixture(scope="session")
def df600(default_params):
    """The 600-row free-motion set used across the suite."""
    return generate_nocontact_dataset(NoContactPlan(seed=7), default_params)


@pytest.fixture(scope="session")
def dc_ci(default_params):
    """CI-scale contact grid: all 16 cells, every 10th frame."""
    return generate_contact_dataset(ci_scale(ContactPlan(seed=11)), default_params)


@pytest.fixture(scope="session")
def pose_model(df600, default_params):
    lab = estimators.label_sma_force(df600.theta_rad, default_params.limb)
    return estimators.fit_pose_model(
        df600.t_degc[lab.kept], df600.r_ohm[lab.kept], lab.f_sma, default_params.limb
    )


@pytest.fixture(scope="session")
def demo_contact_model(dc_ci, df600):
    """{R,T,theta} cubic trained on contact + free motion, as served."""
    cols = {k: np.concatenate([dc_ci.columns()[k], df600.columns()[k]]) for k in dc_ci.columns()}
    f_ext = np.concatenate([dc_ci.f_ext_n, df600.f_ext_n])
    return estimators.fit_contact_model(cols, f_ext, "rttheta", degree=3)


@pytest.fixture(scope="session")
def model_dir(tmp_path_factory, pose_model, demo_contact_model):
    d = tmp_path_factory.mktemp("models")
    fileio.write_model(pose_model, d / "pose.json")
    fileio.write_model(demo_contact_model, d / "contact.json")
    return d
