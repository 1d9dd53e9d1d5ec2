import numpy as np
import pytest

from finsleroid import FinsleroidCharge, ScaleFactor, WarpedBackground
from finsleroid.verification import sample_line_elements


@pytest.fixture(scope="session")
def pd_background():
    return WarpedBackground(
        signature="PD",
        dimension=4,
        kappa1=1,
        scale_factor=ScaleFactor.exponential(0.3),
    )


@pytest.fixture(scope="session")
def sr_background():
    return WarpedBackground(
        signature="SR",
        dimension=4,
        kappa1=-1,
        scale_factor=ScaleFactor.exponential(0.3),
    )


@pytest.fixture(scope="session")
def pd_charge():
    return FinsleroidCharge(g=0.5, signature="PD")


@pytest.fixture(scope="session")
def sr_charge():
    return FinsleroidCharge(g=1.2, signature="SR")


@pytest.fixture(scope="session")
def pd_elements(pd_background, pd_charge):
    rng = np.random.default_rng(42)
    return sample_line_elements(pd_background, pd_charge, rng, 5)


@pytest.fixture(scope="session")
def sr_elements(sr_background, sr_charge):
    rng = np.random.default_rng(42)
    return sample_line_elements(sr_background, sr_charge, rng, 5)
