import math
from pathlib import Path

import pytest

from flatcrane import (
    CraneParams,
    StateLimits,
    slew_operation,
    trolley_operation,
)

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture(scope="session")
def params():
    return CraneParams(m_h=0.5, m_l=1.0, d_h=3.0, d_l=1.5, g=9.8)


@pytest.fixture(scope="session")
def limits():
    deg = math.radians
    return StateLimits(trolley_vel=0.5, trolley_acc=0.5,
                       slew_vel=deg(20.0), slew_acc=deg(20.0),
                       alpha_h=deg(2.5), beta_h=deg(2.5),
                       alpha_l=deg(2.5), beta_l=deg(2.5))


@pytest.fixture(scope="session")
def trolley_op():
    return trolley_operation(d_ti=1.0, d_tf=2.0, d_h=3.0, t_max=8.0)


@pytest.fixture(scope="session")
def slew_op():
    return slew_operation(theta_si=math.radians(30.0), theta_sf=math.radians(60.0),
                          d_h=3.0, d_t=1.0, t_max=8.0)


@pytest.fixture(scope="session")
def trolley_config_path():
    return CONFIG_DIR / "trolley.json"


@pytest.fixture(scope="session")
def slew_config_path():
    return CONFIG_DIR / "slew.json"
