import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import relaysim as rs

# first kernel call may trigger a numba compile; keep hypothesis from
# flagging it as a slow example
settings.register_profile(
    "relaysim",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("relaysim")


def norm_params(r: float, p0: float = 1.0) -> rs.SystemParams:
    """Normalized radio constants: N0*B = 1 W, unit geometry factors."""
    return rs.SystemParams(
        p0_watts=p0,
        bandwidth_hz=1.0,
        noise_psd_w_per_hz=1.0,
        spectral_efficiency_r=r,
        carrier_wavelength_m=1.0,
        antenna_gain_product=1.0,
        ref_distance_m=1.0,
        path_loss_exponent=2.0,
    )


def realization(hd, h, g) -> rs.ChannelRealization:
    return rs.ChannelRealization(
        float(hd), np.asarray(h, dtype=float), np.asarray(g, dtype=float)
    )


@pytest.fixture
def table1_params() -> rs.SystemParams:
    return rs.SystemParams.from_db_units()


@pytest.fixture(params=["numba", "numpy"])
def each_backend(request):
    """Run a test under both kernel backends."""
    rs.set_backend(request.param)
    yield request.param
    rs.set_backend(None)
