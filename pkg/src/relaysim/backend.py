"""Kernel backend selection: numba-compiled loops or the pure-numpy twin.

The environment flag RELAYSIM_BACKEND picks the implementation:

    RELAYSIM_BACKEND=numba   use the compiled kernels (error if unavailable)
    RELAYSIM_BACKEND=numpy   force the vectorized numpy path
    unset / auto             numba when importable, else numpy

Both backends are kept bit-identical; ``set_backend`` overrides the flag at
runtime (used by tests and the benchmark).
"""

from __future__ import annotations

import os
from typing import NamedTuple

from . import _kernels_numpy
from .channel import SystemParams
from .energy import TrafficProfile, rate_factors

_ENV_VAR = "RELAYSIM_BACKEND"
_VALID = ("numba", "numpy", "auto")
_override: str | None = None


def _numba_module():
    try:
        from . import _kernels_numba

        return _kernels_numba
    except ImportError:
        return None


def set_backend(name: str | None) -> None:
    """Force a backend ('numba' or 'numpy'); None restores the env choice."""
    global _override
    if name is not None and name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    _override = name


def active_backend() -> str:
    """Name of the backend that kernel calls will use right now."""
    choice = _override or os.environ.get(_ENV_VAR, "auto").strip().lower() or "auto"
    if choice not in _VALID:
        raise ValueError(
            f"{_ENV_VAR} must be one of {_VALID}, got {choice!r}"
        )
    if choice == "numpy":
        return "numpy"
    mod = _numba_module()
    if mod is None:
        if choice == "numba":
            raise RuntimeError("numba backend requested but numba is not importable")
        return "numpy"
    return "numba"


def _kernels():
    return _kernels_numpy if active_backend() == "numpy" else _numba_module()


class SelectionConstants(NamedTuple):
    """Flat scalar arguments consumed by the energy/selection kernels."""

    p0: float
    th1: float
    thd: float
    ef: float
    ed: float
    inv2rb: float
    invrb: float
    zeta: float
    wm: float
    wr: float
    wb: float
    a_c: float
    b_c: float
    d_c: float


def selection_constants(
    params: SystemParams, profile: TrafficProfile
) -> SelectionConstants:
    rf = rate_factors(params)
    z = profile.zeta
    wm, wr, wb = profile.weight_ms, profile.weight_relay, profile.weight_bs
    return SelectionConstants(
        p0=params.p0_watts,
        th1=rf.th1,
        thd=rf.th_direct,
        ef=rf.ef_coef,
        ed=rf.ed_coef,
        inv2rb=rf.inv_2rb,
        invrb=rf.inv_rb,
        zeta=z,
        wm=wm,
        wr=wr,
        wb=wb,
        a_c=z * wm + (1.0 - z) * wr,
        b_c=z * wr + (1.0 - z) * wb,
        d_c=z * wm + (1.0 - z) * wb,
    )


def energy_selection_block(h_d, h, g, sc: SelectionConstants, cap: bool, over_gamma: bool):
    """Dispatch one block through the active backend's selection kernel."""
    return _kernels().energy_selection_block(
        h_d, h, g, *sc, cap, over_gamma
    )


def outage_block(h_d, h, g, thr_gain, thr_direct, rule_judrs: bool,
                 a_c: float, b_c: float, d_c: float, wr: float, e_ratio: float):
    """Dispatch one block through the active backend's outage kernel."""
    return _kernels().outage_block(
        h_d, h, g, thr_gain, thr_direct, rule_judrs, a_c, b_c, d_c, wr, e_ratio
    )
