"""Tensor-based channel estimation for RIS-assisted MIMO uplink."""

from ._risce import *  # noqa: F401,F403
from ._risce import Method, run_experiment, run_experiment_csv  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
