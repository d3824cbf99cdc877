import os

DEFAULT_CAP_DIM = 2**16
DEFAULT_EXPM_CAP = 1024
DEFAULT_MAX_STEPS = 10**6
DEFAULT_TOLERANCE = 1e-10


def cap_dim():
    """Dimension cap, overridable through ``QNET_CAP_DIM``."""
    raw = os.environ.get("QNET_CAP_DIM")
    if raw is None or raw == "":
        return DEFAULT_CAP_DIM
    value = int(raw)
    if value < 1:
        raise ValueError(f"QNET_CAP_DIM must be positive, got {raw!r}")
    return value
