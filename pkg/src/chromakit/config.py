import os

DEFAULT_MAX_ORDER = 48
ENV_MAX_ORDER = "CHROMAKIT_MAX_ORDER"


def max_order():
    """Order cap for operator tables; ``CHROMAKIT_MAX_ORDER`` overrides it."""
    raw = os.environ.get(ENV_MAX_ORDER)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_ORDER
    value = int(raw)
    if value < 0:
        raise ValueError(f"{ENV_MAX_ORDER} must be non-negative, got {value}")
    return value
