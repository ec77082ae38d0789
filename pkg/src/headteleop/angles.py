"""Angle wrapping helpers shared across the pipeline.

Every angle that crosses a module boundary lives in the canonical interval
(-180, 180] degrees so downstream consumers never see a wrap seam.
"""

from __future__ import annotations


def wrap_degrees(theta: float) -> float:
    """Wrap an angle in degrees into (-180, 180].

    In-range values pass through bit-identically; the float modulo would
    otherwise round angles within one ulp of zero onto 0.0.
    """
    if -180.0 < theta <= 180.0:
        return theta
    wrapped = theta % 360.0
    if wrapped > 180.0:
        wrapped -= 360.0
    return wrapped


def normalize_delta(theta: float, theta_c: float) -> float:
    """Signed angular difference theta - theta_c, wrapped into (-180, 180].

    Picks the minimal signed difference, so a head crossing the +/-180
    seam never looks like a full-circle excursion.
    """
    return wrap_degrees(theta - theta_c)
