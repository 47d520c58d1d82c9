"""Jensen-type gap divergences for quasiconvex and quasiconcave generators.

All four divergences are plain formulas valid for any generator; only the
sign guarantees (nonnegativity, law of the indiscernibles) need the declared
class, so a class mismatch warns instead of raising.
"""

from __future__ import annotations

import math
import warnings

from .core import (
    Generator,
    GeneratorClassWarning,
    NonPositiveError,
    as_vector,
    check_same_dim,
    eval_generator,
    interpolate,
)


def validate_skew(alpha: float) -> float:
    """Skew parameters live strictly inside (0, 1)."""
    a = float(alpha)
    if not 0.0 < a < 1.0:
        raise ValueError(f"skew alpha must lie in (0, 1), got {a}")
    return a


def _three_values(Q: Generator, theta, theta_p, alpha: float):
    t, tp = as_vector(theta), as_vector(theta_p)
    check_same_dim(t, tp)
    qt = eval_generator(Q, t)
    qtp = eval_generator(Q, tp)
    qmid = eval_generator(Q, interpolate(t, tp, alpha))
    return qt, qtp, qmid


def qcvx_jensen(Q: Generator, theta, theta_p, alpha: float) -> float:
    """max{Q(theta), Q(theta_p)} - Q((1-alpha)*theta + alpha*theta_p).

    Nonnegative for strictly quasiconvex Q, zero iff the points coincide.
    """
    a = validate_skew(alpha)
    if Q.declared_class == "quasiconcave":
        warnings.warn(
            f"qcvx_jensen with quasiconcave generator {Q.name or '?'}: "
            "sign guarantees do not apply",
            GeneratorClassWarning,
            stacklevel=2,
        )
    qt, qtp, qmid = _three_values(Q, theta, theta_p, a)
    return max(qt, qtp) - qmid


def qccv_jensen(H: Generator, theta, theta_p, alpha: float) -> float:
    """H((1-alpha)*theta + alpha*theta_p) - min{H(theta), H(theta_p)}.

    Equals qcvx_jensen of the negated generator.
    """
    a = validate_skew(alpha)
    if H.declared_class in ("convex", "quasiconvex"):
        warnings.warn(
            f"qccv_jensen with {H.declared_class} generator {H.name or '?'}: "
            "sign guarantees do not apply",
            GeneratorClassWarning,
            stacklevel=2,
        )
    ht, htp, hmid = _three_values(H, theta, theta_p, a)
    return hmid - min(ht, htp)


def log_ratio_gap(Q: Generator, theta, theta_p, alpha: float) -> float:
    """-log( Q(midpoint) / max{Q(theta), Q(theta_p)} ).

    Requires the values actually used to be strictly positive; a vanishing or
    negative generator value is reported as an error since the ratio gap is
    then undefined.
    """
    a = validate_skew(alpha)
    qt, qtp, qmid = _three_values(Q, theta, theta_p, a)
    top = max(qt, qtp)
    if qmid <= 0.0:
        raise NonPositiveError(
            f"log_ratio_gap: generator value {qmid} at the interpolated point"
        )
    if top <= 0.0:
        raise NonPositiveError(f"log_ratio_gap: endpoint maximum {top} is not positive")
    return -math.log(qmid / top)


def extended_jensen(Q: Generator, theta, theta_p, alpha: float) -> float:
    """(1-alpha)*Q(theta) + alpha*Q(theta_p) - Q(interpolation).

    The ordinary skewed Jensen gap, extended to arbitrary generators; may be
    negative when Q is not convex (e.g. Q = log).
    """
    a = validate_skew(alpha)
    qt, qtp, qmid = _three_values(Q, theta, theta_p, a)
    return (1.0 - a) * qt + a * qtp - qmid
