"""Perfect-gas thermodynamics and the entropy machinery built on it.

State layout convention used throughout the package: states are numpy
arrays whose last axis has length 3.

* primitive   ``w = (rho, u, p)``
* conservative ``q = (rho, rho*u, rho*e_t)`` with ``e_t = e + u^2/2``
* entropy variables ``v = (v1, v2, v3)`` for the pair
  ``U = -rho*S/(gamma-1)``, ``F = -rho*u*S/(gamma-1)``,
  ``S = ln p - gamma*ln rho``

All functions broadcast over leading axes, so a single state ``(3,)``
and a field ``(n_cells, 3)`` go through the same code path.  Arithmetic
is dtype-preserving: feeding ``np.longdouble`` states yields extended
precision results (used by the entropy-conservation certifier).
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError

#: index names for primitive / conservative / entropy-variable arrays
RHO, VEL, PRE = 0, 1, 2
MOM, ENER = 1, 2


@dataclass(frozen=True)
class GasParams:
    """Ratio of specific heats; the only gas constant the model needs."""

    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")


def _check_positive(name, arr, context):
    arr = np.asarray(arr)
    bad = ~(arr > 0.0) | ~np.isfinite(arr)
    if np.any(bad):
        values = np.asarray(arr)[bad].ravel()[:5]
        raise InvalidStateError(
            f"{context}: nonpositive {name} (first offenders: {values})",
            values=values,
        )


def validate_prim(w, context="state"):
    """Raise InvalidStateError unless rho > 0 and p > 0 everywhere."""
    w = np.asarray(w)
    _check_positive("density", w[..., RHO], context)
    _check_positive("pressure", w[..., PRE], context)
    return w


def validate_cons(q, context="state"):
    """Raise InvalidStateError unless rho > 0 and derived p > 0."""
    q = np.asarray(q)
    _check_positive("density", q[..., RHO], context)
    return q


def cons_is_valid(q, gp):
    """Vectorized admissibility test (no exception), True iff all cells valid."""
    q = np.asarray(q)
    rho = q[..., RHO]
    p = (gp.gamma - 1.0) * (q[..., ENER] - 0.5 * q[..., MOM] ** 2 / np.where(rho > 0, rho, 1.0))
    ok = (rho > 0.0) & (p > 0.0) & np.all(np.isfinite(q), axis=-1)
    return bool(np.all(ok))


def prim_to_cons(w, gp):
    """(rho, u, p) -> (rho, rho*u, rho*e_t)."""
    w = validate_prim(w, "prim_to_cons")
    rho, u, p = w[..., RHO], w[..., VEL], w[..., PRE]
    ener = p / (gp.gamma - 1.0) + 0.5 * rho * u**2
    return np.stack([rho, rho * u, ener], axis=-1)


def cons_to_prim(q, gp):
    """(rho, rho*u, rho*e_t) -> (rho, u, p); raises if rho or p nonpositive."""
    q = validate_cons(q, "cons_to_prim")
    rho = q[..., RHO]
    u = q[..., MOM] / rho
    p = (gp.gamma - 1.0) * (q[..., ENER] - 0.5 * rho * u**2)
    _check_positive("pressure", p, "cons_to_prim")
    return np.stack([rho, u, p], axis=-1)


def sound_speed(w, gp):
    w = np.asarray(w)
    return np.sqrt(gp.gamma * w[..., PRE] / w[..., RHO])


def max_wave_speed(w, gp):
    """max(|u| + a) over all states, the usual CFL speed."""
    w = np.asarray(w)
    return float(np.max(np.abs(w[..., VEL]) + sound_speed(w, gp)))


def physical_flux(w, gp):
    """Inviscid flux (rho*u, rho*u^2 + p, rho*u*h_t)."""
    w = validate_prim(w, "physical_flux")
    rho, u, p = w[..., RHO], w[..., VEL], w[..., PRE]
    ener = p / (gp.gamma - 1.0) + 0.5 * rho * u**2
    return np.stack([rho * u, rho * u**2 + p, u * (ener + p)], axis=-1)


def specific_entropy(w, gp):
    """S = ln p - gamma ln rho."""
    w = np.asarray(w)
    return np.log(w[..., PRE]) - gp.gamma * np.log(w[..., RHO])


def entropy_pair(w, gp):
    """Entropy function and entropy flux (U, F) = -(rho S, rho u S)/(gamma-1).

    This pair is convex in the conservative variables and compatible with
    the temperature-free symmetrization of the Euler system (Harten;
    Hughes, Franca & Mallet 1986).
    """
    w = validate_prim(w, "entropy_pair")
    s = specific_entropy(w, gp)
    ufun = -w[..., RHO] * s / (gp.gamma - 1.0)
    return ufun, ufun * w[..., VEL]


def entropy_vars(w, gp):
    """Gradient of U with respect to conservative variables.

    v = [(gamma - S)/(gamma - 1) - rho u^2/(2p),  rho u/p,  -rho/p]
    """
    w = validate_prim(w, "entropy_vars")
    rho, u, p = w[..., RHO], w[..., VEL], w[..., PRE]
    s = specific_entropy(w, gp)
    v1 = (gp.gamma - s) / (gp.gamma - 1.0) - 0.5 * rho * u**2 / p
    return np.stack([v1, rho * u / p, -rho / p], axis=-1)


def vars_to_prim(v, gp):
    """Invert entropy variables to primitives, in closed form.

    u = -v2/v3, rho/p = -v3, and S follows from v1; requires v3 < 0,
    which characterizes the admissible set for this entropy pair.
    """
    v = np.asarray(v)
    v3 = v[..., 2]
    bad = ~(v3 < 0.0) | ~np.all(np.isfinite(v), axis=-1)
    if np.any(bad):
        values = v[bad].reshape(-1, 3)[:5]
        raise InvalidStateError(
            f"vars_to_prim: v3 must be negative (first offenders: {values})",
            values=values,
        )
    u = -v[..., 1] / v3
    s = gp.gamma - (gp.gamma - 1.0) * (v[..., 0] - 0.5 * v3 * u**2)
    # S = (1-gamma) ln p - gamma ln(-v3)  =>  solve for p, then rho = -v3 p
    p = np.exp((s + gp.gamma * np.log(-v3)) / (1.0 - gp.gamma))
    return np.stack([-v3 * p, u, p], axis=-1)


def flux_potentials(w):
    """Flux potentials (psi, phi) = (rho*u, rho).

    psi = v.f - F and phi = v.q - U; both identities collapse to these
    two moments for the pair used here.
    """
    w = np.asarray(w)
    return w[..., RHO] * w[..., VEL], w[..., RHO]


def z_vars(w):
    """Parabolized variables z = (sqrt(rho/p), sqrt(rho/p)*u, sqrt(rho*p)).

    The entropy-conservation jump conditions become linear in z, which is
    what makes closed-form conservative fluxes possible (Ismail & Roe 2009).
    """
    w = validate_prim(w, "z_vars")
    rho, u, p = w[..., RHO], w[..., VEL], w[..., PRE]
    z1 = np.sqrt(rho / p)
    return np.stack([z1, z1 * u, np.sqrt(rho * p)], axis=-1)


#: switch to the series branch of the logarithmic mean when
#: ((a-b)/(a+b))^2 drops below this; the quartic term is then < 1e-17
LOG_MEAN_SERIES_THRESHOLD = 1.0e-4


def arith_mean(a, b):
    return 0.5 * (np.asarray(a) + np.asarray(b))


def log_mean(a, b):
    """Logarithmic mean (a - b)/(ln a - ln b), stable for a ~ b.

    Uses the expansion of Ismail & Roe (2009): with f = (a-b)/(a+b) and
    z = f^2, the mean is (a+b)/2 / (1 + z/3 + z^2/5 + z^3/7 + ...);
    the series is used when z < LOG_MEAN_SERIES_THRESHOLD, the closed
    form otherwise.  Symmetric in (a, b) and exact for a == b.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    _check_positive("argument", a, "log_mean")
    _check_positive("argument", b, "log_mean")
    s = a + b
    f = (a - b) / s
    z = f * f
    series = 1.0 + z * (1.0 / 3.0 + z * (1.0 / 5.0 + z * (1.0 / 7.0)))
    with np.errstate(divide="ignore", invalid="ignore"):
        exact = np.log(a / b) / np.where(f == 0.0, 1.0, 2.0 * f)
    denom = np.where(z < LOG_MEAN_SERIES_THRESHOLD, series, exact)
    result = 0.5 * s / denom
    if result.ndim == 0:
        return result[()]
    return result
