"""Entropy-conservative interface fluxes in space and in time.

An interface flux ``f*`` between left/right states is entropy
conservative (EC) when the jump condition ``[v] . f* = [psi]`` holds,
with ``psi = rho*u`` the spatial flux potential (Tadmor 1987).  The
same algebra applies across a time-slab interface with the state vector
playing the role of the flux and ``phi = rho`` as the temporal
potential: ``[v] . u* = [phi]``.

Two flux families are provided for each direction:

* closed-form fluxes built from arithmetic/logarithmic averages of the
  z-variables (the spatial one is Roe's EC flux), exact up to roundoff;
* quadrature fluxes integrating the physical flux (or the state) along
  the straight segment between the two entropy-variable states, EC up
  to the quadrature error.

``ec_residual`` is the certifier every EC claim in the test suite runs
through; it evaluates the jump condition in extended precision so its
own roundoff stays well below the certified tolerances.
"""

from dataclasses import dataclass, field

import numpy as np

from . import gas
from .errors import PathInadmissibleError


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss-Legendre nodes/weights mapped to [0, 1]; weights sum to 1."""

    order: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("quadrature order must be >= 1")


_RULE_CACHE = {}


def gauss_legendre(order):
    """Return the (cached) order-point Gauss-Legendre rule on [0, 1]."""
    rule = _RULE_CACHE.get(order)
    if rule is None:
        x, w = np.polynomial.legendre.leggauss(order)
        rule = QuadratureRule(order, 0.5 * (x + 1.0), 0.5 * w)
        _RULE_CACHE[order] = rule
    return rule


def _z_averages(wl, wr):
    zl, zr = gas.z_vars(wl), gas.z_vars(wr)
    zbar = gas.arith_mean(zl, zr)
    z1ln = gas.log_mean(zl[..., 0], zr[..., 0])
    z3ln = gas.log_mean(zl[..., 2], zr[..., 2])
    return zbar, z1ln, z3ln


def roe_ec_spatial_flux(wl, wr, gp):
    """Closed-form EC spatial flux (Roe; see also Ismail & Roe 2009).

    f1 = mean(z2) * logmean(z3)
    f2 = (mean(z3) + f1 * mean(z2)) / mean(z1)
    f3 = (-f1 * (1+gamma)/(1-gamma) / logmean(z1) + f2 * mean(z2)) / (2 mean(z1))
    """
    zbar, z1ln, z3ln = _z_averages(wl, wr)
    z1b, z2b, z3b = zbar[..., 0], zbar[..., 1], zbar[..., 2]
    f1 = z2b * z3ln
    f2 = (z3b + f1 * z2b) / z1b
    f3 = (0.5 / z1b) * (-f1 * (1.0 + gp.gamma) / (1.0 - gp.gamma) / z1ln + f2 * z2b)
    return np.stack([f1, f2, f3], axis=-1)


def roe_ec_temporal_flux(w_past, w_future, gp):
    """Closed-form EC temporal flux; symmetric in its two arguments.

    Solving [v] . u* = [phi] in the z-variables gives

    u1 = mean(z1) * logmean(z3)
    u2 = u1 * mean(z2) / mean(z1)
    u3 = (-u1 * (1+gamma)/(1-gamma) / logmean(z1) + u2 * mean(z2)
          - mean(z3)) / (2 mean(z1))

    At equal states this reduces to the conservative state itself.
    """
    zbar, z1ln, z3ln = _z_averages(w_past, w_future)
    z1b, z2b, z3b = zbar[..., 0], zbar[..., 1], zbar[..., 2]
    u1 = z1b * z3ln
    u2 = u1 * z2b / z1b
    u3 = (0.5 / z1b) * (
        -u1 * (1.0 + gp.gamma) / (1.0 - gp.gamma) / z1ln + u2 * z2b - z3b
    )
    return np.stack([u1, u2, u3], axis=-1)


def path_states(vl, vr, rule):
    """States along the straight entropy-variable segment at the rule's nodes.

    Returns an array of shape (order,) + vl.shape.  Raises
    PathInadmissibleError identifying the first offending node if the
    segment leaves the admissible set (v3 >= 0) anywhere; clamping here
    would silently corrupt every EC certification downstream.
    """
    vl = np.asarray(vl, dtype=float)
    vr = np.asarray(vr, dtype=float)
    xi = rule.nodes.reshape((-1,) + (1,) * vl.ndim)
    v = vl[None, ...] + xi * (vr - vl)[None, ...]
    v3 = v[..., 2]
    bad = ~(v3 < 0.0)
    if np.any(bad):
        node = int(np.nonzero(np.any(bad.reshape(rule.order, -1), axis=1))[0][0])
        raise PathInadmissibleError(
            f"entropy-variable path leaves admissible set at node {node} "
            f"(xi = {rule.nodes[node]:.6f})",
            node=node,
            xi=float(rule.nodes[node]),
        )
    return v


def tadmor_ec_spatial_flux(vl, vr, rule, gp):
    """Quadrature EC spatial flux: integral of f(v(xi)) along the segment."""
    v = path_states(vl, vr, rule)
    fvals = gas.physical_flux(gas.vars_to_prim(v, gp), gp)
    return np.tensordot(rule.weights, fvals, axes=(0, 0))


def tadmor_ec_temporal_flux(v_past, v_future, rule, gp):
    """Quadrature EC temporal flux: integral of u(v(xi)) along the segment."""
    v = path_states(v_past, v_future, rule)
    uvals = gas.prim_to_cons(gas.vars_to_prim(v, gp), gp)
    return np.tensordot(rule.weights, uvals, axes=(0, 0))


def ec_residual(flux_value, vl, vr, kind, gp):
    """Jump-condition defect [v].flux - [psi] (space) or [v].flux - [phi] (time).

    Evaluated in extended precision so that the certifier's own roundoff
    is negligible against the 1e-11-scale tolerances it certifies.
    Equal states give exactly zero.
    """
    if kind not in ("space", "time"):
        raise ValueError(f"kind must be 'space' or 'time', got {kind!r}")
    vl = np.asarray(vl, dtype=np.longdouble)
    vr = np.asarray(vr, dtype=np.longdouble)
    flux_value = np.asarray(flux_value, dtype=np.longdouble)
    wl = gas.vars_to_prim(vl, gp)
    wr = gas.vars_to_prim(vr, gp)
    psi_l, phi_l = gas.flux_potentials(wl)
    psi_r, phi_r = gas.flux_potentials(wr)
    pot_jump = (psi_r - psi_l) if kind == "space" else (phi_r - phi_l)
    res = np.einsum("...k,...k->...", vr - vl, flux_value) - pot_jump
    return np.asarray(res, dtype=float)[()]
