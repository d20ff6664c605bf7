"""Mode-decomposed radial functionals and their two equivalent forms.

Each functional of a degree-k mode can be written either in terms of the raw
radial coefficient u_k (``Form.RAW``) or, after stripping the leading monomial
u_k = r^k v_k, in terms of v_k (``Form.REDUCED``). Both assemblies are exact
identities on (0, ∞); evaluating both on the same data is the package's main
self-check. Values are reported without the sphere-measure factor (the
orthonormal angular basis absorbs it); sums over modes give full-space
integrals directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DegenerateProfileError,
    DivergentIntegralError,
    FormUnavailableError,
    SingularWeightError,
    UsageError,
)
from .profiles import (
    AnalyticProfile,
    MixtureProfile,
    Mode,
    Profile,
    SampledProfile,
    shift_power,
)
from .quadrature import (
    CLOSED_FORM,
    DEFAULT_CONFIG,
    QuadratureConfig,
    WeightedSeminorm,
    _gl_nodes,
    integrate,
)


class FunctionalId(str, Enum):
    GRAD_ENERGY = "grad_energy"                          # ∫ |∇u|^2
    WEIGHTED_GRAD_ENERGY = "weighted_grad_energy"        # ∫ |x|^2 |∇u|^2
    COULOMB_GRAD_ENERGY = "coulomb_grad_energy"          # ∫ |∇u|^2 / |x|
    LAPLACIAN_ENERGY = "laplacian_energy"                # ∫ |Δu|^2
    RADIAL_GRAD_ENERGY = "radial_grad_energy"            # ∫ |∂_r u|^2
    WEIGHTED_RADIAL_GRAD_ENERGY = "weighted_radial_grad_energy"
    COULOMB_RADIAL_GRAD_ENERGY = "coulomb_radial_grad_energy"
    RADIAL_LAPLACIAN_ENERGY = "radial_laplacian_energy"  # ∫ |∂_rr u + (N-1)/r ∂_r u|^2
    L2_NORM = "l2_norm"                                  # ∫ |u|^2


class Form(str, Enum):
    RAW = "raw"          # integrals of the coefficient u_k
    REDUCED = "reduced"  # integrals of v_k = u_k / r^k


#: Functionals that have both a raw and a reduced expression.
BOTH_FORMS = tuple(f for f in FunctionalId if f is not FunctionalId.RADIAL_LAPLACIAN_ENERGY)


def _term_table(fid: FunctionalId, form: Form, mode: Mode):
    """(coefficient, derivative order, radial power) triples of the identity."""
    N, k, ck = mode.dimension, mode.degree, mode.eigenvalue
    raw = {
        FunctionalId.GRAD_ENERGY: [(1, 1, N - 1), (ck, 0, N - 3)],
        FunctionalId.WEIGHTED_GRAD_ENERGY: [(1, 1, N + 1), (ck, 0, N - 1)],
        FunctionalId.COULOMB_GRAD_ENERGY: [(1, 1, N - 2), (ck, 0, N - 4)],
        FunctionalId.LAPLACIAN_ENERGY: [
            (1, 2, N - 1),
            (N - 1 + 2 * ck, 1, N - 3),
            (ck * ck + 2 * ck * (N - 4), 0, N - 5),
        ],
        FunctionalId.RADIAL_GRAD_ENERGY: [(1, 1, N - 1)],
        FunctionalId.WEIGHTED_RADIAL_GRAD_ENERGY: [(1, 1, N + 1)],
        FunctionalId.COULOMB_RADIAL_GRAD_ENERGY: [(1, 1, N - 2)],
        # At N=2 this specializes to ∫ r|u''|^2 + ∫ r^{-1}|u'|^2, which is the
        # correct two-term expression there as well.
        FunctionalId.RADIAL_LAPLACIAN_ENERGY: [(1, 2, N - 1), (N - 1, 1, N - 3)],
        FunctionalId.L2_NORM: [(1, 0, N - 1)],
    }
    reduced = {
        FunctionalId.GRAD_ENERGY: [(1, 1, N + 2 * k - 1)],
        FunctionalId.WEIGHTED_GRAD_ENERGY: [
            (1, 1, N + 2 * k + 1),
            (-2 * k, 0, N + 2 * k - 1),
        ],
        FunctionalId.COULOMB_GRAD_ENERGY: [
            (1, 1, N + 2 * k - 2),
            (k, 0, N + 2 * k - 4),
        ],
        FunctionalId.LAPLACIAN_ENERGY: [
            (1, 2, N + 2 * k - 1),
            (N + 2 * k - 1, 1, N + 2 * k - 3),
        ],
        FunctionalId.RADIAL_GRAD_ENERGY: [
            (1, 1, N + 2 * k - 1),
            (-ck, 0, N + 2 * k - 3),
        ],
        FunctionalId.WEIGHTED_RADIAL_GRAD_ENERGY: [
            (1, 1, N + 2 * k + 1),
            (-(ck + 2 * k), 0, N + 2 * k - 1),
        ],
        FunctionalId.COULOMB_RADIAL_GRAD_ENERGY: [
            (1, 1, N + 2 * k - 2),
            (-(ck - k), 0, N + 2 * k - 4),
        ],
        FunctionalId.L2_NORM: [(1, 0, N + 2 * k - 1)],
    }
    table = raw if form is Form.RAW else reduced
    if fid not in table:
        raise FormUnavailableError(f"{fid.value} has no {form.value}-form expression")
    return table[fid]


@dataclass(frozen=True)
class ModeFunctionalValue:
    mode: Mode
    id: FunctionalId
    form: Form
    value: float
    terms: dict

    def to_json(self) -> dict:
        return {
            "mode": {"N": self.mode.dimension, "k": self.mode.degree},
            "id": self.id.value,
            "form": self.form.value,
            "terms": dict(self.terms),
            "value": self.value,
        }


def _check_n2_admissibility(fid: FunctionalId, form: Form, mode: Mode, profile: Profile) -> None:
    """Boundary admissibility near r=0 in dimension 2.

    Finiteness of the N=2 second-order integrals needs v_0'(0) = 0 and
    v_1(0) = 0; for sampled data this is enforced as a smallness check at the
    first node rather than proved.
    """
    if mode.dimension != 2 or not isinstance(profile, SampledProfile):
        return
    r1 = profile.grid[0]
    head = slice(0, 8)
    if form is Form.REDUCED and fid is FunctionalId.LAPLACIAN_ENERGY and mode.degree == 0:
        d1, d2 = profile.derivative_values(1), profile.derivative_values(2)
        ref = np.max(np.abs(d2[head]))
        if abs(d1[0]) > 50.0 * r1 * ref + 1e-9 * np.max(np.abs(d1), initial=0.0):
            raise SingularWeightError(
                "dimension-2 degree-0 profile must have vanishing slope at the origin"
            )
    if (
        form is Form.RAW
        and mode.degree == 1
        and fid in (FunctionalId.LAPLACIAN_ENERGY, FunctionalId.RADIAL_LAPLACIAN_ENERGY)
    ):
        v = profile.values / profile.grid
        dv = profile.derivative_values(1)
        ref = np.max(np.abs(dv[head]))
        if abs(v[0]) > 50.0 * r1 * ref + 1e-9 * np.max(np.abs(v), initial=0.0):
            raise SingularWeightError(
                "dimension-2 degree-1 profile must vanish to second order at the origin"
            )


def eval_mode_functional(
    fid: FunctionalId,
    mode: Mode,
    profile: Profile,
    form: Form = Form.RAW,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> ModeFunctionalValue:
    """Assemble one mode functional term by term in the requested form.

    The profile must already be the mode's radial coefficient in that form.
    Zero-coefficient terms (e.g. the eigenvalue term at degree 0) are skipped
    before any integral is attempted.
    """
    fid, form = FunctionalId(fid), Form(form)
    entries = _term_table(fid, form, mode)
    if form is Form.RAW and mode.degree >= 1 and isinstance(profile, SampledProfile):
        lead = profile.values[0] / profile.grid[0] ** mode.degree
        if not np.isfinite(lead):
            raise SingularWeightError("profile does not vanish to the mode order at the grid start")
    _check_n2_admissibility(fid, form, mode, profile)

    terms: dict[str, float] = {}
    for coef, deriv, power in entries:
        if coef == 0:
            continue
        seminorm = WeightedSeminorm(deriv, power)
        try:
            integral = integrate(profile, seminorm, cfg)
        except DivergentIntegralError as exc:
            raise SingularWeightError(
                f"{fid.value} ({form.value} form) is singular for this profile: {exc}"
            ) from exc
        terms[f"d{deriv}_p{power}"] = coef * integral
    value = math.fsum(terms.values())
    return ModeFunctionalValue(mode, fid, form, value, terms)


def full_space_value(mode_values: list[ModeFunctionalValue]) -> float:
    """Sum per-mode values into the full-space integral (shared N and id)."""
    if not mode_values:
        raise UsageError("need at least one mode value")
    dims = {mv.mode.dimension for mv in mode_values}
    ids = {mv.id for mv in mode_values}
    if len(dims) != 1:
        raise UsageError("mode values mix dimensions")
    if len(ids) != 1:
        raise UsageError("mode values mix functional ids")
    ordered = sorted(mode_values, key=lambda mv: mv.mode.degree)
    return math.fsum(mv.value for mv in ordered)


def hardy_1d_ratio(mode: Mode, v: Profile, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Weighted 1-d Hardy quotient ∫ r^{N+2k+1}|v'|^2 / ∫ r^{N+2k-1}|v|^2.

    For any admissible profile the continuum value is at least (N+2k)^2/4.
    """
    N, k = mode.dimension, mode.degree
    num = integrate(v, WeightedSeminorm(1, N + 2 * k + 1), cfg)
    den = integrate(v, WeightedSeminorm(0, N + 2 * k - 1), cfg)
    if den < cfg.abs_tol:
        raise DegenerateProfileError("profile norm below tolerance in the Hardy quotient")
    return num / den


def _cartesian_second_derivatives(f: Profile, degree: int, r: np.ndarray, theta: np.ndarray):
    """u_xx, u_yy, u_xy on the polar tensor grid for u = f(r) cos(degree*θ)."""
    c, s = np.cos(theta)[None, :], np.sin(theta)[None, :]
    g = np.cos(degree * theta)[None, :]
    gp = -degree * np.sin(degree * theta)[None, :]
    gpp = -degree * degree * g
    rr = r[:, None]
    f0 = np.asarray(f.value(r, 0))[:, None]
    f1 = np.asarray(f.value(r, 1))[:, None]
    f2 = np.asarray(f.value(r, 2))[:, None]
    u_rr, u_r = f2 * g, f1 * g
    u_rt, u_t, u_tt = f1 * gp, f0 * gp, f0 * gpp
    u_xx = c * c * u_rr - 2 * c * s * u_rt / rr + s * s * u_tt / rr**2 + s * s * u_r / rr + 2 * c * s * u_t / rr**2
    u_yy = s * s * u_rr + 2 * c * s * u_rt / rr + c * c * u_tt / rr**2 + c * c * u_r / rr - 2 * c * s * u_t / rr**2
    u_xy = c * s * u_rr + (c * c - s * s) * u_rt / rr - c * s * u_tt / rr**2 - c * s * u_r / rr - (c * c - s * s) * u_t / rr**2
    return u_xx, u_yy, u_xy


def vector_equiv_check_2d(
    radial: AnalyticProfile | MixtureProfile,
    degree: int = 0,
    cfg: QuadratureConfig | None = None,
    n_theta: int = 64,
    n_r_panels: int = 32,
    points_per_panel: int = 12,
) -> tuple[float, float]:
    """Divergence-free vector-field energy versus the scalar reduction, N=2.

    For u(x) = f(r) cos(degree*θ) and the rotated gradient field
    Ū = (-u_{x2}, u_{x1}), returns

        lhs = ∫_{R^2} |∇Ū|^2 dx   (componentwise tensor quadrature in (r, θ))
        rhs = ∫_{R^2} |Δu|^2 dx   (mode-decomposed radial machinery)

    The two agree because |∇Ū|^2 integrates to u_xx^2 + u_yy^2 + 2 u_xy^2.
    """
    if degree < 0:
        raise UsageError("angular degree must be >= 0")
    from .quadrature import default_r_max

    r_max = (cfg.r_max if cfg and cfg.r_max else None) or default_r_max(radial)

    # Uniform panels: the integrand is smooth, and avoiding tiny radii keeps
    # the 1/r^2 cancellations in the Cartesian assembly benign.
    xi, om = _gl_nodes(points_per_panel)
    edges = np.linspace(0.0, r_max, n_r_panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    r = (mid + half * xi[None, :]).ravel()
    w_r = (half * om[None, :]).ravel()
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    w_theta = 2.0 * np.pi / n_theta

    u_xx, u_yy, u_xy = _cartesian_second_derivatives(radial, degree, r, theta)
    integrand = (u_xx**2 + u_yy**2 + 2.0 * u_xy**2) * r[:, None]
    lhs = float((w_r @ integrand).sum() * w_theta)

    mode = Mode(2, degree, degree * degree)
    angular_norm_sq = 2.0 * np.pi if degree == 0 else np.pi
    quad_cfg = cfg or CLOSED_FORM
    if degree == 0:
        radial_value = eval_mode_functional(
            FunctionalId.LAPLACIAN_ENERGY, mode, radial, Form.RAW, quad_cfg
        ).value
    else:
        reduced = shift_power(radial, -degree)
        radial_value = eval_mode_functional(
            FunctionalId.LAPLACIAN_ENERGY, mode, reduced, Form.REDUCED, quad_cfg
        ).value
    rhs = angular_norm_sq * radial_value
    return lhs, rhs
