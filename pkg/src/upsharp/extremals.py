"""Closed-form uncertainty-principle quotients on the extremal families.

Each principle pairs two energy integrals against the square of a middle
term; on its extremal family the quotient equals the sharp constant exactly,
independent of the rate beta and the amplitude. Quotients are assembled from
exact Gamma/factorial moments (``closed_form``) or recomputed numerically
(``quadrature``); the two routes are kept fully independent.

The sphere-measure factor |S^{N-1}| multiplies every integral and cancels in
every quotient; it is reported informationally only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import CONJECTURAL, PrincipleId, sharp_constant
from .errors import UsageError
from .profiles import AnalyticProfile, KernelTerms
from .quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    closed_form_weighted_square,
    default_r_max,
    panel_integrate,
)

EXTREMAL_FAMILY = {
    PrincipleId.HUP: "gaussian",
    PrincipleId.HUP2: "gaussian",
    PrincipleId.HUP2_RADIAL: "gaussian",
    PrincipleId.HYUP: "exponential",
    PrincipleId.HYUP2: "hydrogen_second",
    PrincipleId.HYUP2_RADIAL: "hydrogen_second",
}

_MIN_DIMENSION = {
    PrincipleId.HUP: 1,
    PrincipleId.HUP2: 1,
    PrincipleId.HUP2_RADIAL: 1,
    PrincipleId.HYUP: 2,
    PrincipleId.HYUP2: 2,
    PrincipleId.HYUP2_RADIAL: 2,
}

# (label, deriv, power offset from N) for the A, B, C integrals; deriv "R2"
# marks the radial-Laplacian square.
_STRUCTURE = {
    PrincipleId.HUP: (("grad_energy", 1, -1), ("weighted_l2", 0, 1), ("l2_norm", 0, -1)),
    PrincipleId.HYUP: (("grad_energy", 1, -1), ("l2_norm", 0, -1), ("coulomb_l2", 0, -2)),
    PrincipleId.HUP2: (
        ("laplacian_energy", "R2", -1),
        ("weighted_grad_energy", 1, 1),
        ("grad_energy", 1, -1),
    ),
    PrincipleId.HYUP2: (
        ("laplacian_energy", "R2", -1),
        ("grad_energy", 1, -1),
        ("coulomb_grad_energy", 1, -2),
    ),
}
_STRUCTURE[PrincipleId.HUP2_RADIAL] = (
    ("radial_laplacian_energy", "R2", -1),
    ("weighted_radial_grad_energy", 1, 1),
    ("radial_grad_energy", 1, -1),
)
_STRUCTURE[PrincipleId.HYUP2_RADIAL] = (
    ("radial_laplacian_energy", "R2", -1),
    ("radial_grad_energy", 1, -1),
    ("coulomb_radial_grad_energy", 1, -2),
)


def sphere_area(dimension: int) -> float:
    """|S^{N-1}| = 2 pi^{N/2} / Gamma(N/2); equals 2 at N=1."""
    return 2.0 * math.pi ** (dimension / 2.0) / math.gamma(dimension / 2.0)


@dataclass(frozen=True)
class QuotientReport:
    principle: PrincipleId
    dimension: int
    family: str
    rate: float
    amplitude: float
    numerator_terms: dict
    denominator: float
    quotient: float
    predicted: float
    rel_gap: float
    status: str
    mode: str
    sphere_factor: float
    note: str = ""

    def to_json(self) -> dict:
        return {
            "principle": self.principle.value,
            "dimension": self.dimension,
            "family": self.family,
            "rate": self.rate,
            "amplitude": self.amplitude,
            "numerator_terms": dict(self.numerator_terms),
            "denominator": self.denominator,
            "quotient": self.quotient,
            "predicted": self.predicted,
            "rel_gap": self.rel_gap,
            "status": self.status,
            "mode": self.mode,
            "sphere_factor": self.sphere_factor,
            "note": self.note,
        }

    def csv_row(self) -> str:
        return (
            f"{self.principle.value},{self.dimension},{self.rate},"
            f"{self.quotient!r},{self.predicted!r},{self.rel_gap!r}"
        )


def _radial_laplacian_terms(profile: AnalyticProfile, dimension: int) -> KernelTerms:
    """Kernel terms of u'' + (N-1) u'/r (no singular exponents arise for the
    extremal families: u' always carries a leading factor of r)."""
    kt1 = profile.kernel_terms(1)
    kt2 = profile.kernel_terms(2)
    extra = tuple(((dimension - 1) * c, e - 1.0, b) for c, e, b in kt1.terms)
    return KernelTerms(kt2.kernel, kt2.terms + extra)


def _integral(profile: AnalyticProfile, deriv, power: int, dimension: int, mode: str, cfg: QuadratureConfig) -> float:
    if deriv == "R2":
        kt = _radial_laplacian_terms(profile, dimension)
    else:
        kt = profile.kernel_terms(deriv)
    if mode == "closed_form":
        return closed_form_weighted_square(kt, float(power))
    r_max = cfg.r_max if cfg.r_max is not None else default_r_max(profile)
    value, _ = panel_integrate(lambda r: np.asarray(kt(r)) ** 2 * r ** float(power), r_max, cfg)
    return value


def extremal_quotient(
    principle: PrincipleId | str,
    dimension: int,
    beta: float = 1.0,
    mode: str = "closed_form",
    amplitude: float = 1.0,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    note: str = "",
) -> QuotientReport:
    """Evaluate one principle's quotient on its extremal family member.

    ``mode`` selects exact moment assembly ("closed_form") or the numerical
    panel rule ("quadrature"). The quotient is beta- and amplitude-invariant;
    on the extremal family it reproduces the predicted sharp constant.
    """
    p = PrincipleId(principle)
    n = int(dimension)
    if mode not in ("closed_form", "quadrature"):
        raise UsageError(f"unknown evaluation mode {mode!r}")
    if beta <= 0:
        raise UsageError("beta must be positive")
    if n < _MIN_DIMENSION[p]:
        raise UsageError(f"{p.value} requires dimension >= {_MIN_DIMENSION[p]}")
    constant = sharp_constant(p, n)
    profile = AnalyticProfile(EXTREMAL_FAMILY[p], amplitude, beta)
    (la, da, pa), (lb, db, pb), (lc, dc, pc) = _STRUCTURE[p]
    a = _integral(profile, da, n + pa, n, mode, cfg)
    b = _integral(profile, db, n + pb, n, mode, cfg)
    c = _integral(profile, dc, n + pc, n, mode, cfg)
    quotient = a * b / c**2
    predicted = float(constant.value)
    status = constant.status
    if status == CONJECTURAL:
        note = (note + " " if note else "") + "extremality conjectural in this dimension"
    return QuotientReport(
        principle=p,
        dimension=n,
        family=profile.family,
        rate=beta,
        amplitude=amplitude,
        numerator_terms={la: a, lb: b},
        denominator=c,
        quotient=quotient,
        predicted=predicted,
        rel_gap=abs(quotient - predicted) / predicted,
        status=status,
        mode=mode,
        sphere_factor=sphere_area(n),
        note=note.strip(),
    )


def radial_extremal_quotient(
    principle: PrincipleId | str,
    dimension: int,
    beta: float = 1.0,
    mode: str = "closed_form",
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> QuotientReport:
    """Radial-operator quotient; for radial profiles it coincides with the
    degree-0 scalar quotient, which is how it is evaluated."""
    p = PrincipleId(principle)
    if p not in (PrincipleId.HUP2_RADIAL, PrincipleId.HYUP2_RADIAL):
        raise UsageError("radial quotients exist for hup2_radial and hyup2_radial only")
    return extremal_quotient(
        p,
        dimension,
        beta,
        mode,
        cfg=cfg,
        note="radial operators reduce to the degree-0 scalar quotient on radial profiles",
    )
