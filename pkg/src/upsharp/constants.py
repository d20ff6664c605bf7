"""Sharp-constant registry and exact discrete-infimum scans.

The per-mode bounds below couple the best constant of a one-dimensional
product inequality with the weighted Hardy correction of the degree-k mode:

* ``hup2_mode``:   S(N, k) = (1 - 8k/(N+2k)^2) * (N+2k+2)^2 / 4
* ``hyup2_mode``:  f(N, k) = ((N+2k+1)^2/4) * (N+2k-3)^4 / ((N+2k-3)^2 + 4k)^2
                   with f(N, 0) = (N+1)^2/4 (no Hardy step at degree 0)

Their infima over k deliver the sharp constants (N+2)^2/4 (all N >= 2) and
(N+1)^2/4 (N >= 5).  Everything here is exact rational arithmetic; a scan is
accepted only when a monotone-tail certificate shows no smaller value can
exist beyond the scanned range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import InconclusiveScanError, UsageError


class PrincipleId(str, Enum):
    HUP = "hup"                      # ∫|∇u|^2 ∫|x|^2|u|^2 >= c (∫|u|^2)^2
    HYUP = "hyup"                    # ∫|∇u|^2 ∫|u|^2 >= c (∫|u|^2/|x|)^2
    HUP2 = "hup2"                    # ∫|Δu|^2 ∫|x|^2|∇u|^2 >= c (∫|∇u|^2)^2
    HYUP2 = "hyup2"                  # ∫|Δu|^2 ∫|∇u|^2 >= c (∫|∇u|^2/|x|)^2
    HUP2_RADIAL = "hup2_radial"      # same as hup2 with radial derivatives
    HYUP2_RADIAL = "hyup2_radial"    # same as hyup2 with radial derivatives


PROVED = "proved"
CONJECTURAL = "conjectural"


@dataclass(frozen=True)
class SharpConstant:
    value: Fraction
    status: str

    def __float__(self) -> float:
        return float(self.value)


def sharp_constant(principle: PrincipleId | str, dimension: int) -> SharpConstant:
    """Sharp constant of a principle in a given dimension, with proof status.

    The second-order hydrogen principle is proved for N >= 5 and conjectured
    (same value) for 2 <= N <= 4; N = 1 is rejected outright. Its radial
    restriction is proved for every N >= 2.
    """
    p = PrincipleId(principle)
    n = int(dimension)
    if n < 1:
        raise UsageError("dimension must be >= 1")
    if p is PrincipleId.HUP:
        return SharpConstant(Fraction(n * n, 4), PROVED)
    if p is PrincipleId.HYUP:
        return SharpConstant(Fraction((n - 1) ** 2, 4), PROVED)
    if p in (PrincipleId.HUP2, PrincipleId.HUP2_RADIAL):
        return SharpConstant(Fraction((n + 2) ** 2, 4), PROVED)
    if p is PrincipleId.HYUP2_RADIAL:
        if n < 2:
            raise UsageError("hyup2_radial needs dimension >= 2")
        return SharpConstant(Fraction((n + 1) ** 2, 4), PROVED)
    # HYUP2
    if n < 2:
        raise UsageError("hyup2 needs dimension >= 2 (no statement covers N=1)")
    return SharpConstant(Fraction((n + 1) ** 2, 4), PROVED if n >= 5 else CONJECTURAL)


def hup2_mode_bound(dimension: int, degree: int) -> Fraction:
    """Exact S(N, k); the factored and expanded forms are checked against each other."""
    n, k = _check_nk(dimension, degree)
    t = Fraction(n + 2 * k)
    factored = (1 - Fraction(8 * k) / t**2) * Fraction((n + 2 * k + 2) ** 2, 4)
    expanded = (
        Fraction(n * n, 4)
        + n
        - 3
        + n * k
        + k * k
        + Fraction(4 * (n - 1)) / t
        + Fraction(4 * n) / t**2
    )
    if factored != expanded:
        raise AssertionError(f"mode-bound forms disagree at N={n}, k={k}")
    return factored


def hyup2_mode_bound(dimension: int, degree: int) -> Fraction:
    """Exact f(N, k); degree 0 carries no Hardy correction and equals (N+1)^2/4."""
    n, k = _check_nk(dimension, degree)
    if k == 0:
        return Fraction((n + 1) ** 2, 4)
    t = n + 2 * k - 3
    den = t * t + 4 * k
    if den == 0:
        raise ArithmeticError(f"mode bound pole at N={n}, k={k}")
    return Fraction((n + 2 * k + 1) ** 2, 4) * Fraction(t**4, den**2)


def _check_nk(dimension: int, degree: int) -> tuple[int, int]:
    n, k = int(dimension), int(degree)
    if n < 2:
        raise UsageError("mode bounds need dimension >= 2")
    if k < 0:
        raise UsageError("degree must be >= 0")
    return n, k


def growth_certificate(dimension: int, t: int) -> int:
    """h(N, t) = t^4 - 8(N-1)t - 16N; its sign at t = N+2k certifies growth.

    h is nondecreasing in t for t >= N >= 2, and h >= 0 at t = N+2k implies
    the hup2 mode bound is nondecreasing from degree k on.
    """
    n = int(dimension)
    return t**4 - 8 * (n - 1) * t - 16 * n


SCAN_FORMULAS = ("hup2_mode", "hyup2_mode")


@dataclass(frozen=True)
class ScanResult:
    formula: str
    dimension: int
    k_max: int
    values: tuple[Fraction, ...]
    argmin: int
    infimum: Fraction
    certified_from: int
    monotone_from: int

    def to_json(self) -> dict:
        return {
            "formula": self.formula,
            "dimension": self.dimension,
            "k_range": [0, self.k_max],
            "values": [
                {"num": v.numerator, "den": v.denominator, "float": float(v)}
                for v in self.values
            ],
            "argmin": self.argmin,
            "infimum": {
                "num": self.infimum.numerator,
                "den": self.infimum.denominator,
                "float": float(self.infimum),
            },
            "certified_from": self.certified_from,
            "monotone_from": self.monotone_from,
        }


def scan_infimum(formula: str, dimension: int, k_max: int = 64) -> ScanResult:
    """Scan a mode-bound formula over k in [0, k_max] and certify the tail.

    ``certified_from`` is the smallest degree from which the bound is provably
    nondecreasing (sign of the quartic certificate for ``hup2_mode``; the
    increasing-tail argument, valid once k >= 1 and N+2k-3 >= 4, for
    ``hyup2_mode``). A scan whose minimum could move beyond k_max raises.
    """
    if formula not in SCAN_FORMULAS:
        raise UsageError(f"unknown scan formula {formula!r}")
    n = int(dimension)
    if k_max < 8:
        raise UsageError("k_max must be at least 8")
    fn = hup2_mode_bound if formula == "hup2_mode" else hyup2_mode_bound
    values = tuple(fn(n, k) for k in range(k_max + 1))

    if formula == "hup2_mode":
        certified_from = next(
            (k for k in range(k_max + 1) if growth_certificate(n, n + 2 * k) >= 0), None
        )
    else:
        certified_from = max(1, -(-(7 - n) // 2))  # ceil((7-N)/2), at least 1
        if certified_from > k_max:
            certified_from = None

    monotone_from = k_max
    for k in range(k_max - 1, -1, -1):
        if values[k + 1] >= values[k]:
            monotone_from = k
        else:
            break

    if certified_from is None:
        raise InconclusiveScanError(
            f"{formula} tail not certified within k_max={k_max} for N={n}"
        )
    if monotone_from > certified_from:
        # The certificate promises growth from certified_from on; observing a
        # later decrease would contradict it.
        raise InconclusiveScanError(
            f"{formula} observed decrease past the certified degree for N={n}"
        )
    argmin = min(range(k_max + 1), key=lambda k: values[k])
    return ScanResult(
        formula=formula,
        dimension=n,
        k_max=k_max,
        values=values,
        argmin=argmin,
        infimum=values[argmin],
        certified_from=certified_from,
        monotone_from=monotone_from,
    )
