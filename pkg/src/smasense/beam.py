"""Constant-curvature beam statics for the SMA-driven soft limb.

The limb is modeled as a cantilever bent into a circular arc by a tip
moment from the SMA coil.  With bending angle theta (half the arc's
included angle), the tip displacement is L*sin^2(theta)/theta and the
muscle force needed to hold that pose is zeta*sin^2(theta)/theta, with
zeta = 4*E*I/(L*w) a single limb constant.  A contact plate (or a
finger) adds a tip point load resolved by linear superposition with the
standard cantilever compliance L^3/(3*E*I).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# sin^2(t)/t rises from 0 to a single maximum at tan(t) = 2t and then
# falls toward 2/pi at t = pi/2, so inversion is only well-posed on the
# rising branch [0, PEAK_ANGLE].
def _solve_peak_angle() -> float:
    lo, hi = 1.0, 1.5
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if math.tan(mid) - 2.0 * mid < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


PEAK_ANGLE = _solve_peak_angle()

_BISECT_TOL = 1e-10
_BISECT_MAX_ITER = 200


def arc_ratio(theta: float) -> float:
    """sin^2(theta)/theta with its theta -> 0 limit of 0."""
    if theta == 0.0:
        return 0.0
    s = math.sin(theta)
    return s * s / theta


@dataclass(frozen=True)
class LimbParams:
    """Beam geometry and material of one limb.

    Units: E in N/mm^2, lengths in mm; the derived stiffness constant
    zeta is in N (force per unit of sin^2(theta)/theta).
    """

    elastic_modulus: float  # E, N/mm^2
    width: float            # b, mm
    thickness: float        # h, mm
    length: float           # L, mm
    moment_arm: float       # w, mm
    area_moment: float = field(init=False)
    zeta: float = field(init=False)

    def __post_init__(self):
        for name in ("elastic_modulus", "width", "thickness", "length", "moment_arm"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"LimbParams.{name} must be > 0")
        object.__setattr__(self, "area_moment", self.width * self.thickness**3 / 12.0)
        object.__setattr__(
            self,
            "zeta",
            zeta_from_geometry(
                self.elastic_modulus, self.width, self.thickness, self.length, self.moment_arm
            ),
        )

    @property
    def tip_compliance(self) -> float:
        """Cantilever tip-load compliance L^3/(3*E*I), mm per N."""
        return self.length**3 / (3.0 * self.elastic_modulus * self.area_moment)

    @property
    def max_sma_force(self) -> float:
        """Largest muscle force invertible to an angle on the rising branch."""
        return self.zeta * arc_ratio(PEAK_ANGLE)


def zeta_from_geometry(E: float, b: float, h: float, L: float, w: float) -> float:
    """Angle-to-force constant zeta = 4*E*I/(L*w) with I = b*h^3/12."""
    if min(E, b, h, L, w) <= 0.0:
        raise ValueError("all beam parameters must be > 0")
    I = b * h**3 / 12.0
    return 4.0 * E * I / (L * w)


def _check_angle(theta: float) -> None:
    if not 0.0 <= theta <= math.pi / 2.0:
        raise ValueError(f"bending angle {theta} rad outside [0, pi/2]")


def tip_displacement(theta: float, L: float) -> float:
    """Lateral tip displacement L*sin^2(theta)/theta of the arc, mm."""
    _check_angle(theta)
    return L * arc_ratio(theta)


def sma_force_from_angle(theta: float, zeta: float) -> float:
    """Muscle force zeta*sin^2(theta)/theta holding bend angle theta."""
    _check_angle(theta)
    return zeta * arc_ratio(theta)


def _invert_arc_ratio(target: float) -> float:
    """Unique theta on the rising branch [0, PEAK_ANGLE] with arc_ratio = target."""
    peak = arc_ratio(PEAK_ANGLE)
    if not 0.0 <= target <= peak:
        raise ValueError(f"arc ratio {target} outside reachable range [0, {peak:.6f}]")
    if target == 0.0:
        return 0.0
    lo, hi = 0.0, PEAK_ANGLE
    for _ in range(_BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if arc_ratio(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < _BISECT_TOL:
            break
    return 0.5 * (lo + hi)


def angle_from_force(f_sma: float, zeta: float) -> float:
    """Bend angle on the rising branch producing muscle force f_sma.

    Accepts f_sma in [0, zeta*arc_ratio(PEAK_ANGLE)].  Forces between
    zeta*arc_ratio(pi/2) and the peak have a second solution past
    PEAK_ANGLE; the rising-branch one is returned.
    """
    if f_sma < 0.0:
        raise ValueError("f_sma must be >= 0")
    return _invert_arc_ratio(f_sma / zeta)


def contact_statics(
    f_sma: float, plate_dist: float | None, params: LimbParams
) -> tuple[float, float, float]:
    """Resolve (theta, tip displacement, external tip force) against a plate.

    Free displacement is linear in the muscle force, delta = (L/zeta)*F.
    If it stays short of the plate the limb is unloaded; otherwise the
    tip is held at the plate and the reaction follows from superposing a
    tip point load with compliance L^3/(3*E*I).
    """
    if f_sma < 0.0:
        raise ValueError("f_sma must be >= 0")
    delta_free = (params.length / params.zeta) * f_sma
    if plate_dist is None or delta_free <= plate_dist:
        theta = angle_from_force(f_sma, params.zeta)
        return theta, delta_free, 0.0
    if plate_dist <= 0.0:
        raise ValueError("plate_dist must be > 0")
    theta = _invert_arc_ratio(plate_dist / params.length)
    f_ext = (delta_free - plate_dist) / params.tip_compliance
    return theta, plate_dist, f_ext


def tip_statics_with_push(
    f_sma: float, push_force: float, params: LimbParams
) -> tuple[float, float]:
    """Pose under a human tip push of push_force N against the bend.

    Returns (theta, tip displacement).  The push unloads the arc by
    compliance * force; the limb bottoms out flat at delta = 0 and any
    excess force reacts at the base.
    """
    if push_force < 0.0:
        raise ValueError("push_force must be >= 0")
    delta_free = (params.length / params.zeta) * f_sma
    delta = max(0.0, delta_free - params.tip_compliance * push_force)
    theta = _invert_arc_ratio(delta / params.length)
    return theta, delta
