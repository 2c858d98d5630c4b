"""Pose compensation geometry and the first-order error budget.

A pitched or rolled camera foreshortens character height by
cos(pitch) * cos(roll); uncorrected, that inflates distance by the inverse
factor. The error budget decomposes relative distance error into focal,
height-tolerance, measurement, and pose terms.
"""

import math

from platerange import (
    PoseEstimate,
    compensated_distance,
    error_budget,
    measurement_noise_term,
    pinhole,
    pitch_from_vanishing,
    pose_error_terms,
    roll_from_segments,
)
from platerange.pose import LineSegment

F_PX, H_M, D_TRUE = 3967.0, 0.072, 10.0

print("=== Foreshortening and compensation ===")
print("pitch deg | naive D (m) | naive err % | compensated D (m)")
for deg in (0.0, 1.0, 2.0, 3.0, 5.0):
    phi = math.radians(deg)
    pose = PoseEstimate(phi, 0.0)
    h_observed = F_PX * H_M * pose.foreshortening / D_TRUE
    naive = pinhole(F_PX, H_M, h_observed)
    fixed = compensated_distance(F_PX, H_M, h_observed, pose)
    print(f"   {deg:4.1f}    |  {naive:8.4f}   |   {100 * (naive / D_TRUE - 1):6.3f}    |  {fixed:8.4f}")

print()
print("=== Pose from scene structure ===")
v_inf = 460.0
phi = pitch_from_vanishing(v_inf, 720.0, 1763.0)
print(f"  vanishing point at row {v_inf:.0f} in a 720-row frame, f = 1763 px"
      f" -> pitch {phi:.4f} rad ({math.degrees(phi):.2f} deg)")
segments = [LineSegment(100, 400, 600, 409), LineSegment(80, 500, 640, 511)]
psi = roll_from_segments(segments)
print(f"  two lane segments -> roll {psi:.4f} rad ({math.degrees(psi):.2f} deg)")
pitch_term, roll_term = pose_error_terms(phi, math.radians(1.0), psi, math.radians(0.5))
print(f"  error terms for 1.0/0.5 deg angle uncertainty: {pitch_term:.2e}, {roll_term:.2e}")

print()
print("=== Error budget ===")
meas = measurement_noise_term(sigma_h=2.0, n=7, h_bar=28.56)
print(f"  measurement term for sigma_h = 2 px over 7 characters at 28.56 px: {meas * 100:.2f}%")
budget = error_budget(0.015, 0.023, meas, pitch_term, roll_term)
print(f"  focal 1.50% + height 2.30% + measurement {meas * 100:.2f}%"
      f" + pose terms {pitch_term * 100:.3f}%/{roll_term * 100:.3f}%")
print(f"  linear (worst-case aligned) total: {budget.linear_total * 100:.2f}%")
print(f"  RSS (independent) total:           {budget.rss_total * 100:.2f}%")
