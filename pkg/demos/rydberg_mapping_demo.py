"""Translate chain parameters to neutral-atom hardware numbers.

The Ising coupling fixes the atom spacing through J = C6/(4 a^6); the
transverse drive is Omega(t) = 2 B(t); local detunings absorb the disorder
fields, with distinct bulk and edge values from the open-chain boundary.
"""

import numpy as np

from mblmc import draw_disorder, map_to_rydberg, standard_params

C6_LEVEL_60 = 4.0 * 1.04 * 7.7**6  # rad um^6 / us, spacing calibrated at 7.7 um

params = standard_params(6, w_over_j=200.0, j=1.04)
disorder = draw_disorder(params, np.random.default_rng(1))
ryd = map_to_rydberg(params, disorder, C6_LEVEL_60)

period_us = params.period
print(f"J = {params.j} rad/us, W/J = {params.w / params.j:g}, "
      f"omega = {params.omega:g} rad/us")
print(f"atom spacing        : {ryd.spacing_a:.2f} um")
print(f"drive amplitude     : 0 .. {ryd.omega_drive_max:.2f} rad/us")
print(f"one period          : {period_us:.3f} us")
print(f"detunings (rad/us)  : {np.round(ryd.detunings, 1)}")
print(f"detuning span       : [{ryd.detunings.min():.1f}, {ryd.detunings.max():.1f}]")
print("\nEdge sites carry 2J - 2h, bulk sites 4J - 2h: the open chain has\n"
      "one missing neighbour at each end.")

strong = standard_params(6, w_over_j=200.0, j=1.04,
                         b0_over_j=5.25, delta_b_over_j=-5.25)
ryd_strong = map_to_rydberg(strong, disorder, C6_LEVEL_60)
print(f"\nstronger drive variant (B0 = -dB = 5.25 J): "
      f"0 .. {ryd_strong.omega_drive_max:.2f} rad/us")
