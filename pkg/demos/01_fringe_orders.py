"""Multiphoton interference fringes: information grows as the order squared.

An M-photon bunch writes a cos^2 pattern whose spatial frequency is M times
the single-photon one, so one recorded event pins the beam phase M^2 times
more sharply: F0 = M^2, and the smallest resolvable phase shift from a
single event is 1/M.  Detection efficiency scales how often events are
recorded but leaves the per-event information untouched, since it cancels
from the normalized pattern.
"""

import imres

KAPPA_ELL = 0.1
N_PIXELS = 10_000


def per_event_fisher(order, efficiency=1.0):
    spec = imres.LithographySpec(
        order, KAPPA_ELL, imres.PixelGrid(N_PIXELS), efficiency=efficiency
    )
    absorber = imres.m_photon_absorber(order, efficiency)
    family = imres.lithography_images(spec, absorber)
    return imres.fisher_from_images(family, 0.0).fisher


print("phase information per recorded event vs photon order")
print(f"{'M':>3} {'F0':>10} {'M^2':>6} {'delta_theta':>12} {'1/M':>8}")
for order in (1, 2, 3, 4, 5):
    fisher = per_event_fisher(order)
    delta = imres.cramer_rao_resolution(fisher)
    print(f"{order:>3} {fisher:>10.4f} {order**2:>6} {delta:>12.5f} {1 / order:>8.5f}")

# the same numbers at 10% efficiency: fewer events, same information each
print()
print("per-event information is efficiency independent")
print(f"{'M':>3} {'F0 at eta=1.0':>14} {'F0 at eta=0.1':>14}")
for order in (1, 3, 5):
    full = per_event_fisher(order, 1.0)
    dim = per_event_fisher(order, 0.1)
    print(f"{order:>3} {full:>14.6f} {dim:>14.6f}")
