"""Higher orders write sharper but exponentially more slowly.

An order-M absorber fires only where the whole M-photon bunch lands, so
the per-shot deposition rate falls off as N^-(M-1) with the pixel count:
sharper patterns, starved exposure.  The utility U = F0 * D^c makes the
trade explicit; the cost exponent c sets how heavily slow deposition is
punished and thereby picks the best order.
"""

import numpy as np

import imres

KAPPA_ELL = 0.1


def field_and_absorber(order, n_pixels):
    spec = imres.LithographySpec(order, KAPPA_ELL, imres.PixelGrid(n_pixels))
    return imres.lithography_field(spec), imres.m_photon_absorber(order, 1.0)


print("per-shot deposition rate vs pixel count")
counts = (100, 316, 1000, 3162, 10000)
header = " ".join(f"{f'N={n}':>10}" for n in counts)
print(f"{'M':>3} {header} {'slope':>8}")
for order in (1, 2, 3):
    rates = [imres.deposition_rate(*field_and_absorber(order, n)) for n in counts]
    slope = np.polyfit(np.log(counts), np.log(rates), 1)[0]
    cells = " ".join(f"{rate:>10.3e}" for rate in rates)
    print(f"{order:>3} {cells} {slope:>8.3f}")
print("slopes land on -(M - 1): the price of order-M exposure")

# fold rate and information into one number at a fixed substrate size
n_pixels = 1000
print()
print(f"utility U = F0 * D^c at N = {n_pixels}")
print(f"{'M':>3} {'F0':>7} {'D':>11} " + " ".join(f"{f'c={c}':>11}" for c in (0.5, 1.0, 2.0)))
for order in (1, 2, 3, 4):
    field, absorber = field_and_absorber(order, n_pixels)
    spec = imres.LithographySpec(order, KAPPA_ELL, imres.PixelGrid(n_pixels))
    family = imres.lithography_images(spec, absorber)
    fisher = imres.fisher_from_images(family, 0.0).fisher
    row = []
    for c in (0.5, 1.0, 2.0):
        report = imres.utility_report(fisher, field, absorber, c)
        row.append(f"{report.utility:>11.3e}")
    deposition = imres.deposition_rate(field, absorber, normalized=True)
    print(f"{order:>3} {fisher:>7.2f} {deposition:>11.3e} " + " ".join(row))
print("a gentle cost keeps high orders attractive; a steep one pins M low")
