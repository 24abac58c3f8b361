"""Bleeding reads blur the image and can only lose information.

A bleeding detector records, at each pixel, the count found a random
displacement away (Poisson distance, random direction).  The recorded
image of a point source is exactly the displacement kernel, and the centre
information of a Gaussian dot decays monotonically as the mean bleed
distance grows.  At zero distance the wrapper is transparent.
"""

import numpy as np

import imres

# a deterministic single photon at the centre renders the kernel itself
n_pixels, centre, distance = 41, 20, 2.0
one_photon = imres.CountDistribution.from_mapping({1: 1.0})
vacuum = imres.CountDistribution.from_mapping({0: 1.0})
field = imres.IndependentPixelField(
    imres.PixelGrid(n_pixels),
    [one_photon if x == centre else vacuum for x in range(n_pixels)],
)
povm = imres.bleeding_counter(imres.BleedingSpec(distance))
image = imres.expected_image(field, povm).values

print(f"point source under bleeding with mean distance {distance}")
scale = image.max()
for x in range(centre - 6, centre + 7):
    bar = "#" * int(round(40 * image[x] / scale))
    print(f"  pixel {x:>2}  {image[x]:>8.5f}  {bar}")

# information about a dot centre, relative to the unbled detector
width = 40.0
grid = imres.PixelGrid.centered(1001)
spec = imres.GaussianDotSpec(1.0, 0.0, width, grid)


def centre_fisher(povm):
    family = imres.gaussian_dot_images(spec, povm)
    return imres.fisher_from_images(family, 0.0).fisher


baseline = centre_fisher(imres.ideal_counter())
print()
print(f"dot of width {width}: information retained vs mean bleed distance")
print(f"{'distance':>9} {'F / F_unbled':>13}")
for distance in np.arange(0.0, 10.5, 1.0):
    blurred = centre_fisher(imres.bleeding_counter(imres.BleedingSpec(float(distance))))
    print(f"{distance:>9.1f} {blurred / baseline:>13.6f}")
