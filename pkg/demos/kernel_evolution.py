"""
Evolving a packet through the Gaussian kernel
=============================================

The propagator of a quadratic Hamiltonian is a Gaussian in (x, x'), built
from one solution pair of the classical equation lambda'' + omega^2 lambda
= 0. Convolving it with a Gaussian initial state must land on exactly the
packet that direct integration produces. This script does both for a
squeezed, moving packet in a unit trap, then lets the trap shut off and
watches the kernel reproduce free spreading as well.
"""

import pathlib

import numpy as np

from gwpdyn import Centroid, ConstantFrequency, ErmakovState, SystemSpec
from gwpdyn.complex_newton import integrate_lambda
from gwpdyn.ermakov import integrate_joint
from gwpdyn.propagator import (
    InitialGaussian,
    density_integral,
    evolve_amplitude,
    evolve_via_kernel,
    kernel_lambda_initial,
)

out = pathlib.Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

init = InitialGaussian(alpha0=1.2, p0=2.0, x_center=1.0, alpha_dot0=-0.3)

for label, omega0 in (("trapped", 1.0), ("free", 0.0)):
    s = SystemSpec(omega=ConstantFrequency(omega0))
    t = np.linspace(0.0, 2.0, 21)

    # one integration for the kernel's lambda pair, one for the reference
    lambdas = integrate_lambda(s, kernel_lambda_initial(init.alpha0), t)
    centroids, ermakovs = integrate_joint(
        s, Centroid(init.x_center, init.p0),
        ErmakovState(init.alpha0, init.alpha_dot0), t)

    worst = 0.0
    for l, c, e in zip(lambdas[1:], centroids[1:], ermakovs[1:]):
        packet = evolve_via_kernel(s, init, l)
        direct = complex(e.alpha_dot / e.alpha, 1.0 / e.alpha**2)
        worst = max(worst,
                    abs(packet.centroid.x - c.x),
                    abs(packet.centroid.p - c.p),
                    abs(packet.riccati.value - direct))
    print(f"{label}: kernel vs direct, max deviation {worst:.2e}")

    # the convolution keeps the state normalized at every sampled time
    n, a, b = evolve_amplitude(s, init, lambdas[-1])
    print(f"{label}: norm after evolution = {density_integral(n, a, b):.12f}")
