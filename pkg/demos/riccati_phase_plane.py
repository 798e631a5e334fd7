"""
Phase plane of the inverse-width equation
=========================================

The complex width parameter C of a Gaussian packet obeys
dC/dt + C^2 + omega^2 = 0. Plotted as a flow in the (C_R, C_I) plane, the
constant solutions +-i omega0 appear as the only stationary points: the
upper one is the constant-width (coherent) packet, the lower one its
time-reversed twin. Everything launched strictly inside the upper half
plane circulates around +i omega0 and stays bounded; the real axis is the
classical limit, where trajectories run off to a pole in finite time.
"""

import pathlib

import numpy as np

from gwpdyn import BlowUpError, ConstantFrequency, RiccatiState, SystemSpec
from gwpdyn.plots import riccati_vector_field_svg
from gwpdyn.riccati import integrate_riccati, riccati_closed_form

out = pathlib.Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

# the flow field itself, with both stationary points marked
riccati_vector_field_svg(1.0, out / "riccati_field.svg")
print("wrote", out / "riccati_field.svg")

s = SystemSpec(omega=ConstantFrequency(1.0))

# a bounded orbit: start on the imaginary axis below the fixed point
t = np.linspace(0.0, 4.0 * np.pi, 800)
orbit = integrate_riccati(s, RiccatiState(0.0, 0.5), t)
biggest = max(abs(state.value) for state in orbit)
print(f"orbit from 0.5i: largest |C| over two periods = {biggest:.6f} "
      f"(closed form peaks at 2)")

# the same trajectory from the Bernoulli closed form, for comparison
exact = riccati_closed_form(1.0, complex(0.0, 0.5), t)
gap = max(abs(state.value - ref) for state, ref in zip(orbit, exact))
print(f"integration vs closed form: max gap {gap:.2e}")

# a classical start (C_I = 0) diverges at t = pi/2: the guard reports it
try:
    integrate_riccati(s, RiccatiState(0.0, 0.0), np.linspace(0.0, 2.0, 200))
except BlowUpError as err:
    print(f"real-axis start blew up at t = {err.time:.6f} (pole at pi/2 "
          f"= {np.pi / 2.0:.6f})")
