"""
Phase-space snapshots over one trap period
==========================================

The Wigner density of a Gaussian packet is a rotating, breathing ellipse:
(1/pi hbar) exp(-2 I(x - <x>, p - <p>)), with I the same quadratic form as
the dynamical invariant. Its peak rides the classical orbit. This script
renders the bundled snapshot scenario at eight times across one period and
prints where the peak sits relative to the classical energy ellipse.
"""

import pathlib

import numpy as np

from gwpdyn.plots import wigner_heatmap_svg
from gwpdyn.runner import wigner_snapshots
from gwpdyn.scenario import load_scenario
from gwpdyn.wigner import marginals

out = pathlib.Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

scenario = load_scenario("fig4")
times = [k * np.pi / 4.0 for k in (0, 1, 2, 3, 5, 6, 7, 8)]
records = wigner_snapshots(scenario, times)

e0 = records[0]["energy"]
print(f"classical energy of the initial centroid: {e0:.6f}")
for k, rec in enumerate(records):
    path = out / f"wigner_{k:02d}.svg"
    wigner_heatmap_svg(rec["grid"], path, rec["t"], peak=rec["peak"])
    x_pk, p_pk = rec["peak"]
    mx, mp = marginals(rec["grid"])
    print(f"t = {rec['t']:6.4f}: peak ({x_pk:+.4f}, {p_pk:+.4f}), "
          f"E - E0 = {rec['energy'] - e0:+.2e}, "
          f"marginal variances ({mx.variance():.4f}, {mp.variance():.4f})")
print("wrote eight heatmaps to", out)
