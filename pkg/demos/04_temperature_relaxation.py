"""Relaxing cells with unequal phase temperatures to a common temperature.

Each cell holds water and air at one pressure but different temperatures.
Relaxation keeps the internal energy of the cell, re-solves the pressure and
volume fractions, and can only produce entropy.  The one-step linearized
update agrees with the exact solve to second order in the temperature gap.
"""

import numpy as np

from diffmix import eos
from diffmix.materials import MaterialParams, Materials
from diffmix.thermal import relax_temperatures

mats = Materials((MaterialParams(4.4, 6e6, 1606.0, name="water"), MaterialParams(1.4, 0.0, 714.0, name="air")))
alpha = np.array([[0.3], [0.7]])
p = np.array([2e5])

print(" gap [K]   T exact    T linear    |diff|     entropy change")
for gap in (400.0, 100.0, 25.0, 6.25):
    Tk = np.array([[300.0], [300.0 + gap]])
    rho = eos.sg_density(p, Tk, mats)
    m = alpha * rho
    E = np.sum(m * eos.sg_energy(rho, p, mats), axis=0)
    exact = relax_temperatures(m, E, mats)
    lin = relax_temperatures(m, E, mats, method="linearized", phase_T=Tk)
    dS = np.sum(m * (eos.sg_entropy(exact.rho, exact.p, mats) - eos.sg_entropy(rho, p, mats)))
    print(f"{gap:8.2f} {exact.T[0]:10.4f} {lin.T[0]:10.4f} {abs(exact.T[0] - lin.T[0]):10.2e} {dS:+12.4e}")
print(f"relaxed pressure {exact.p[0]:.6g} Pa, alpha = {exact.alpha.ravel()}")
