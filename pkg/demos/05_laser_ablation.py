"""The first 0.2 ns of a laser hitting a two-layer plastic target.

The laser comes from the right and deposits its energy in a band just
behind the critical-density point; Spitzer-Harm conduction carries the heat
into the target while the heated layer expands.  Solver units are g/cm^3,
cm, microseconds and megakelvin.  The full 2.49 ns run takes several minutes
(``diffmix run --case laser_ablation_1d``).
"""

import numpy as np

from diffmix.cases import case_laser_ablation_1d
from diffmix.closures import critical_position
from diffmix.driver import RunPlan, run

case = case_laser_ablation_1d(cells=360, t_end=2e-4)
x = case.grid.centers(0)
print(f"laser {case.laser.intensity:g} (solver units), band depth {case.laser.depth:g} cm, "
      f"critical density {case.laser.rho_crit:g} g/cm^3")


def show(label, res):
    W = res.state
    rho = W.density
    xc = critical_position(rho, x, case.laser.rho_crit)
    T = W.T[0]
    print(f"{label}: t = {res.time * 1e3:.3f} ns, T_max = {T.max():.3g} MK at x = {x[np.argmax(T)] * 1e4:.1f} um, "
          f"p_max = {W.p.max():.3g} Mbar, critical point at "
          f"{'none' if xc is None else f'{xc * 1e4:.1f} um'}, min density {rho.min():.2e}")


show("start", run(RunPlan(case_config=case, t_end=0.0)))
show("end  ", run(RunPlan(case_config=case)))
