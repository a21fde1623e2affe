"""Water at 1 GPa expanding into air at 1 bar, against the exact solution.

Runs the no-diffusion shock tube at several resolutions, prints the star
state of the exact two-material Riemann problem and the L1 error table, and
writes the finest numerical profile next to the exact one as CSV.
"""

import sys
from pathlib import Path

import numpy as np

from diffmix.cases import shock_tube_no_diffusion
from diffmix.driver import RunPlan, convergence_report, read_csv_1d, riemann_reference, run, write_csv_1d

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

case = shock_tube_no_diffusion(cells=400)
sol, smp = riemann_reference(case, case.grid.centers(0), case.t_end)
print(f"exact: p* = {sol.p_star:.6g} Pa, u* = {sol.u_star:.6g} m/s, "
      f"left {sol.wave_L}, right {sol.wave_R} at {sol.speeds_R[0]:.1f} m/s")

table = convergence_report(shock_tube_no_diffusion, [100, 200, 400, 800])
print(table.summary())

res = run(RunPlan(case_config=case))
write_csv_1d(out / "shock_tube_400.csv", case.grid, res.state, case.materials)
np.savetxt(out / "shock_tube_exact.csv", np.column_stack([case.grid.centers(0), smp.rho, smp.u, smp.p]),
           delimiter=",", header="x,rho,u,p", comments="", fmt="%.10g")
num = read_csv_1d(out / "shock_tube_400.csv")
print(f"max |p - p_exact| / p* at 400 cells: {np.max(np.abs(num['p'] - smp.p)) / sol.p_star:.3f} "
      "(concentrated at the shock and contact)")
