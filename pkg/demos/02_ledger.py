"""
The a priori constant ledger for the reactive scenario, before and after tuning.

Every bound is assembled from data alone: initial and boundary values,
the equilibrium function f, and three geometric constants of the square
(the membrane eigenvalue, the torsion-function flux and the Rellich
constants).  A simulation is then run to show that each bound dominates
the quantity it controls.  The free parameters only trade one term of
the chain against another, so tuning them tightens the final constant
without changing which quantities are being bounded.
"""
from thermosolutal import compute_ledger, load_scenario, simulate, tune_free_parameters
from thermosolutal.bounds import evaluate_ledger, prepare_inputs
from thermosolutal.harness import ledger_checks

from _common import CONFIGS, parser

args = parser(__doc__).parse_args()
sc = load_scenario(CONFIGS / "reactive.json").with_grid(args.grid).with_t_final(args.t_final)

dc = compute_ledger(sc)
s = dc.scalars()
print("geometry: lambda1 = {lambda1:.4f}  psi1 = {psi1:.4f}  c1 = {c1:.3f}  c2 = {c2:.3f}".format(**s))
print("data:     T_m = {T_m:.4f}  d1 = {d1:.4f}  d2 = {d2:.4f}  d5 = {d5:.4e}".format(**s))
print(f"branch:   {dc.c_bounds.branch}  (N = {dc.N:.3f})")

# Coordinate descent on log-parameters, minimising R(T)(alpha1 + alpha2).
inp = prepare_inputs(sc)
tuned = tune_free_parameters(inp)
print(f"objective: default {tuned.objective_default:.4e}  tuned {tuned.objective:.4e} "
      f"({tuned.evaluations} evaluations)")

traj = simulate(sc)
for label, fp in (("default", None), ("tuned", tuned.params)):
    d = dc if fp is None else evaluate_ledger(inp, fp)
    print(f"\n{label} parameters")
    for c in ledger_checks(traj, d):
        print("  " + c.line())
