"""
Continuous dependence on the reaction coefficients, seen through twin runs.

Two solutions share all data and differ only in (L, K).  The energy F(t)
of their difference is compared with the bound R(t) (alpha1 l^2 + alpha2 k^2),
where l and k are the coefficient differences.  One batch integrates the
reference solution together with every perturbed partner, so all members
share the same time steps.
"""
import numpy as np

from thermosolutal import load_scenario
from thermosolutal.harness import twin_batch

from _common import CONFIGS, parser

args = parser(__doc__).parse_args()
sc = load_scenario(CONFIGS / "reference.json").with_grid(args.grid).with_t_final(args.t_final)
pairs = [(1.0, 1.0), (0.9, 1.0), (1.0, 0.9), (0.95, 0.95)]
reports, _ = twin_batch(sc, (1.0, 1.0), pairs)

print(f"{'(l, k)':>14} {'max F':>12} {'bound(T)':>12} {'max F/bound':>12}  holds")
for rep in reports:
    print(f"{f'({rep.l:g}, {rep.k:g})':>14} {rep.max_F:12.4e} {rep.bound[-1]:12.4e} "
          f"{rep.max_ratio:12.4e}  {rep.passed}")

# The bound is far from tight: the constants chain many worst-case estimates.
# The useful content is the shape, F = O(l^2 + k^2), which 04_scaling.py tests.
rep = reports[1]
i = np.linspace(0, len(rep.times) - 1, 5).astype(int)
print("\nl = 0.1 history:")
for t, F, b in zip(rep.times[i], rep.F[i], rep.bound[i]):
    print(f"  t = {t:.3f}   F = {F:.4e}   bound = {b:.4e}")
