"""
Quadratic rate: halving the coefficient gap quarters the difference energy.

For each direction d in the (l, k) plane and each factor s, a partner with
coefficients (L, K) - s d is run against the reference.  The slope of
log max F against log s is the observed order, expected to be 2.
"""
from thermosolutal import load_scenario
from thermosolutal.harness import TwinSpec, scaling_studies

from _common import CONFIGS, parser

args = parser(__doc__).parse_args()
sc = load_scenario(CONFIGS / "reference.json").with_grid(args.grid).with_t_final(args.t_final)
spec = TwinSpec(sc, (1.0, 1.0), (0.9, 1.0))
factors = [0.1, 0.05, 0.025]
for res in scaling_studies(spec, factors, [(1, 0), (0, 1), (1, 1)]):
    row = "  ".join(f"{f:g}: {F:.3e}" for f, F in zip(res.factors, res.max_F))
    print(f"direction {res.direction}: slope {res.slope:.4f}   max F  {row}")
