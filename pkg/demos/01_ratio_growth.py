"""How the sieve ratio grows with X for the all-ones coefficients.

For each X the script enumerates the order ball and the set S in two
dimensions, evaluates the sieve sum and prints it next to the majorants.
The ratio column is LHS / ||c||^2.
"""

from largesieve.experiments import run_ratio_experiment

N = 4

print(f"{'set':>10} {'X':>4} {'|set|':>6} {'ratio':>12} {'gallagher':>12} {'improved':>12}")
for kind in ("order_ball", "S"):
    for X in (4, 8, 12, 16):
        r = run_ratio_experiment(2, X, N, set_kind=kind)
        print(
            f"{kind:>10} {X:>4} {r.extra['point_count']:>6} {r.ratio:>12.2f} "
            f"{r.majorants['gallagher']:>12.1f} {r.majorants['improved']:>12.1f}"
        )
        assert r.ok, r.checks
