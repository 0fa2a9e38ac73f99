"""How often does a random eta give a vanishing regulator at a fixed p?

Draw eta uniformly mod p^2, keep units, and count.  Two comparators are
reported: the 1/p^f heuristic and the exact probability under the model
where alpha is uniform mod p.  They differ at order 1/p^2, which large runs
resolve.
"""
import sys

from thetareg.montecarlo import run_stats

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000

for field, p, exp in [("d6", 13, "joint"), ("d6", 13, "rank"), ("shanks:11", 43, "rank"), ("quintic11", 31, "theta2")]:
    rep = run_stats(field, p, trials, seed=1, experiment=exp)
    print(f"\n{field} p={p} {exp}: N0={rep.n0}")
    for key in rep.heuristic:
        d = rep.density(key)
        print(f"  {key:14s} {d:.6f}   heuristic {rep.heuristic[key]:.6f} (z={rep.zscore(key, rep.heuristic[key]):+.1f})"
              f"   exact {rep.exact[key]:.6f} (z={rep.zscore(key, rep.exact[key]):+.1f})")
