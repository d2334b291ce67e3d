"""Removing the almost-periodic part leaves a residual that does not shrink.

For 0 < q < 1 a realization keeps an L1-mean residual near 4q(1-q) times
the bump integral after projecting out the lattice frequencies, however
many of them are used. Almost-periodic plus mean-zero functions would let
that residual go to 0.
"""

from ergodic_lattice import nullity_sampling_experiment, wstar_membership_experiment

for q in (0.5, 0.3, 0.01):
    rep = wstar_membership_experiment(seed=7, q=q, orders=[1, 2, 4, 8, 16], R=1e4)
    curve = ", ".join(f"K={K}: {r:.4f}" for K, r in zip(rep.orders, rep.residual_l1))
    print(f"q={q}: {curve}  (limit {rep.predicted_l1:.4f}, passed={rep.passed})")
    for note in rep.notes[1:]:
        print("   note:", note)

# the sampled sequences are never periodic, not even approximately
for kind in ("periodic", "almost_periodic"):
    r = nullity_sampling_experiment(kind, 100_000, 64, seed=3)
    print(f"{kind}: {r.count} of {r.n} windows, union bound {r.union_bound:.2e}")
