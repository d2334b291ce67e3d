"""Random +/-1 sequences, shifts and period detection on finite windows."""

import numpy as np

from ergodic_lattice import SequenceStream, detect_almost_periods_seq, detect_exact_periods
from ergodic_lattice.seqcore import PatternStream, shift_seq

# a stream is a pure function of (seed, q, index): nothing is stored
x = SequenceStream(seed=42, q=0.3)
sites = x.sites(np.arange(100_000))
print("fraction of -1 over 1e5 sites:", np.mean(sites == -1))

# shifting moves the index origin; composition adds offsets
y = shift_seq(x, 5)
print("site 0 of the shifted stream equals site 5 of the original:", y.site(0) == x.site(5))

# a typical window has no period at all
w = SequenceStream(7, 0.5).window(0, 64)
print("exact periods of a random window:", detect_exact_periods(w, 32).periods)

# for +/-1 values any tolerance below 2 is as strict as exact equality
periodic = PatternStream((1, 1, -1)).window(0, 64)
for eps in (0.5, 1.0, 1.99, 2.5):
    rep = detect_almost_periods_seq(periodic, eps, 12)
    print(f"eps={eps}: almost periods {rep.periods}")
