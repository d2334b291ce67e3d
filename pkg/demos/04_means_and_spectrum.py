"""Window means, quadratic means and Bohr-Fourier coefficients of a realization."""

import math

from ergodic_lattice import (BumpSpec, Realization, SequenceStream, besicovitch_seminorm2,
                             mean_value, spectrum_scan)

bump = BumpSpec()
f = Realization(SequenceStream(7, 0.3), 0.0, bump)

m = mean_value(f, 1e4)
print(f"mean {m.value:.4f} +/- {m.stderr:.4f}; partials {[(r, round(v, 4)) for r, v in m.partials]}")
print(f"quadratic mean {besicovitch_seminorm2(f, 1e4).value:.4f}")

# with q != 1/2 the lattice frequencies carry (1 - 2q) times the bump transform
lams = [2 * math.pi * k for k in range(5)] + [math.sqrt(2), math.pi]
scan = spectrum_scan(f, lams, 1e4)
for k, (lam, c) in enumerate(zip(scan.lambdas, scan.coefficients)):
    # off the lattice 2*pi*Z the random signs cancel and the limit is 0
    expected = (1 - 2 * 0.3) * bump.fourier(lam) if k < 5 else 0.0
    print(f"  lambda={lam:7.4f}  |a|={abs(c):.4f}  limit {expected:.4f}")
