"""Translations, the skew shift on (sequence, angle) pairs, and invariance of the measure."""

from ergodic_lattice import (CylinderEvent, Realization, SequenceStream, birkhoff_average,
                             h_forward, measure_preservation_test, s_apply, t_apply)
from ergodic_lattice.dynamics import random_product_point, space_average_eval0

omega = Realization(SequenceStream(3, 0.5), 0.4)
z = 7.3
# translating the function is the same as rotating the angle and carrying into the sequence
lhs, rhs = h_forward(t_apply(z, omega)), s_apply(z, h_forward(omega))
print("conjugacy holds:", lhs.stream == rhs.stream, abs(lhs.theta - rhs.theta))

# the product measure does not notice the shift
event = CylinderEvent({0: -1, 2: 1}, (0.25, 0.75))
for shift in (0.5, 3.7, 17.25):
    r = measure_preservation_test(event, shift, 0.3, 100_000, seed=1)
    print(f"z={shift}: before {r.freq_before:.4f} after {r.freq_after:.4f} "
          f"exact {r.exact_prob:.4f} p={r.chi2_pvalue:.3f}")

# time averages of omega(0) along the orbit match the space average
for q in (0.5, 0.3):
    est = birkhoff_average("eval0", random_product_point(11, q), 1e4)
    print(f"q={q}: time average {est.value:+.4f}, space average {space_average_eval0(q, omega.bump):+.4f}")
