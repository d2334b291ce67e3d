"""Random +/-1 lattice sums of a bump function, their shift dynamics and mean-value estimators."""

from .apscan import (DecompositionReport, FnAlmostPeriodReport, TrigPolynomial,
                     almost_period_scan_fn, lattice_frequencies, nullity_sampling_experiment,
                     project_ap, residual_report, wstar_membership_experiment)
from .bump import (BumpSpec, ProductPoint, Realization, bump_eval, bump_moments,
                   equicontinuity_modulus, floor_decompose, h_forward, h_inverse,
                   realization_eval)
from .dynamics import (CylinderEvent, InvarianceReport, birkhoff_average, cylinder_probability,
                       measure_preservation_test, s_apply, t_apply)
from .means import (MeanEstimate, SpectrumScan, besicovitch_seminorm2, bohr_coefficient,
                    mean_value, spectrum_scan)
from .seqcore import (PatternStream, PeriodReport, SequenceStream, SequenceWindow,
                      bernoulli_site, detect_almost_periods_seq, detect_exact_periods,
                      shift_seq, spawn_seeds)

__version__ = "0.1.0"
