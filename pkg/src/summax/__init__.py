"""Sum-max stable laws: parametrization, C-L exponents, sampling and diagnostics."""
from .empirical import (ConvergenceReport, EmpiricalCL, PairLaw, convergence_report, empirical_cl,
                        rescaled_tail_estimate, truncated_mean_diagnostic)
from .exponent import (EvalPoint, ExtremeValueTarget, FrechetTarget, GumbelTarget, ReversedWeibullTarget,
                       cl_transform, independence_residual, psi, psi_complete_dependence,
                       psi_frechet_mix_closed, psi_general, psi_normal_mix)
from .measures import (Discrete, Frechet, LevyRepresentation, MixingMeasure, PointMass, ScalingExponent,
                       StdNormal, SumMaxStableParams, atom_slice_mass, complete_dependence_params,
                       frechet_mix_params, levy_mass, normal_mix_params, omega_tail, rect_mass,
                       scale_levy_rect)
from .rng import RandomStream
from .sampler import (PairSample, sample_compound_poisson, sample_frechet, sample_one_sided_stable,
                      sample_pair, sample_sum_max)
from .special import QuadratureError, QuadratureResult, gamma_fn, integrate, integrate_0_inf, upper_incomplete_gamma

__version__ = "0.1.0"
