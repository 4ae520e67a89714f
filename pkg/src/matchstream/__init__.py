"""Streaming local search for submodular maximization under p-matchoid
constraints: multi-pass drivers with online certified approximation
factors, a randomized buffered variant for non-monotone objectives, exact
baselines, and an experiment harness."""

from .baselines import (ExactResult, brute_force_opt, enumerate_opt_unpruned,
                        max_feasible_subset, offline_greedy)
from .errors import (ConfigError, DomainError, InfeasibilityError,
                     MatchstreamError, PreconditionError, SizeError)
from .experiments import (ExperimentConfig, build_schedule, default_passes,
                          report_rows, run_experiment, write_trace)
from .instances import (FAMILIES, Instance, generate_instance, load_instance,
                        save_instance, stream_order)
from .matchoids import (GraphicMatroid, Matroid, PartitionMatroid, PMatchoid,
                        TransversalMatroid, UniformMatroid, compute_rank,
                        exchange_set, matchoid_feasible)
from .multipass import (GuaranteeCertificate, MultipassResult, Schedule,
                        certified_gamma, gamma_recurrence_step, multipass_run,
                        schedule_beta, worst_case_gamma)
from .objectives import (CoverageOracle, DirectedCutOracle, ModularOracle,
                         SubmodularOracle, TableOracle,
                         brute_force_check_submodular)
from .randomized import (BufferState, GuessGrid, LambdaCopyResult,
                         RandomizedPassRunner, RandomizedRunResult,
                         guess_grid, multipass_randomized, offline_solve,
                         randomized_pass)
from .streaming import (PassResult, SolutionState, nu_by_definition,
                        recompute_nu, streaming_pass)

__version__ = "0.1.0"
