"""Extremal point configurations, incidence counts, Riesz energies, lattice
point statistics and finite-field pair counts, with a scaling harness that
checks measured log-log exponents against the predicted ones."""

from .errors import (
    CapacityError,
    DivergenceError,
    IncidenceLabError,
    InputError,
    ParameterError,
)
from .pointsets import (
    CantorParams,
    PointSet,
    gen_cantor_centers,
    gen_lattice,
    gen_lenz,
    gen_mattila2,
    gen_mattila3,
    gen_valtr,
)
from .gauge import EUCLIDEAN, PARABOLOID_BODY, Gauge, gauge_value, gauge_values, on_surface_exact
from .incidence import (
    ALL_CAPS,
    FalconerRatio,
    IncidenceReport,
    annulus_incidences,
    exact_valtr_incidences,
    falconer_measure_ratio,
)
from .energy import EnergyReport, MonteCarloEstimate, adaptability_sum, cube_self_energy, energy_decomposition
from .latticecount import (
    LatticeCountReport,
    LatticeIncidenceTotal,
    ball_count,
    lattice_incidence_total,
    shell_count,
)
from .ffield import (
    FFSet,
    FFSpectrum,
    ff_fourier,
    ff_pair_count,
    ff_paraboloid,
    ff_sphere,
    is_prime,
    sharpness_ratio,
    sharpness_set,
)
from .harness import (
    EXPERIMENTS,
    CrossoverReport,
    ScalingSeries,
    emit,
    fit_exponent,
    mattila_lattice_crossover,
    parse_series,
    run_experiment,
)

__version__ = "0.1.0"
