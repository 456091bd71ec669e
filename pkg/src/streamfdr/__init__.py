"""Online FDR control for P-value streams.

Streaming decision rules (discovery-clock and discovery-count budget
schedules) with a static step-up baseline, generalized-Gaussian
distribution kernels, FDP/FNP metrics, and a seeded sparse-mixture
simulation harness.
"""

from .distributions import (
    AltPValueCDF,
    GGKernel,
    alt_pvalue_cdf,
    gg_quantile,
    gg_sample,
    gg_survival,
    mixture_pvalue_cdf,
    pvalue,
)
from .engines import (
    Decision,
    LondState,
    LordState,
    bh_mask,
    bh_reject,
    lond_levels,
    lond_step,
    lord_levels,
    lord_step,
    run_stream,
)
from .metrics import (
    CSV_COLUMNS,
    MetricsRecord,
    TruthLabels,
    fdp,
    fdp_at_horizons,
    fdp_fnp_from_mask,
    fnp,
    horizon_grid,
    pool,
)
from .schedules import LambdaSchedule, make_adaptive_schedule, make_power_schedule
from .simulation import (
    PROCEDURES,
    MixtureConfig,
    MixtureDataset,
    make_mixture,
    run_cell,
    run_grid,
    write_csv,
)

__version__ = "0.1.0"
