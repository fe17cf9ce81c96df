"""Bootstrap prediction and confidence bands for frequency response functions.

FRFs are mapped to real pseudo-impulse responses (PIRs), simultaneous bands
are computed on the PIRs with a pivoted bootstrap, and band excursions are
mapped back to the frequency domain.
"""

__version__ = "0.1.0"

from .analysis import (
    loo_coverage,
    loo_membership,
    mean_difference_spectrum,
    residual,
    residual_spectrum,
)
from .bootstrap import (
    BootstrapConstant,
    PairedTest,
    ResamplePlan,
    band_contains,
    confidence_band,
    confidence_constant,
    make_band,
    max_standardized_deviation,
    paired_h0_test,
    pointwise_mean,
    pointwise_sigma,
    prediction_band,
    prediction_constant,
)
from .core import (
    STANDARD_GRID,
    BandEstimate,
    BandKind,
    BandSpec,
    DegenerateError,
    FrequencyGrid,
    Frf,
    FrfError,
    FrfSet,
    Pir,
    ValidationError,
    validate_frf_set,
)
from .estimation import (
    PrtsConfig,
    RawTransfer,
    TimeSeries,
    band_average,
    default_band_spec,
    estimate_raw_transfer,
    generate_prts,
)
from .pir import (
    default_sample_rate,
    frf_from_pir,
    frfs_from_pirs,
    full_spectrum,
    fundamental_period,
    pir_from_frf,
    pirs_from_frfs,
)
from .synth import lowpass_frf, sample_population
