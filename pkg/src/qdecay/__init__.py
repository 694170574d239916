"""Single damped bosonic mode: closed-form decay and quantumness witnesses.

Two state families evolve in closed form under amplitude damping, a
coherent two-branch superposition (``css``) and a displaced squeezed
thermal Gaussian (``gss``), with a fidelity bridge between them and a
truncated-number-basis integrator (``oracle``) as the independent check.
"""

from .css import (
    CovarianceSnapshot,
    CssSnapshot,
    covariance_css,
    decoherence_time,
    entropy_css,
    mandel_q,
    photon_pdf_css,
    snapshot,
    squeeze_time_css,
    vacuum_fidelity,
    wigner_css,
)
from .errors import (
    ConfigError,
    NumericalConsistencyError,
    OrderLimitError,
    QDecayError,
    TailBudgetError,
    TruncationError,
    UnsupportedRegimeError,
)
from .fidelity import fidelity_css_gss
from .figures import FigureData, build_figure, figure_tags
from .gss import (
    G2Witness,
    GssSnapshot,
    char_time_gss,
    determinant_gss,
    energy_match_r0,
    entropy_gss,
    evolve_gss,
    g2_witness,
    mean_photon_gss,
    photon_pdf_gss,
    visibility_gss,
    wigner_gss_closed,
    wigner_gss_series,
)
from .oracle import (
    FockDensityMatrix,
    IntegrationPolicy,
    OracleWitnesses,
    build_css,
    build_gss,
    extract_witnesses,
    integrate_checkpoints,
    uhlmann_fidelity,
)
from .params import CssParams, GssParams, ReservoirParams

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "CovarianceSnapshot",
    "CssParams",
    "CssSnapshot",
    "FigureData",
    "FockDensityMatrix",
    "G2Witness",
    "GssParams",
    "GssSnapshot",
    "IntegrationPolicy",
    "NumericalConsistencyError",
    "OracleWitnesses",
    "OrderLimitError",
    "QDecayError",
    "ReservoirParams",
    "TailBudgetError",
    "TruncationError",
    "UnsupportedRegimeError",
    "build_css",
    "build_figure",
    "build_gss",
    "char_time_gss",
    "covariance_css",
    "decoherence_time",
    "determinant_gss",
    "energy_match_r0",
    "entropy_css",
    "entropy_gss",
    "evolve_gss",
    "extract_witnesses",
    "fidelity_css_gss",
    "figure_tags",
    "g2_witness",
    "integrate_checkpoints",
    "mandel_q",
    "mean_photon_gss",
    "photon_pdf_css",
    "photon_pdf_gss",
    "snapshot",
    "squeeze_time_css",
    "uhlmann_fidelity",
    "vacuum_fidelity",
    "visibility_gss",
    "wigner_css",
    "wigner_gss_closed",
    "wigner_gss_series",
    "__version__",
]
