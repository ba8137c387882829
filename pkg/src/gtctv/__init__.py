"""Tensor completion with gradient-domain low-rank priors and plug-in denoisers."""

__version__ = "0.1.0"

from .transform import Transform
from .penalties import AbsPenalty, McpPenalty, ScadPenalty, make_penalty
from .prior import GtctvSpec, gtctv_value, prox_gtctv, gtctv_subgradient
from .denoisers import (
    BridgeDenoiser,
    GaussianConvDenoiser,
    IdentityDenoiser,
    check_spc,
    make_denoiser,
    residual_operator,
)
from .solver import (
    ObservationMask,
    SolverConfig,
    gtctv_dpc,
    lambda_schedule,
    resolvent_data,
    sigma_schedule,
    tol_mip,
)
from .metrics import bernoulli_mask, evaluate, mape, mpsnr, mssim, rmse
from .fileio import read_tensor, read_traffic_csv, write_tensor
from .config import load_config, parse_config
from .tsvd import f_penalty_value, tprod, tsvd, tsvf_shrinkage
