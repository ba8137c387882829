"""Run configuration: a flat JSON document validated against a schema.

Defaults follow the reference hyperparameters (tau = 1, rho0 = 1e-4,
nu = 1.02, eps = 1e-4, n_max = 200); the stepsize admissibility gate and
the shrinkage well-posedness gate both fire at load time.
"""

import json

import jsonschema

from .denoisers import make_denoiser
from .penalties import make_penalty
from .prior import GtctvSpec
from .solver import SolverConfig
from .transform import Transform

__all__ = ["CONFIG_SCHEMA", "load_config", "parse_config", "default_config"]

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "transform": {
            "type": "object",
            "properties": {"kind": {"enum": ["dct", "dft"]}},
            "required": ["kind"],
        },
        "penalty": {
            "type": "object",
            "properties": {
                "type": {"enum": ["abs", "scad", "mcp"]},
                "phi": {"type": "number", "exclusiveMinimum": 0},
                "omega": {"type": "number", "exclusiveMinimum": 1},
            },
            "required": ["type"],
        },
        "denoiser": {
            "type": "object",
            "properties": {
                "kind": {"enum": ["identity", "gaussian", "bridge"]},
                "kernel_sigma": {"type": "number", "exclusiveMinimum": 0},
                "radius": {"type": "integer", "minimum": 1},
                "sigma_scales_kernel": {"type": "boolean"},
                "endpoint": {"type": "string"},
                "declared_k": {"type": "number", "minimum": 0, "maximum": 1},
            },
            "required": ["kind"],
        },
        "gamma_dirs": {
            "type": "array",
            "items": {"type": "integer", "minimum": 1},
            "minItems": 1,
        },
        "tau": {"type": "number", "exclusiveMinimum": 0},
        "alpha": {"type": "number", "minimum": 0},
        "sigma0": {"type": "number", "exclusiveMinimum": 0},
        "nu": {"type": "number", "minimum": 1},
        "eps": {"type": "number", "exclusiveMinimum": 0},
        "eps_inner": {"type": "number", "exclusiveMinimum": 0},
        "n_in": {"type": "integer", "minimum": 1},
        "n_max": {"type": "integer", "minimum": 1},
        "rho0": {"type": "number", "exclusiveMinimum": 0},
        "lambda_t0": {"type": "integer", "minimum": 1},
        "rho_persist": {"type": "boolean"},
        "accelerate": {"type": "boolean"},
        "tol_mip_every": {"type": "integer", "minimum": 0},
        "allow_unsafe_stepsize": {"type": "boolean"},
        "seed": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}


def default_config():
    return {
        "transform": {"kind": "dct"},
        "penalty": {"type": "abs"},
        "denoiser": {"kind": "identity"},
        "gamma_dirs": [1, 2],
        "tau": 1.0,
        "alpha": 0.0,
        "sigma0": 0.3,
        "nu": 1.02,
        "eps": 1e-4,
        "n_in": 5,
        "n_max": 200,
        "rho0": 1e-4,
        "lambda_t0": 100,
        "rho_persist": False,
        "accelerate": True,
        "tol_mip_every": 10,
        "allow_unsafe_stepsize": False,
        "seed": 0,
    }


def parse_config(doc):
    """Validate a config mapping and build the solver configuration."""
    merged = default_config()
    merged.update(doc)
    jsonschema.validate(merged, CONFIG_SCHEMA)
    pen_cfg = dict(merged["penalty"])
    penalty = make_penalty(
        pen_cfg["type"], phi=pen_cfg.get("phi", 1.0), omega=pen_cfg.get("omega", 3.7)
    )
    spec = GtctvSpec(
        dirs=tuple(merged["gamma_dirs"]),
        penalty=penalty,
        transform=Transform(merged["transform"]["kind"]),
    )
    denoiser = make_denoiser(merged["denoiser"])
    config = SolverConfig(
        spec=spec,
        denoiser=denoiser,
        tau=merged["tau"],
        alpha=merged["alpha"],
        sigma0=merged["sigma0"],
        nu=merged["nu"],
        eps=merged["eps"],
        eps_inner=merged.get("eps_inner"),
        n_in=merged["n_in"],
        n_max=merged["n_max"],
        rho0=merged["rho0"],
        lambda_t0=merged["lambda_t0"],
        rho_persist=merged["rho_persist"],
        accelerate=merged["accelerate"],
        tol_mip_every=merged["tol_mip_every"],
        allow_unsafe_stepsize=merged["allow_unsafe_stepsize"],
    )
    return config, merged


def load_config(path):
    """Load and validate a JSON run configuration file."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return parse_config(doc)
