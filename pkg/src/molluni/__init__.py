"""Mollified (discrete) uniform distributions and soft-clipping models."""

from .ar1 import Ar1ScModel, StationaryAnalysis, stationary_analysis, sweep_figure3
from .continuous import MollifiedUniform, kurtosis_curve
from .discrete import DiscreteMollifiedUniform, SkellamSpec, kurtosis_argmax
from .glm import GlmDataset, SoftClipGlm, fit_mle, fit_ols, run_example2
from .mollifiers import Family, MollifierSpec
from .softclip import crelu, sc, sc_inv

__version__ = "0.1.0"

__all__ = [
    "Ar1ScModel",
    "DiscreteMollifiedUniform",
    "Family",
    "GlmDataset",
    "MollifiedUniform",
    "MollifierSpec",
    "SkellamSpec",
    "SoftClipGlm",
    "StationaryAnalysis",
    "crelu",
    "fit_mle",
    "fit_ols",
    "kurtosis_argmax",
    "kurtosis_curve",
    "run_example2",
    "sc",
    "sc_inv",
    "stationary_analysis",
    "sweep_figure3",
]
