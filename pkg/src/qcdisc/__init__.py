"""Quantum state and channel divergences, discrimination exponent bounds and an adaptive protocol simulator."""

from . import chandiv, channels, divergences, exponents, linmat, protosim
from .chandiv import SearchOptions, amortized_upper, channel_divergence, dmax_channel
from .channels import (
    CqChannel,
    EnvParamChannel,
    QuantumChannel,
    ReplacerChannel,
    make_cq,
    make_dephasing,
    make_erasure,
    make_gad,
    make_replacer,
)
from .divergences import divergence, parse_kind
from .exceptions import DimError, DomainError, Inconsistent, InvalidOperator, QcdError, Unsupported
from .exponents import BoundsReport, Setting, bounds_report

__version__ = "0.1.0"
