"""Kerr-cat qubit simulator for flux-pumped STS and single-SQUID circuits."""

__version__ = "0.1.0"

from .fock import (  # noqa: F401
    DensityMatrix,
    FockSpace,
    Operator,
    StateVector,
    cat_state,
    coherent_state,
    ladder_ops,
    parity_operator,
    wigner,
)
