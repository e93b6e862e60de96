"""Gaussian-state entanglement under Bogoliubov transformations."""

from ._bogent import (
    BogoCoeffs,
    EntanglementReport,
    GaussianState,
    NumericalError,
    apply_symplectic,
    cli_run,
    degenerate_nu_correction,
    figure1_sweep,
    frw_coefficients,
    frw_negativity,
    frw_pair_state,
    full_negativity,
    junction_coefficients,
    leading_negativity,
    linear_coefficients_closed_form,
    negativity,
    partial_trace,
    read_coeffs,
    single_mode_squeezed_state,
    symplectic_eigenvalues,
    symplectic_form,
    to_symplectic,
    vacuum_state,
    verify_identities,
    write_coeffs,
)

__version__ = "0.1.0"
