from ._core import (
    FfmorError,
    Model,
    band_gain_bound,
    eval_transfer,
    hankel_singular_values,
    hinf_norm,
    load_model,
    lyabt,
    min_order_for_tolerance,
    pfdbt,
    rho_star,
    rho_threshold,
    save_model,
    sigma_sweep,
    spa,
)

__all__ = [
    "FfmorError",
    "Model",
    "band_gain_bound",
    "eval_transfer",
    "hankel_singular_values",
    "hinf_norm",
    "load_model",
    "lyabt",
    "min_order_for_tolerance",
    "pfdbt",
    "rho_star",
    "rho_threshold",
    "save_model",
    "sigma_sweep",
    "spa",
]
