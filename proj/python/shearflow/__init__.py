from shearflow._core import (
    Grid,
    Params,
    make_grid,
    poisson_extend,
    mean_curvature,
    solve_capillary,
    sobolev_norm_surface,
    sobolev_norm_volume,
    equilibrium_residual,
    solve_stokes_stress,
    simulate,
    fit_decay,
    version,
)

__all__ = [
    "Grid",
    "Params",
    "make_grid",
    "poisson_extend",
    "mean_curvature",
    "solve_capillary",
    "sobolev_norm_surface",
    "sobolev_norm_volume",
    "equilibrium_residual",
    "solve_stokes_stress",
    "simulate",
    "fit_decay",
    "version",
]
