"""Completeness experiments for the radial Schroedinger equation."""

from ._core import (
    ConfigError,
    PotentialSpec,
    SolverError,
    SpecfunError,
    abel_sum,
    benchmark_config,
    benchmark_names,
    bessel_zeros,
    composite,
    coulomb_delta_kernel,
    coulomb_delta_kernel_free,
    coulomb_wave,
    find_box_kappas,
    find_box_momenta,
    free_particle,
    gaussian_nonlocal,
    kernel_box,
    pure_coulomb,
    riccati_bessel,
    run_config,
    square_well,
    woods_saxon,
)


def run_benchmark(name, output_dir, **overrides):
    """Run a shipped benchmark into output_dir; overrides use "section.key" names."""
    opts = {"output.output_dir": str(output_dir)}
    opts.update({k: str(v) for k, v in overrides.items()})
    return run_config(benchmark_config(name), opts)


__all__ = [
    "ConfigError",
    "PotentialSpec",
    "SolverError",
    "SpecfunError",
    "abel_sum",
    "benchmark_config",
    "benchmark_names",
    "bessel_zeros",
    "composite",
    "coulomb_delta_kernel",
    "coulomb_delta_kernel_free",
    "coulomb_wave",
    "find_box_kappas",
    "find_box_momenta",
    "free_particle",
    "gaussian_nonlocal",
    "kernel_box",
    "pure_coulomb",
    "riccati_bessel",
    "run_benchmark",
    "run_config",
    "square_well",
    "woods_saxon",
]
