"""Numeric conventions and the run-wide configuration record.

All rates, entropies and divergences are reported in units of log base
``LOG_BASE`` (bits). The CLI ``--nats`` flag converts on output only.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, fields

# Logarithm base used everywhere; 2.0 means bits.
LOG_BASE = 2.0
LN_BASE = math.log(LOG_BASE)

# Relative eigenvalue cutoff below which spectrum is treated as exactly zero
# when taking fractional powers (power on the support only).
SUPPORT_CUTOFF = 1e-12

# Eigenvalues above -PSD_TOL are accepted as nonnegative.
PSD_TOL = 1e-10

# Relative cutoff used when testing supp(rho) <= supp(sigma).
SUPPORT_CONTAINMENT_TOL = 1e-10

# Hermiticity tolerance for type invariants.
HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class RunConfig:
    """Knobs for optimization, sweeps and resource caps.

    Defaults implement the documented algorithm choices; every cap and
    tolerance can be overridden per call.
    """

    seed: int = 0

    # Simplex maximization (exponentiated gradient with multistart).
    multistarts: int = 16
    eg_max_iters: int = 10_000
    eg_grad_tol: float = 1e-9

    # Dense simplex grid certificate against local maxima.
    cert_grid_step: float = 0.02
    cert_grid_max_alphabet: int = 3

    # Alpha sweeps for the exponent bounds: coarse grid then golden section.
    alpha_grid_points: int = 64
    alpha_tol: float = 1e-10
    sphere_packing_alpha_min: float = 0.01
    achievability_alpha_min: float = 0.5
    # Evaluate the bound displays with their printed alpha ranges instead of
    # the transposed ones (see README discussion of the bound ranges).
    use_printed_alpha_ranges: bool = False

    # Critical-rate finite difference.
    fd_step: float = 1e-4
    richardson_tol: float = 1e-5

    # Resource caps.
    max_dim: int = 2 ** 14
    max_sim_dim: int = 256
    max_opt_alphabet: int = 8
    max_type_count: int = 1_000_000

    def __post_init__(self) -> None:
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name.startswith("max_") or f.name in ("multistarts", "eg_max_iters", "alpha_grid_points"):
                if v < 1:
                    raise ValueError(f"{f.name} must be >= 1, got {v}")
            elif f.name in ("eg_grad_tol", "cert_grid_step", "alpha_tol", "fd_step", "richardson_tol"):
                if v <= 0:
                    raise ValueError(f"{f.name} must be > 0, got {v}")
        if not 0 < self.sphere_packing_alpha_min < 1:
            raise ValueError("sphere_packing_alpha_min must lie in (0, 1)")
        if not 0 < self.achievability_alpha_min <= 1:
            raise ValueError("achievability_alpha_min must lie in (0, 1]")


DEFAULT_CONFIG = RunConfig()


def worker_count() -> int:
    """Worker parallelism cap from the CQEXP_THREADS env var (0 = auto)."""
    raw = os.environ.get("CQEXP_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        return 1
    if n <= 0:
        return os.cpu_count() or 1
    return n
