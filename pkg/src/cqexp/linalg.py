"""Exact dense Hermitian linear algebra on finite-dimensional spaces.

Matrices are plain complex ``numpy`` arrays; the helpers here enforce the
structural invariants (Hermiticity, positivity, unit trace) and implement
the operations everything else is built from: eigendecompositions,
fractional powers on supports, tensor products, partial traces and
classical-quantum state assembly.

Every function is pure; composite results are re-Hermitized to suppress
floating-point drift.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_CONFIG, LN_BASE, PSD_TOL, SUPPORT_CUTOFF
from .errors import DimensionError, InvalidOperator, NotPSD, TooLarge


def hermitize(a: np.ndarray) -> np.ndarray:
    """Hermitian part (A + A^dagger)/2."""
    return (a + a.conj().T) / 2


def is_hermitian(a: np.ndarray, tol: float = 1e-10) -> bool:
    scale = max(1.0, float(np.abs(a).max())) if a.size else 1.0
    return bool(np.abs(a - a.conj().T).max() <= tol * scale)


def herm_eig(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues in descending order, matching orthonormal
    eigenvector columns). Raises InvalidOperator when the input is not
    Hermitian within tolerance.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidOperator(f"expected a square matrix, got shape {h.shape}")
    if not is_hermitian(h):
        raise InvalidOperator("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(hermitize(h))
    return w[::-1].copy(), v[:, ::-1].copy()


def _support_clip(w: np.ndarray) -> np.ndarray:
    """Zero out spectrum below the relative support cutoff."""
    top = float(w.max()) if w.size else 0.0
    cut = SUPPORT_CUTOFF * max(top, 0.0)
    out = np.where(w > cut, w, 0.0)
    return out


def mat_power(a: np.ndarray, t: float) -> np.ndarray:
    """Fractional power of a PSD matrix, taken on its support.

    Eigenvalues below the relative cutoff are treated as exactly zero and
    mapped to zero even for negative exponents. Raises NotPSD when an
    eigenvalue falls below the negativity tolerance.
    """
    w, v = herm_eig(a)
    scale = max(1.0, float(w.max())) if w.size else 1.0
    if w.size and float(w.min()) < -PSD_TOL * scale:
        raise NotPSD(f"matrix has eigenvalue {w.min():.3e} below tolerance")
    w = _support_clip(w)
    pw = np.zeros_like(w)
    on = w > 0
    pw[on] = w[on] ** t
    return hermitize((v * pw) @ v.conj().T)


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def tensor_all(mats: Sequence[np.ndarray], cap: int | None = None) -> np.ndarray:
    """Kronecker chain over a nonempty sequence of matrices.

    The result dimension is capped (default config limit) because chained
    products grow exponentially.
    """
    cap = DEFAULT_CONFIG.max_dim if cap is None else cap
    total = 1
    for m in mats:
        total *= np.asarray(m).shape[0]
    if total > cap:
        raise TooLarge(f"tensor chain dimension {total} exceeds cap {cap}")
    out = np.asarray(mats[0], dtype=complex)
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def partial_trace(m: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out all tensor factors not listed in ``keep``.

    ``dims`` lists the factor dimensions; their product must equal the
    matrix dimension. Kept factors stay in their original relative order.
    """
    m = np.asarray(m, dtype=complex)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise DimensionError(f"dims {dims} do not factor a {m.shape} matrix")
    keep = sorted(set(int(i) for i in keep))
    if any(i < 0 or i >= len(dims) for i in keep):
        raise DimensionError(f"keep indices {keep} out of range for {len(dims)} factors")
    k = len(dims)
    work = m.reshape(dims + dims)
    traced = [i for i in range(k) if i not in keep]
    remaining = k
    for i in reversed(traced):
        work = np.trace(work, axis1=i, axis2=i + remaining)
        remaining -= 1
    kept_dim = int(np.prod([dims[i] for i in keep])) if keep else 1
    return work.reshape(kept_dim, kept_dim)


def permute_systems(m: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors: factor ``perm[i]`` of the input becomes factor ``i``."""
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise DimensionError(f"dims {dims} do not factor a {m.shape} matrix")
    k = len(dims)
    perm = list(perm)
    if sorted(perm) != list(range(k)):
        raise DimensionError(f"perm {perm} is not a permutation of {k} factors")
    work = m.reshape(dims + dims)
    work = work.transpose(perm + [p + k for p in perm])
    new_dims = [dims[p] for p in perm]
    return work.reshape(int(np.prod(new_dims)), int(np.prod(new_dims)))


def validate_density_matrix(rho: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Check Hermiticity, positivity and unit trace; return as complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidOperator(f"expected a square matrix, got shape {rho.shape}")
    if not is_hermitian(rho, tol=max(tol, 1e-12)):
        raise InvalidOperator("density matrix is not Hermitian within tolerance")
    w = np.linalg.eigvalsh(hermitize(rho))
    if float(w.min()) < -tol:
        raise NotPSD(f"density matrix has eigenvalue {w.min():.3e}")
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > tol:
        raise InvalidOperator(f"density matrix trace {tr} differs from 1")
    return rho


def validate_prior(p, size: int | None = None, tol: float = PSD_TOL) -> np.ndarray:
    """Check a probability vector (nonnegative, sums to one)."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise InvalidOperator(f"prior must be a vector, got shape {p.shape}")
    if size is not None and p.shape[0] != size:
        raise DimensionError(f"prior length {p.shape[0]} != alphabet size {size}")
    if float(p.min(initial=0.0)) < -tol:
        raise InvalidOperator(f"prior has negative weight {p.min():.3e}")
    if abs(float(p.sum()) - 1.0) > tol:
        raise InvalidOperator(f"prior sums to {p.sum()}, expected 1")
    return np.clip(p, 0.0, None)


@dataclass(frozen=True)
class CQState:
    """Classical-quantum state: classical weights with one output block each.

    Represents sum_x p_x |x><x| (x) rho_x without materializing the block
    diagonal unless asked to.
    """

    prior: np.ndarray
    states: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        p = validate_prior(self.prior, size=len(self.states))
        object.__setattr__(self, "prior", p)
        dims = {s.shape for s in self.states}
        if len(dims) != 1:
            raise DimensionError(f"CQ blocks have mixed dimensions {dims}")

    @property
    def alphabet_size(self) -> int:
        return len(self.states)

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    @property
    def blocks(self) -> tuple[tuple[float, np.ndarray], ...]:
        return tuple((float(w), s) for w, s in zip(self.prior, self.states))

    def to_matrix(self) -> np.ndarray:
        """Block-diagonal matrix on the (classical x quantum) product space."""
        k, d = self.alphabet_size, self.dim
        out = np.zeros((k * d, k * d), dtype=complex)
        for x, (w, s) in enumerate(zip(self.prior, self.states)):
            out[x * d:(x + 1) * d, x * d:(x + 1) * d] = w * s
        return out

    def b_marginal(self) -> np.ndarray:
        """Reduced state on the quantum factor: sum_x p_x rho_x."""
        return hermitize(sum(w * s for w, s in zip(self.prior, self.states)))


def cq_state(channel, prior) -> CQState:
    """Assemble the joint classical-quantum state of a channel and a prior."""
    p = validate_prior(prior, size=channel.size)
    return CQState(prior=p, states=tuple(channel.outputs))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy -sum lambda log2 lambda in bits, with 0 log 0 = 0."""
    w = np.linalg.eigvalsh(hermitize(np.asarray(rho, dtype=complex)))
    w = _support_clip(np.clip(w, 0.0, None))
    on = w > 0
    h = float(-(w[on] * np.log(w[on])).sum() / LN_BASE)
    return min(max(h, 0.0), np.log(len(w)) / LN_BASE)


def log_base_psd(a: np.ndarray) -> np.ndarray:
    """Matrix log (base LOG_BASE) of a PSD matrix, restricted to its support."""
    w, v = herm_eig(a)
    w = _support_clip(np.clip(w, 0.0, None))
    lw = np.zeros_like(w)
    on = w > 0
    lw[on] = np.log(w[on]) / LN_BASE
    return hermitize((v * lw) @ v.conj().T)
