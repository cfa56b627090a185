"""Classical-quantum channels: a finite alphabet mapped to output states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NotClassical, NumericalInstability
from .linalg import hermitize, validate_density_matrix


@dataclass(frozen=True)
class CQChannel:
    """Map x -> rho_x with a common output dimension.

    ``outputs`` has shape (alphabet size, d, d); every slice is validated
    as a density matrix at construction. Instances are treated as
    immutable; do not mutate the arrays after building one.
    """

    outputs: np.ndarray
    alphabet: tuple[str, ...]

    def __post_init__(self) -> None:
        outs = np.asarray(self.outputs, dtype=complex)
        if outs.ndim != 3 or outs.shape[1] != outs.shape[2]:
            raise DimensionError(f"outputs must have shape (k, d, d), got {outs.shape}")
        if outs.shape[0] < 1:
            raise DimensionError("channel needs at least one letter")
        for rho in outs:
            validate_density_matrix(rho, tol=1e-8)
        object.__setattr__(self, "outputs", outs)
        labels = tuple(str(a) for a in self.alphabet)
        if len(labels) != outs.shape[0]:
            raise DimensionError(
                f"{len(labels)} labels for {outs.shape[0]} outputs"
            )
        object.__setattr__(self, "alphabet", labels)

    @classmethod
    def from_states(cls, states, alphabet=None) -> "CQChannel":
        outs = np.stack([np.asarray(s, dtype=complex) for s in states])
        if alphabet is None:
            alphabet = tuple(str(i) for i in range(outs.shape[0]))
        return cls(outputs=outs, alphabet=tuple(alphabet))

    @classmethod
    def from_stochastic_matrix(cls, w, alphabet=None) -> "CQChannel":
        """Embed a classical channel: row x becomes the diagonal state diag(W[x])."""
        w = np.asarray(w, dtype=float)
        if w.ndim != 2:
            raise DimensionError(f"stochastic matrix must be 2-D, got shape {w.shape}")
        states = [np.diag(row.astype(complex)) for row in w]
        return cls.from_states(states, alphabet=alphabet)

    @property
    def size(self) -> int:
        return self.outputs.shape[0]

    @property
    def dim(self) -> int:
        return self.outputs.shape[1]

    def tensor(self, other: "CQChannel") -> "CQChannel":
        """Product channel on the joint alphabet, (x, y) -> rho_x (x) rho_y."""
        states = []
        labels = []
        for a, ra in zip(self.alphabet, self.outputs):
            for b, rb in zip(other.alphabet, other.outputs):
                states.append(np.kron(ra, rb))
                labels.append(f"({a},{b})")
        return CQChannel.from_states(states, alphabet=labels)

    def permuted(self, perm) -> "CQChannel":
        """Relabeled channel: letter i of the result is letter perm[i] here."""
        perm = list(perm)
        return CQChannel.from_states(
            [self.outputs[i] for i in perm],
            alphabet=[self.alphabet[i] for i in perm],
        )

    def is_classical(self, tol: float = 1e-10) -> bool:
        """Whether every pair of outputs commutes."""
        k = self.size
        for i in range(k):
            for j in range(i + 1, k):
                comm = self.outputs[i] @ self.outputs[j] - self.outputs[j] @ self.outputs[i]
                if float(np.abs(comm).max()) > tol:
                    return False
        return True

    def common_eigenbasis(self, tol: float = 1e-8, attempts: int = 8) -> np.ndarray:
        """Unitary whose columns simultaneously diagonalize all outputs.

        Uses the generic trick of diagonalizing a random positive
        combination; retries with fresh weights break accidental
        degeneracies. Raises NotClassical for non-commuting outputs.
        """
        if not self.is_classical():
            raise NotClassical("channel outputs do not commute")
        rng = np.random.default_rng(20240)
        for _ in range(attempts):
            weights = rng.uniform(0.5, 1.5, size=self.size)
            combo = hermitize(np.einsum("m,mij->ij", weights, self.outputs))
            _, v = np.linalg.eigh(combo)
            ok = True
            for rho in self.outputs:
                rot = v.conj().T @ rho @ v
                off = rot - np.diag(np.diag(rot))
                if float(np.abs(off).max()) > tol:
                    ok = False
                    break
            if ok:
                return v
        raise NumericalInstability("failed to find a common eigenbasis")

    def induced_stochastic_matrix(self, tol: float = 1e-8) -> np.ndarray:
        """Classical transition matrix W[x, y] in the common eigenbasis."""
        v = self.common_eigenbasis(tol=tol)
        w = np.empty((self.size, self.dim), dtype=float)
        for x, rho in enumerate(self.outputs):
            w[x] = np.clip(np.real(np.diag(v.conj().T @ rho @ v)), 0.0, None)
        return w
