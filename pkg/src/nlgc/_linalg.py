"""Dense linear algebra helpers shared across the package."""
from __future__ import annotations

import numpy as np

from .errors import SingularInputError


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def unitarity_deviation(m: np.ndarray) -> float:
    """Frobenius distance of m†m from the identity."""
    d = m.shape[0]
    return float(np.linalg.norm(dagger(m) @ m - np.eye(d)))


def is_unitary(m: np.ndarray, tol: float = 1e-8) -> bool:
    return m.shape[0] == m.shape[1] and unitarity_deviation(m) <= tol


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (x + dagger(x)) / 2.0


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Unitary obtained by exponentiating a random anti-Hermitian matrix."""
    h = random_hermitian(dim, rng)
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(1j * evals)) @ dagger(evecs)


def random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def null_space(a: np.ndarray, rtol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis (columns) of the right null space of a."""
    if a.size == 0:
        return np.eye(a.shape[1], dtype=complex)
    # tall systems only need the economy factorization; wide ones need the
    # full row basis to expose every null direction
    _, s, vh = np.linalg.svd(a, full_matrices=a.shape[0] < a.shape[1])
    cutoff = rtol * max(1.0, s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return dagger(vh[rank:, :])


def polar_unitary(m: np.ndarray) -> np.ndarray:
    """Unitary factor of the polar decomposition of m."""
    u, _, vh = np.linalg.svd(m)
    return u @ vh


def gram_schmidt(columns: np.ndarray, expected_rank: int | None = None,
                 drop_tol: float = 1e-10) -> np.ndarray:
    """Orthonormalize columns left to right, dropping dependent ones.

    Processing order is fixed by the input column order so the result is
    deterministic. Raises SingularInputError when expected_rank is given and
    the span has a different dimension.
    """
    scale = max(np.max(np.abs(columns)) if columns.size else 0.0, 1.0)
    basis: list[np.ndarray] = []
    for j in range(columns.shape[1]):
        v = columns[:, j].astype(complex).copy()
        for b in basis:
            v -= b * (b.conj() @ v)
        # second pass stabilizes nearly dependent columns
        for b in basis:
            v -= b * (b.conj() @ v)
        norm = np.linalg.norm(v)
        if norm > drop_tol * scale:
            basis.append(v / norm)
    if expected_rank is not None and len(basis) != expected_rank:
        raise SingularInputError(
            f"column group spans dimension {len(basis)}, expected {expected_rank}")
    if not basis:
        return np.zeros((columns.shape[0], 0), dtype=complex)
    return np.column_stack(basis)


def connected_components(adjacency: np.ndarray) -> list[list[int]]:
    """Connected components of an undirected graph, each sorted ascending."""
    n = adjacency.shape[0]
    seen = np.zeros(n, dtype=bool)
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in np.nonzero(adjacency[i])[0]:
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        comps.append(sorted(comp))
    return comps


def weyl_operator_basis(dim: int) -> list[np.ndarray]:
    """Shift/clock operator basis: dim**2 matrices X^a Z^b, Tr(P†P') = dim δ."""
    omega = np.exp(2j * np.pi / dim)
    shift = np.roll(np.eye(dim, dtype=complex), 1, axis=0)
    clock = np.diag(omega ** np.arange(dim))
    ops = []
    for a in range(dim):
        for b in range(dim):
            ops.append(np.linalg.matrix_power(shift, a)
                       @ np.linalg.matrix_power(clock, b))
    return ops
