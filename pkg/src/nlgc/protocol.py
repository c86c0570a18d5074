"""Exact branch-by-branch simulation of the local gate protocol.

Alice and Bob share a maximally entangled pair of |G|-level systems a, b.
Alice applies a controlled group representation, measures a in an unbiased
basis, and broadcasts h; Bob undoes the measurement phases with Z(h),
applies the correlation unitary M on b and his system, measures b, and
broadcasts g; Alice finishes with the correction V U(g)^dag on her system.
Every (h, g) branch is enumerated exactly, so determinism is an assertion
rather than a sample statistic.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._linalg import dagger, frobenius
from .errors import ValidationError
from .groups import FactorSystem, FiniteGroup

UNBIASED_TOL = 1e-12
M_UNITARY_TOL = 1e-8
DETERMINISM_TOL = 1e-9


@dataclass
class ProtocolTrace:
    """Outcome table of one exhaustive protocol run."""

    branch_outcomes: list[tuple[int, int]]
    branch_probabilities: np.ndarray
    branch_fidelities: np.ndarray
    m_matrix: np.ndarray
    f_matrix: np.ndarray
    deterministic: bool
    min_fidelity: float
    ebits: float
    cbits: float
    warnings: list[str] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "branches": len(self.branch_outcomes),
            "deterministic": self.deterministic,
            "minFidelity": self.min_fidelity,
            "probabilitySum": float(np.sum(self.branch_probabilities)),
            "ebits": self.ebits,
            "cbits": self.cbits,
        }


def shift_representation(group: FiniteGroup, factor: FactorSystem | None = None) -> np.ndarray:
    """R(f)|k> = mu(k f^-1, f) |k f^-1>, the translation action M is built from."""
    n = group.order
    mu = np.ones((n, n), dtype=complex) if factor is None else factor.phases
    mats = np.zeros((n, n, n), dtype=complex)
    cols = np.arange(n)
    for f in range(n):
        rows = group.table[cols, group.inverses[f]]
        mats[f, rows, cols] = mu[rows, f]
    return mats


def build_M(group: FiniteGroup, factor: FactorSystem | None, w_ops: np.ndarray) -> np.ndarray:
    """M = sum_f R(f) (x) W(f) on b (x) B.

    The (g, f) block of the result is mu(g, g^-1 f) W(g^-1 f); this identity
    is asserted entrywise before returning.
    """
    w_ops = np.asarray(w_ops, dtype=complex)
    n = group.order
    if w_ops.shape[0] != n:
        raise ValidationError("need one W operator per group element")
    shifts = shift_representation(group, factor)
    m = np.einsum("fgh,fjk->gjhk", shifts, w_ops).reshape(
        n * w_ops.shape[1], n * w_ops.shape[2])
    mu = np.ones((n, n), dtype=complex) if factor is None else factor.phases
    d = w_ops.shape[1]
    for g in range(n):
        for f in range(n):
            k = group.table[group.inverses[g], f]
            block = m[g * d:(g + 1) * d, f * d:(f + 1) * d]
            if frobenius(block - mu[g, k] * w_ops[k]) > 1e-10 * max(1.0, frobenius(w_ops[k])):
                raise ValidationError("translation blocks of M are inconsistent")
    return m


def check_M_unitary(m: np.ndarray, tol: float = M_UNITARY_TOL) -> tuple[bool, float]:
    """Frobenius deviation of M†M from the identity, with pass/fail at tol."""
    dev = frobenius(dagger(m) @ m - np.eye(m.shape[0]))
    return bool(dev <= tol), float(dev)


def fourier_basis(n: int) -> np.ndarray:
    """F[h, k] = omega^{hk} / sqrt(n); row h is the h-th measurement vector."""
    idx = np.arange(n)
    return np.exp(2j * np.pi * np.outer(idx, idx) / n) / np.sqrt(n)


def validate_unbiased(f_matrix: np.ndarray, tol: float = UNBIASED_TOL) -> None:
    """Measurement bases must be unbiased relative to the standard basis."""
    f_matrix = np.asarray(f_matrix, dtype=complex)
    n = f_matrix.shape[0]
    if f_matrix.shape != (n, n):
        raise ValidationError("measurement basis matrix must be square")
    if frobenius(f_matrix @ dagger(f_matrix) - np.eye(n)) > 1e-9:
        raise ValidationError("measurement basis matrix is not unitary")
    if np.max(np.abs(np.abs(f_matrix) - n ** -0.5)) > tol:
        raise ValidationError(
            "measurement basis is biased: entry magnitudes must all equal "
            "1/sqrt(%d)" % n)


def measurement_phase_correction(h: int, f_matrix: np.ndarray) -> np.ndarray:
    """Diagonal Z(h) on b cancelling the phases left by Alice's outcome h.

    After the controlled representation, outcome h leaves b (x) AB in
    sum_f conj(F[h,f]) |f> U(f)|psi>; Z(h) rescales each |f> amplitude to
    the common value 1/sqrt(|G|).
    """
    validate_unbiased(f_matrix)
    n = f_matrix.shape[0]
    return np.diag(1.0 / (np.sqrt(n) * np.conj(f_matrix[h])))


def random_states(dim: int, count: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    raw = rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


def simulate_protocol(expansion, psi: np.ndarray, f_matrix: np.ndarray | None = None) -> ProtocolTrace:
    """Run every (h, g) measurement branch of the protocol on one state.

    psi lives on A (x) B in the expansion's own orientation. The target is
    the compiled unitary applied to psi; each branch fidelity is the overlap
    of the corrected branch output with that target. A non-unitary M cannot
    be certified: the trace comes back flagged non-deterministic.
    """
    group = expansion.group
    n = group.order
    d_a, d_b = expansion.unitary.dim_a, expansion.unitary.dim_b
    psi = np.asarray(psi, dtype=complex).reshape(d_a * d_b)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-9:
        raise ValidationError("input state is not normalized")
    psi0 = psi.reshape(d_a, d_b)
    target = (expansion.unitary.matrix @ psi).reshape(d_a * d_b)

    if f_matrix is None:
        f_matrix = fourier_basis(n)
    validate_unbiased(f_matrix)

    m = build_M(group, expansion.factor, expansion.w_ops)
    m_ok, m_dev = check_M_unitary(m)
    warnings = [] if m_ok else [
        "M is not unitary (deviation %.3e): the group elements act through "
        "linearly dependent operators, so branch outcomes are not certified" % m_dev]

    u_mats = expansion.u_rep.matrices
    corrections = np.array([expansion.v @ dagger(u_mats[g]) for g in range(n)])
    controlled = np.array([u_mats[f] @ psi0 for f in range(n)])  # (n, dA, dB)

    outcomes: list[tuple[int, int]] = []
    probs = np.zeros(n * n)
    fids = np.zeros(n * n)
    for h in range(n):
        # unnormalized post-measurement state on b (x) A (x) B; squared norms
        # of its pieces are joint outcome probabilities
        amp = np.conj(f_matrix[h])[:, None, None] * controlled / np.sqrt(n)
        z = 1.0 / (np.sqrt(n) * np.conj(f_matrix[h]))
        amp = z[:, None, None] * amp
        # M acts on the joint (b, B) index
        stacked = amp.transpose(0, 2, 1).reshape(n * d_b, d_a)
        evolved = (m @ stacked).reshape(n, d_b, d_a)
        for g in range(n):
            branch = evolved[g]                       # (dB, dA)
            p = float(np.vdot(branch, branch).real)
            k = h * n + g
            outcomes.append((h, g))
            probs[k] = p
            if p <= 1e-24:
                fids[k] = 0.0
                continue
            final = (corrections[g] @ branch.T) / np.sqrt(p)
            fids[k] = abs(np.vdot(target, final.reshape(d_a * d_b)))
    total = float(np.sum(probs))

    live = probs > 1e-12
    min_fid = float(np.min(fids[live])) if np.any(live) else 0.0
    deterministic = bool(
        m_ok and abs(total - 1.0) <= DETERMINISM_TOL
        and min_fid >= 1.0 - DETERMINISM_TOL)
    return ProtocolTrace(
        branch_outcomes=outcomes,
        branch_probabilities=probs,
        branch_fidelities=fids,
        m_matrix=m,
        f_matrix=np.asarray(f_matrix, dtype=complex),
        deterministic=deterministic,
        min_fidelity=min_fid,
        ebits=float(np.log2(n)),
        cbits=float(2 * np.log2(n)) if n > 1 else 0.0,
        warnings=warnings,
    )
