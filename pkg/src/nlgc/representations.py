"""Unitary representations of finite groups, ordinary and projective.

Irreps are extracted numerically by block diagonalizing the (possibly
phase-twisted) regular representation. Projective irreps for a given
factor system are obtained from ordinary irreps of a central extension.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import dagger
from .errors import InconsistencyError, ValidationError
from .groups import (FactorSystem, FiniteGroup, detect_root_order,
                     quotient_by_central_cyclic)
from .sbd import classify_equivalence, finest_sbd

NUM_TOL = 1e-9


@dataclass
class Representation:
    """Matrices U(f) with U(f) U(g) = mu(f, g) U(fg)."""

    group: FiniteGroup
    factor: FactorSystem
    matrices: np.ndarray          # (order, d, d)

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def characters(self) -> np.ndarray:
        return np.einsum("fii->f", self.matrices)

    def multiplication_defect(self) -> float:
        """Largest deviation from the twisted multiplication law."""
        t = self.group.table
        mu = self.factor.phases
        worst = 0.0
        for f in range(self.group.order):
            prod = np.einsum("ij,gjk->gik", self.matrices[f], self.matrices)
            target = mu[f, :, None, None] * self.matrices[t[f]]
            worst = max(worst, float(np.max(np.abs(prod - target))))
        return worst

    def unitarity_defect(self) -> float:
        d = self.dim
        eye = np.eye(d)
        return max(float(np.max(np.abs(dagger(m) @ m - eye))) for m in self.matrices)

    def validate(self, tol: float = 1e-8):
        if self.multiplication_defect() > tol:
            raise ValidationError("matrices violate the twisted multiplication law")
        if self.unitarity_defect() > tol:
            raise ValidationError("representation matrices must be unitary")


def trivial_factor(group: FiniteGroup) -> FactorSystem:
    return FactorSystem.trivial(group.order)


def regular_representation(group: FiniteGroup, factor: FactorSystem | None = None) -> Representation:
    """Permutation-with-phases representation R(f)[g, gf] = mu(g, f)."""
    n = group.order
    factor = factor or trivial_factor(group)
    mu = factor.phases
    mats = np.zeros((n, n, n), dtype=complex)
    rows = np.arange(n)
    for f in range(n):
        mats[f, rows, group.table[rows, f]] = mu[rows, f]
    return Representation(group, factor, mats)


def left_translation_ops(group: FiniteGroup, factor: FactorSystem | None = None) -> list[np.ndarray]:
    """Analytic basis of the commutant of the regular representation.

    The phased left translations L(h)[hg, g] = conj(mu(h, g)) commute with
    every R(f) and span the full commutant (their count matches its
    dimension), so downstream splitting can skip the null space solve.
    """
    n = group.order
    factor = factor or trivial_factor(group)
    mu = factor.phases
    out = []
    cols = np.arange(n)
    for h in range(n):
        l = np.zeros((n, n), dtype=complex)
        l[group.table[h, cols], cols] = mu[h, cols].conj()
        out.append(l)
    return out


_IRREP_CACHE: dict = {}


def _cache_key(group: FiniteGroup, factor: FactorSystem, seed: int) -> tuple:
    mu = np.round(factor.phases, 12)
    return (group.table.tobytes(), mu.tobytes(), seed)


def irreps_of(group: FiniteGroup, factor: FactorSystem | None = None,
              seed: int = 0, tol: float = 1e-8) -> list[Representation]:
    """All inequivalent irreps carrying the given factor system.

    Splits the twisted regular representation restricted to a generating
    set, classifies the resulting blocks, and keeps one representative per
    class evaluated on every group element. The squared dimensions always
    sum to the group order.
    """
    factor = factor or trivial_factor(group)
    key = _cache_key(group, factor, seed)
    if key in _IRREP_CACHE:
        return _IRREP_CACHE[key]

    reg = regular_representation(group, factor)
    gens = group.generating_set() or [group.identity]
    gen_mats = [reg.matrices[g] for g in gens]
    bs = finest_sbd(gen_mats, tol=tol, seed=seed,
                    commutant=left_translation_ops(group, factor))
    bs = classify_equivalence(bs, gen_mats, tol=tol)

    slices = bs.block_slices()
    s = bs.basis_change
    rotated = np.einsum("ij,fjk,kl->fil", dagger(s), reg.matrices, s)
    irreps = []
    for cls in bs.classes:
        sl = slices[cls.representative]
        irreps.append(Representation(group, factor, rotated[:, sl, sl].copy()))

    total = sum(r.dim ** 2 for r in irreps)
    if total != group.order:
        raise InconsistencyError(
            f"irrep dimensions square-sum to {total}, expected {group.order}")
    for r in irreps:
        r.validate(tol=1e-7)
    if factor.is_trivial and len(irreps) != len(group.conjugacy_classes()):
        raise InconsistencyError("irrep count does not match conjugacy classes")
    _IRREP_CACHE[key] = irreps
    return irreps


def irrep_dimensions(group: FiniteGroup, factor: FactorSystem | None = None,
                     seed: int = 0) -> list[int]:
    """Dimensions of all irreps; abelian groups with trivial twist shortcut to ones."""
    if (factor is None or factor.is_trivial) and group.is_abelian:
        return [1] * group.order
    return sorted(r.dim for r in irreps_of(group, factor, seed=seed))


def orthogonality_defect(irreps: list[Representation]) -> float:
    """Deviation from the row orthogonality of inequivalent irreps.

    sum_f U'(f^-1)[n', m'] U(f)[m, n] must equal (|G|/d) on matched indices
    of the same irrep and vanish otherwise.
    """
    group = irreps[0].group
    n = group.order
    worst = 0.0
    for a, ra in enumerate(irreps):
        inv_a = ra.matrices[group.inverses]            # U'(f^-1), indexed by f
        for b, rb in enumerate(irreps):
            # sums[n', m', m, n] = sum_f U'(f^-1)[n', m'] U(f)[m, n]
            sums = np.einsum("fnm,fpq->nmpq", inv_a, rb.matrices)
            if a == b:
                d = ra.dim
                target = np.zeros_like(sums)
                for m in range(d):
                    for nn in range(d):
                        target[nn, m, m, nn] = n / d
                worst = max(worst, float(np.max(np.abs(sums - target))))
            else:
                worst = max(worst, float(np.max(np.abs(sums))))
    return worst


def factor_phases_of(matrices: np.ndarray, group: FiniteGroup,
                     tol: float = 1e-8) -> np.ndarray:
    """Read the factor system off a projective representation's products."""
    n = group.order
    d = matrices.shape[1]
    mu = np.zeros((n, n), dtype=complex)
    for f in range(n):
        prods = np.einsum("ij,gjk->gik", matrices[f], matrices)
        targets = matrices[group.table[f]]
        mu[f, :] = np.einsum("gji,gjk->g", targets.conj(), prods) / d
    if np.max(np.abs(np.abs(mu) - 1.0)) > tol:
        raise ValidationError("matrix set is not projective up to phases")
    return mu


def gauge_normalize(matrices_list: list[np.ndarray], group: FiniteGroup,
                    tol: float = 1e-8) -> tuple[list[np.ndarray], FactorSystem]:
    """Rescale a family of same-factor projective reps to the standard gauge.

    After rescaling, mu is 1 whenever either argument is the identity or the
    arguments are mutual inverses, which makes U(f^-1) = U(f)† exactly. All
    inputs must share one factor system; the common rescaling keeps it shared.
    """
    n = group.order
    e = group.identity
    d0 = matrices_list[0].shape[1]
    alpha = np.trace(matrices_list[0][e]) / d0
    if abs(alpha - 1.0) > tol:
        # U(e) is only a phase times the identity; absorb that phase first
        matrices_list = [m.copy() for m in matrices_list]
        for m in matrices_list:
            m[e] = m[e] / alpha
    mu = factor_phases_of(matrices_list[0], group, tol=tol)
    c = np.ones(n, dtype=complex)
    for f in range(n):
        g = group.inv(f)
        if f == e:
            continue
        if f == g:
            c[f] = np.exp(-0.5j * np.angle(mu[f, f]))
        elif f < g:
            c[f] = 1.0
            c[g] = 1.0 / mu[f, g]
    new_list = [mats * c[:, None, None] for mats in matrices_list]
    new_mu = factor_phases_of(new_list[0], group, tol=tol)
    fs = FactorSystem(new_mu, root_order=detect_root_order(new_mu))
    fs.validate(group, strict=True)
    for mats in new_list[1:]:
        check = factor_phases_of(mats, group, tol=tol)
        if np.max(np.abs(check - new_mu)) > 1e-6:
            raise InconsistencyError("representations do not share one factor system")
    return new_list, fs


def projective_irreps_from_extension(l: FiniteGroup, z: int, r: int,
                                     seed: int = 0):
    """Projective irreps of l/<z> from ordinary irreps of l.

    Keeps the irreps representing the central element z as omega_r times
    the identity; evaluating them on fixed coset representatives yields
    projective irreps of the quotient whose factor system is
    omega_r ** n(f, g) with n from the lift. The induced factor system is
    normalized on the identity but generally not on inverse pairs; rescale
    with gauge_normalize before feeding it to anything that assumes
    U(f^-1) = U(f)†. r = 1 returns the ordinary irreps of l unchanged.

    Returns (quotient, irrep list, n_table).
    """
    if r == 1:
        n = l.order
        return l, irreps_of(l, seed=seed), np.zeros((n, n), dtype=int)
    if z not in l.center():
        raise ValidationError("z must be central")
    if l.element_order(z) != r:
        raise ValidationError(f"element {z} does not have order {r}")
    quotient, lift, n_table, _ = quotient_by_central_cyclic(l, z)
    omega = np.exp(2j * np.pi / r)
    mu_raw = omega ** n_table
    factor = FactorSystem(mu_raw, root_order=r)
    picked = []
    for ir in irreps_of(l, seed=seed):
        dz = ir.matrices[z]
        if np.allclose(dz, omega * np.eye(ir.dim), atol=1e-8):
            picked.append(Representation(quotient, factor, ir.matrices[lift]))
    if sum(p.dim ** 2 for p in picked) != quotient.order:
        raise InconsistencyError(
            "projective irreps from the extension do not exhaust the quotient order")
    for p in picked:
        p.validate()
    return quotient, picked, n_table


def pauli_projective_rep(dim: int):
    """Shift/clock projective representation of C_dim x C_dim, standard gauge.

    Returns (group, factor system, Representation). For dim = 2 these are
    the qubit Pauli operators up to signs.
    """
    from ._linalg import weyl_operator_basis
    from .groups import direct_product, cyclic
    group = direct_product(cyclic(dim), cyclic(dim))
    raw = np.stack(weyl_operator_basis(dim))
    fixed, fs = gauge_normalize([raw], group)
    rep = Representation(group, fs, fixed[0])
    rep.validate()
    return group, fs, rep
