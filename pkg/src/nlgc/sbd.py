"""Finest simultaneous block diagonalization of matrix sets.

Given a finite set of square matrices, find a single unitary basis change
that puts every member into the same, finest possible, block diagonal
form, then sort the blocks into equivalence classes under simultaneous
unitary conjugation.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._linalg import connected_components, dagger, null_space, polar_unitary
from .errors import DimensionError, InconsistencyError, NondeterminismError

BLOCK_TOL = 1e-8


@dataclass
class EquivalenceClass:
    """Blocks carrying the same content up to a fixed unitary conjugation."""

    members: list            # block indices, first one is the representative
    intertwiners: dict       # block index -> unitary T with T R_rep T† = R_member

    @property
    def representative(self) -> int:
        return self.members[0]


@dataclass
class BlockStructure:
    """Unitary basis change plus the common block partition it induces."""

    basis_change: np.ndarray          # columns ordered block by block
    block_sizes: list                 # sizes in block order
    classes: list = field(default_factory=list)   # EquivalenceClass list, set by classify

    @property
    def dim(self) -> int:
        return self.basis_change.shape[0]

    def block_slices(self) -> list[slice]:
        out, start = [], 0
        for n in self.block_sizes:
            out.append(slice(start, start + n))
            start += n
        return out

    def transformed(self, m: np.ndarray) -> np.ndarray:
        s = self.basis_change
        return dagger(s) @ m @ s

    def blocks_of(self, m: np.ndarray) -> list[np.ndarray]:
        t = self.transformed(m)
        return [t[sl, sl] for sl in self.block_slices()]

    def off_block_mass(self, mats) -> float:
        """Largest magnitude found outside the blocks, over all matrices."""
        mask = np.ones((self.dim, self.dim), dtype=bool)
        for sl in self.block_slices():
            mask[sl, sl] = False
        worst = 0.0
        for m in mats:
            t = self.transformed(m)
            if mask.any():
                worst = max(worst, float(np.max(np.abs(t[mask]))))
        return worst

    def class_dims(self) -> list[int]:
        """One block size per equivalence class, in class order."""
        return [self.block_sizes[c.representative] for c in self.classes]


def gram_set(dec) -> list[np.ndarray]:
    """All products A_j† A_k of the Schmidt A side, row major in (j, k)."""
    return [dagger(aj) @ ak for aj in dec.a_ops for ak in dec.a_ops]


def commutant_basis(mats, rtol: float = 1e-9) -> list[np.ndarray]:
    """Basis of all X commuting with every matrix in the set and its adjoints.

    Solves the stacked linear conditions X M - M X = 0 by a null space
    computation (row-major vec convention).
    """
    d = mats[0].shape[0]
    eye = np.eye(d)
    family = list(mats) + [dagger(m) for m in mats]
    rows = [np.kron(m, eye) - np.kron(eye, m.T) for m in family]
    basis = null_space(np.vstack(rows), rtol=rtol)
    return [basis[:, j].reshape(d, d) for j in range(basis.shape[1])]


def commutant_dimension(mats, rtol: float = 1e-9) -> int:
    return len(commutant_basis(mats, rtol=rtol))


def _component_structure(mats, commutant, rng, tol):
    """One randomized splitting pass: eigenbasis of a generic commutant element."""
    d = mats[0].shape[0]
    x = np.zeros((d, d), dtype=complex)
    for k in commutant:
        x += (rng.standard_normal() + 1j * rng.standard_normal()) * k
    h = x + dagger(x)
    _, basis = np.linalg.eigh(h)

    adjacency = np.zeros((d, d), dtype=bool)
    for m in mats:
        t = np.abs(dagger(basis) @ m @ basis)
        adjacency |= t > tol
        adjacency |= t.T > tol
    np.fill_diagonal(adjacency, True)
    comps = connected_components(adjacency)
    comps.sort(key=lambda c: (len(c), c[0]))
    return basis, comps


def finest_sbd(mats, tol: float = BLOCK_TOL, seed: int = 0,
               commutant=None) -> BlockStructure:
    """Finest common block diagonalization of a matrix set.

    Algorithm: compute the commutant of the set joined with its adjoints,
    draw a random Hermitian commutant element, eigendecompose it, and read
    the blocks off the support graph of the transformed set. A second
    independent draw must reproduce the same block sizes, otherwise the
    split is declared unstable.
    """
    d = mats[0].shape[0]
    for m in mats:
        if m.shape != (d, d):
            raise DimensionError("all matrices must be square of equal size")
    if commutant is None:
        commutant = commutant_basis(mats)
    rng = np.random.default_rng(seed)
    basis_a, comps_a = _component_structure(mats, commutant, rng, tol)
    _, comps_b = _component_structure(mats, commutant, rng, tol)
    if sorted(len(c) for c in comps_a) != sorted(len(c) for c in comps_b):
        raise NondeterminismError(
            "block structure differs between independent random samples; "
            "loosen tol or check the input scale")

    order = [i for comp in comps_a for i in comp]
    s = basis_a[:, order]
    bs = BlockStructure(s, [len(c) for c in comps_a])
    worst = bs.off_block_mass(mats)
    if worst > tol:
        raise NondeterminismError(
            f"off-block residue {worst:.3e} exceeds tol after splitting")
    return bs


def _intertwiner(rep_blocks, mem_blocks, tol):
    """Unitary T with T R_rep T† = R_member for every listed block, or None."""
    n = rep_blocks[0].shape[0]
    eye = np.eye(n)
    rows = [np.kron(eye, rb.T) - np.kron(mb, eye)
            for rb, mb in zip(rep_blocks, mem_blocks)]
    ns = null_space(np.vstack(rows), rtol=1e-9)
    if ns.shape[1] == 0:
        return None
    t = ns[:, 0].reshape(n, n)
    scale = np.trace(dagger(t) @ t).real / n
    if scale <= tol:
        return None
    t = t / np.sqrt(scale)
    if np.linalg.norm(dagger(t) @ t - eye) > 1e-6:
        return None
    t = polar_unitary(t)
    worst = max(np.max(np.abs(t @ rb @ dagger(t) - mb))
                for rb, mb in zip(rep_blocks, mem_blocks))
    if worst > tol:
        return None
    flat = t.reshape(-1)
    idx = np.nonzero(np.abs(flat) > 1e-8)[0]
    phase = flat[idx[0]] / abs(flat[idx[0]])
    return t / phase


def classify_equivalence(bs: BlockStructure, mats, tol: float = BLOCK_TOL) -> BlockStructure:
    """Group blocks into classes equivalent under one unitary conjugation.

    Fills bs.classes. Each class stores, per member, the unitary mapping the
    representative block content onto the member block content simultaneously
    for every matrix in the set.
    """
    slices = bs.block_slices()
    per_block = [[bs.transformed(m)[sl, sl] for m in mats] for sl in slices]
    classes: list[EquivalenceClass] = []
    for alpha in range(len(slices)):
        placed = False
        for cls in classes:
            rep = cls.representative
            if bs.block_sizes[rep] != bs.block_sizes[alpha]:
                continue
            t = _intertwiner(per_block[rep], per_block[alpha], tol)
            if t is not None:
                cls.members.append(alpha)
                cls.intertwiners[alpha] = t
                placed = True
                break
        if not placed:
            n = bs.block_sizes[alpha]
            classes.append(EquivalenceClass([alpha], {alpha: np.eye(n, dtype=complex)}))
    bs.classes = classes
    return bs


def merge_blocks(bs: BlockStructure, partition: list[list[int]]) -> BlockStructure:
    """Coarsen a classified structure by fusing groups of blocks.

    partition lists block indices; every part becomes one block of the new
    structure (columns reordered so each part is contiguous). Singleton parts
    keep their equivalence grouping, fused parts each form their own class.
    """
    if sorted(i for part in partition for i in part) != list(range(len(bs.block_sizes))):
        raise DimensionError("partition must cover every block exactly once")
    slices = bs.block_slices()
    parts = [sorted(p) for p in partition]
    sized = [(sum(bs.block_sizes[i] for i in p), slices[p[0]].start, p) for p in parts]
    sized.sort(key=lambda t: (t[0], t[1]))

    cols = []
    new_sizes = []
    for size, _, part in sized:
        new_sizes.append(size)
        for i in part:
            cols.extend(range(slices[i].start, slices[i].stop))
    s = bs.basis_change[:, cols]
    merged = BlockStructure(s, new_sizes)

    new_index = {tuple(part): k for k, (_, _, part) in enumerate(sized)}
    classes = []
    used = set()
    for cls in bs.classes:
        singles = [m for m in cls.members if (m,) in new_index]
        if not singles:
            continue
        singles.sort(key=lambda m: new_index[(m,)])
        rep = singles[0]
        t_rep = cls.intertwiners[rep]
        members = [new_index[(m,)] for m in singles]
        inter = {new_index[(m,)]: cls.intertwiners[m] @ dagger(t_rep) for m in singles}
        classes.append(EquivalenceClass(members, inter))
        used.update(members)
    for _, _, part in sized:
        k = new_index[tuple(part)]
        if k not in used and len(part) > 1:
            n = sum(bs.block_sizes[i] for i in part)
            classes.append(EquivalenceClass([k], {k: np.eye(n, dtype=complex)}))
            used.add(k)
    classes.sort(key=lambda c: c.representative)
    merged.classes = classes
    if len({m for c in classes for m in c.members}) != len(new_sizes):
        raise InconsistencyError("merged class bookkeeping lost a block")
    return merged
