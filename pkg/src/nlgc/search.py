"""Search for the smallest group whose irrep dimensions fit a block structure.

Candidates are generated in ascending group order. At each order, ordinary
representations of catalog groups are tried before projective ones obtained
through central extensions, and coarser block-merge plans only become
eligible once the order reaches their dimension-square sum.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .groups import FiniteGroup, are_isomorphic, builtin_catalog
from .representations import (Representation, gauge_normalize, irreps_of,
                              irrep_dimensions,
                              projective_irreps_from_extension)
from .sbd import BlockStructure, EquivalenceClass, merge_blocks

MERGE_ENUMERATION_CAP = 8


@dataclass
class SearchCandidate:
    """One (group, factor system, irrep assignment) proposal.

    assignment[i] indexes into irreps for the i-th equivalence class of
    structure; route records how the candidate was found.
    """

    group: FiniteGroup
    irreps: list[Representation]
    assignment: list[int]
    structure: BlockStructure
    plan: list[list[int]]
    route: str                       # "ordinary" | "projective"
    warnings: list[str] = field(default_factory=list)

    @property
    def factor(self):
        return self.irreps[0].factor

    @property
    def order(self) -> int:
        return self.group.order


def set_partitions(items: list) -> list[list[list]]:
    """All partitions of items, deterministic order, singletons-first."""
    if not items:
        return [[]]
    first, rest = items[0], items[1:]
    out = []
    for sub in set_partitions(rest):
        out.append([[first]] + sub)
        for i in range(len(sub)):
            out.append(sub[:i] + [[first] + sub[i]] + sub[i + 1:])
    return out


def trivial_structure(dims: list[int]) -> BlockStructure:
    """Identity-basis structure with one block and one class per dimension."""
    total = sum(dims)
    classes = [EquivalenceClass(members=[i], intertwiners={i: np.eye(d, dtype=complex)})
               for i, d in enumerate(dims)]
    return BlockStructure(np.eye(total, dtype=complex), list(dims), classes)


def _plan_cost(structure: BlockStructure, plan: list[list[int]]) -> int:
    """Dimension-square sum of the classes the plan produces."""
    sizes = structure.block_sizes
    absorbed = {b for part in plan for b in part if len(part) > 1}
    total = 0
    for cls in structure.classes:
        if any(m not in absorbed for m in cls.members):
            total += sizes[cls.representative] ** 2
    for part in plan:
        if len(part) > 1:
            total += sum(sizes[b] for b in part) ** 2
    return total


def merge_plans(structure: BlockStructure) -> list[tuple[int, list[list[int]]]]:
    """(cost, plan) pairs sorted by cost then by fineness.

    Enumerates every partition of the block list up to MERGE_ENUMERATION_CAP
    blocks; beyond that only the finest and the fully merged plans are kept.
    """
    n = len(structure.block_sizes)
    if n <= MERGE_ENUMERATION_CAP:
        plans = set_partitions(list(range(n)))
    else:
        plans = [[[i] for i in range(n)], [list(range(n))]]
    keyed = []
    for plan in plans:
        parts = sorted([sorted(p) for p in plan], key=lambda p: p[0])
        keyed.append((_plan_cost(structure, parts), -len(parts),
                      tuple(tuple(p) for p in parts), parts))
    keyed.sort(key=lambda t: t[:3])
    out = []
    seen = set()
    for cost, _, key, parts in keyed:
        if key in seen:
            continue
        seen.add(key)
        out.append((cost, parts))
    return out


def _dims_fit(required: list[int], available: list[int]) -> bool:
    need, have = Counter(required), Counter(available)
    return all(have[d] >= c for d, c in need.items())


def _assign(required: list[int], available: list[int]) -> list[int]:
    """Match each required dim to the first unused available irrep index."""
    used = set()
    out = []
    for d in required:
        for i, a in enumerate(available):
            if a == d and i not in used:
                used.add(i)
                out.append(i)
                break
        else:
            raise ValidationError("irrep dimensions do not cover the classes")
    return out


def _group_sort_key(catalog_index: int, g: FiniteGroup) -> tuple:
    n_irreps = g.order if g.is_abelian else len(g.conjugacy_classes())
    return (not g.is_abelian, n_irreps, catalog_index)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def search_group(required_dims, d_a: int, catalog=None, allow_projective: bool = True,
                 *, structure: BlockStructure | None = None, seed: int = 0,
                 max_order: int = 32, warning_sink: list | None = None):
    """Yield SearchCandidate objects in ascending order of group order.

    required_dims is the multiset of class dimensions of the finest block
    structure; structure carries the block-level detail used for merge
    plans (a synthetic one-block-per-dimension structure is used when
    omitted). Ordinary candidates precede projective ones at equal order;
    merged plans participate once the order reaches their dimension-square
    sum. Any class of dimension 1 forces an ordinary representation for
    that plan. The caller is responsible for the generalized-Pauli fallback
    once the iterator is exhausted; warning_sink, when given, keeps
    accumulating catalog-gap warnings even after the last yield so the
    caller can attach them to a fallback result.
    """
    catalog = list(builtin_catalog(max_order) if catalog is None else catalog)
    if structure is None:
        structure = trivial_structure(sorted(required_dims))
    if sorted(required_dims) != sorted(structure.class_dims()):
        raise ValidationError("required dimensions disagree with the block structure")

    by_order: dict[int, list[tuple[int, FiniteGroup]]] = {}
    for idx, g in enumerate(catalog):
        by_order.setdefault(g.order, []).append((idx, g))
    for groups in by_order.values():
        groups.sort(key=lambda t: _group_sort_key(t[0], t[1]))

    plans = merge_plans(structure)
    n_start = plans[0][0]
    warnings: list[str] = warning_sink if warning_sink is not None else []
    seen_projective = set()

    def warn(msg: str) -> None:
        if msg not in warnings:
            warnings.append(msg)

    for n in range(max(n_start, 1), d_a ** 2 + 1):
        if n not in by_order:
            warn(f"catalog has no group of order {n}")
        for n0, plan in plans:
            if n0 > n:
                continue
            plan_key = tuple(tuple(p) for p in plan)
            merged = merge_blocks(structure, plan)
            required = merged.class_dims()
            if any(n % d for d in required):
                continue

            for idx, g in by_order.get(n, []):
                if not _dims_fit(required, irrep_dimensions(g, seed=seed)):
                    continue
                irreps = irreps_of(g, seed=seed)
                dims = [ir.dim for ir in irreps]
                yield SearchCandidate(g, irreps, _assign(required, dims),
                                      merged, plan, "ordinary", list(warnings))

            if not allow_projective or min(required) < 2:
                continue
            for r in _divisors(n):
                if r < 2:
                    continue
                if r * n not in by_order:
                    warn(f"catalog has no group of order {r * n} "
                         f"for central extensions over order {n}")
                    continue
                for idx, l in by_order[r * n]:
                    for z in range(l.order):
                        if z not in l.center() or l.element_order(z) != r:
                            continue
                        quotient, picked, _ = projective_irreps_from_extension(
                            l, z, r, seed=seed)
                        if not _dims_fit(required, [p.dim for p in picked]):
                            continue
                        gauged, fs = gauge_normalize(
                            [p.matrices for p in picked], quotient)
                        key = (plan_key, quotient.table.tobytes(),
                               np.round(fs.phases, 10).tobytes())
                        if key in seen_projective:
                            continue
                        seen_projective.add(key)
                        for _, known in by_order.get(n, []):
                            if are_isomorphic(quotient, known):
                                quotient.name = known.name
                                break
                        irreps = [Representation(quotient, fs, m) for m in gauged]
                        dims = [ir.dim for ir in irreps]
                        yield SearchCandidate(
                            quotient, irreps, _assign(required, dims),
                            merged, plan, "projective", list(warnings))
