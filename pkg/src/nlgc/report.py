"""Machine-readable compilation reports with reproducible bytes.

Every float is canonicalized to 12 significant digits before serialization
and keys are emitted sorted, so identical inputs and seeds produce byte
identical reports. Reports embed enough data (group table, factor phases,
V, U(f), W(f), basis change) to rebuild the expansion without recompiling.
"""
from __future__ import annotations

import json

import numpy as np

from ._linalg import frobenius, unitarity_deviation
from .errors import ValidationError
from .expansion import GroupExpansion, classify
from .groups import FactorSystem, FiniteGroup
from .representations import Representation
from .sbd import BlockStructure, EquivalenceClass, classify_equivalence, finest_sbd, gram_set
from .schmidt import BipartiteUnitary, schmidt_decompose

REPORT_FORMAT = "nlgc-report"
REPORT_VERSION = 1


def _round_sig(x: float) -> float:
    out = float("%.12g" % float(x))
    return 0.0 if out == 0.0 else out


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [_round_sig(z.real), _round_sig(z.imag)]


def encode_matrix(m) -> list:
    m = np.asarray(m)
    if m.ndim == 1:
        return [encode_complex(z) for z in m]
    return [[encode_complex(z) for z in row] for row in m]


def _decode_entry(e) -> complex:
    if isinstance(e, (int, float)):
        return complex(e)
    if isinstance(e, (list, tuple)) and len(e) == 2:
        return complex(float(e[0]), float(e[1]))
    raise ValidationError("matrix entries must be numbers or [re, im] pairs")


def decode_matrix(rows) -> np.ndarray:
    return np.array([[_decode_entry(e) for e in row] for row in rows])


def _canonical(obj):
    if isinstance(obj, dict):
        return {str(k): _canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round_sig(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return encode_complex(obj)
    if isinstance(obj, np.ndarray):
        return _canonical(obj.tolist())
    return obj


def canonical_json(obj) -> str:
    return json.dumps(_canonical(obj), sort_keys=True, indent=2) + "\n"


def matrix_payload(bu: BipartiteUnitary) -> dict:
    return {"dimA": bu.dim_a, "dimB": bu.dim_b, "matrix": encode_matrix(bu.matrix)}


def parse_matrix_payload(data: dict, dims: tuple[int, int] | None = None) -> BipartiteUnitary:
    if "matrix" not in data:
        raise ValidationError("matrix file needs a 'matrix' field")
    m = decode_matrix(data["matrix"])
    if dims is not None:
        d_a, d_b = dims
    elif "dimA" in data and "dimB" in data:
        d_a, d_b = int(data["dimA"]), int(data["dimB"])
    elif "dims" in data:
        d_a, d_b = (int(x) for x in data["dims"])
    else:
        raise ValidationError(
            "matrix file needs explicit dimensions (dimA/dimB or dims); the "
            "factorization of the matrix size is ambiguous")
    return BipartiteUnitary(m, d_a, d_b)


def state_payload(psi: np.ndarray) -> dict:
    psi = np.asarray(psi).reshape(-1)
    return {"dim": int(psi.size), "vector": encode_matrix(psi)}


def parse_state_payload(data: dict) -> np.ndarray:
    if "vector" not in data:
        raise ValidationError("state file needs a 'vector' field")
    vec = np.array([_decode_entry(e) for e in data["vector"]])
    if "dim" in data and int(data["dim"]) != vec.size:
        raise ValidationError("state length disagrees with its declared dim")
    return vec


def _blocks_summary(bu: BipartiteUnitary, tol: float, seed: int) -> dict:
    dec = schmidt_decompose(bu)
    grams = gram_set(dec)
    bs = classify_equivalence(finest_sbd(grams, tol=tol, seed=seed), grams, tol=tol)
    return {
        "sizes": list(bs.block_sizes),
        "classes": [list(c.members) for c in bs.classes],
        "classDims": bs.class_dims(),
    }


def _structure_payload(bs: BlockStructure) -> dict:
    return {
        "basisChange": encode_matrix(bs.basis_change),
        "sizes": list(bs.block_sizes),
        "classes": [
            {"members": list(c.members),
             "intertwiners": {str(m): encode_matrix(t)
                              for m, t in sorted(c.intertwiners.items())}}
            for c in bs.classes
        ],
    }


def _structure_from_payload(data: dict) -> BlockStructure:
    classes = [
        EquivalenceClass(
            members=list(c["members"]),
            intertwiners={int(k): decode_matrix(v)
                          for k, v in c["intertwiners"].items()})
        for c in data["classes"]
    ]
    return BlockStructure(decode_matrix(data["basisChange"]),
                          [int(s) for s in data["sizes"]], classes)


def build_report(exp: GroupExpansion, trace=None, meta: dict | None = None,
                 original: BipartiteUnitary | None = None,
                 block_tol: float = 1e-8, seed: int = 0) -> dict:
    """Full, self-contained description of one compilation result.

    original is the gate in its user orientation; when omitted it is
    recovered from the expansion (undoing the B-side swap if needed).
    """
    if original is None:
        original = exp.unitary if exp.side == "A" else exp.unitary.swapped()
    u = original.matrix
    classification = {"label": exp.classification}
    if "projectors" in exp.details:
        classification["projectors"] = [encode_matrix(p) for p in exp.details["projectors"]]
        classification["targets"] = [encode_matrix(t) for t in exp.details["targets"]]
    if "wFactorPhases" in exp.details:
        classification["wFactorPhases"] = encode_matrix(exp.details["wFactorPhases"])
        classification["wNorms"] = encode_matrix(exp.details["wNorms"])
    factor = exp.factor
    trivial = factor is None or factor.is_trivial
    report = {
        "format": REPORT_FORMAT,
        "version": REPORT_VERSION,
        "meta": dict(meta or {}),
        "input": {
            "dimA": original.dim_a,
            "dimB": original.dim_b,
            "frobeniusNorm": float(frobenius(u)),
            "unitarityDeviation": float(unitarity_deviation(u)),
            "matrix": encode_matrix(u),
        },
        "schmidt": {
            "rank": len(exp.schmidt),
            "coefficients": [float(c) for c in exp.schmidt.coefficients],
        },
        "blocks": {
            "A": _blocks_summary(original, block_tol, seed),
            "B": _blocks_summary(original.swapped(), block_tol, seed),
        },
        "group": {
            "name": exp.group.name,
            "order": exp.group.order,
            "identity": int(exp.group.identity),
            "table": [[int(x) for x in row] for row in exp.group.table],
            "projective": not trivial,
            "factorRootOrder": 1 if trivial else int(factor.order),
            "factorPhases": None if trivial else encode_matrix(factor.phases),
        },
        "expansion": {
            "side": exp.side,
            "route": exp.route,
            "fallback": exp.fallback,
            "v": encode_matrix(exp.v),
            "uOps": [encode_matrix(m) for m in exp.u_rep.matrices],
            "wOps": [encode_matrix(m) for m in exp.w_ops],
            "wCoeffs": encode_matrix(exp.w_coeffs),
            "structure": _structure_payload(exp.structure),
            "residual": float(exp.residual),
        },
        "costs": {
            "costEbits": float(exp.cost_ebits),
            "baselineEbits": float(exp.baseline_ebits),
            "savingsEbits": float(exp.savings_ebits),
        },
        "classification": classification,
        "mStatus": {"unitary": bool(exp.m_unitary),
                    "deviation": float(exp.m_deviation)},
        "protocol": None if trace is None else trace.summary(),
        "warnings": list(exp.warnings),
    }
    return report


def expansion_from_report(report: dict) -> GroupExpansion:
    """Rebuild a working expansion from its serialized report."""
    if report.get("format") != REPORT_FORMAT:
        raise ValidationError("not a compilation report")
    inp = report["input"]
    original = BipartiteUnitary(decode_matrix(inp["matrix"]),
                                int(inp["dimA"]), int(inp["dimB"]))
    side = report["expansion"]["side"]
    bu = original if side == "A" else original.swapped()
    grp = report["group"]
    group = FiniteGroup(grp["name"], np.array(grp["table"], dtype=int))
    if grp["projective"]:
        factor = FactorSystem(decode_matrix(grp["factorPhases"]),
                              int(grp["factorRootOrder"]))
        factor.validate(group, strict=True)
    else:
        factor = FactorSystem.trivial(group.order)
    exp_data = report["expansion"]
    u_mats = np.array([decode_matrix(m) for m in exp_data["uOps"]])
    u_rep = Representation(group, factor, u_mats)
    u_rep.validate()
    dec = schmidt_decompose(bu)
    exp = GroupExpansion(
        unitary=bu,
        schmidt=dec,
        structure=_structure_from_payload(exp_data["structure"]),
        group=group,
        factor=factor,
        v=decode_matrix(exp_data["v"]),
        u_rep=u_rep,
        w_coeffs=decode_matrix(exp_data["wCoeffs"]),
        w_ops=np.array([decode_matrix(m) for m in exp_data["wOps"]]),
        side=side,
        cost_ebits=float(report["costs"]["costEbits"]),
        baseline_ebits=float(report["costs"]["baselineEbits"]),
        residual=float(exp_data["residual"]),
        m_unitary=bool(report["mStatus"]["unitary"]),
        m_deviation=float(report["mStatus"]["deviation"]),
        route=exp_data["route"],
        fallback=bool(exp_data["fallback"]),
        classification=report["classification"]["label"],
        warnings=list(report.get("warnings", [])),
    )
    return exp


def verify_report(report: dict, tol: float = 1e-9) -> tuple[bool, dict]:
    """Re-check a report's claims from its own embedded data.

    Rebuilds the expansion, recomputes the residual, the M unitarity status,
    the cost accounting, and the classification label, and compares each
    against the stored values.
    """
    from .protocol import build_M, check_M_unitary

    checks: dict[str, bool] = {}
    exp = expansion_from_report(report)
    u = exp.unitary.matrix

    dev = unitarity_deviation(u)
    checks["inputUnitary"] = bool(dev <= 1e-8)
    checks["inputDigest"] = bool(
        abs(dev - report["input"]["unitarityDeviation"]) <= 1e-6
        and abs(frobenius(u) - report["input"]["frobeniusNorm"]) <= 1e-6)

    residual = float(frobenius(u - exp.reconstruct()))
    checks["residual"] = bool(residual <= max(1e-8, exp.residual + 1e-9))

    m = build_M(exp.group, exp.factor, exp.w_ops)
    ok, m_dev = check_M_unitary(m)
    checks["mStatus"] = bool(ok == exp.m_unitary and abs(m_dev - exp.m_deviation) <= 1e-6)

    n = exp.group.order
    checks["costs"] = bool(
        abs(exp.cost_ebits - np.log2(n)) <= 1e-9
        and abs(exp.baseline_ebits
                - 2 * np.log2(min(exp.unitary.dim_a, exp.unitary.dim_b))) <= 1e-9)

    label, _ = classify(exp, tol=tol)
    checks["classification"] = bool(label == exp.classification)

    checks["schmidtRank"] = bool(len(exp.schmidt) == report["schmidt"]["rank"])
    return all(checks.values()), checks
