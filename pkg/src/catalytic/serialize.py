"""JSON encoding for distributions, states and certificates."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np

from .constructions import Basis, ControlledPermutation
from .exact import JointDist, Permutation, ProbVector, as_fraction, format_fraction
from .quantum import DensityMatrix

SCHEMA_VERSION = "catalytic-certificate/1"

_rational = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
_dist = {
    "type": "object",
    "required": ["shape", "entries"],
    "properties": {"shape": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                   "entries": {"type": "array", "items": _rational}},
}
_complex = {"oneOf": [{"type": "number"},
                      {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}]}
_matrix = {"type": "array", "items": {"type": "array", "items": _complex}}
_density = {"type": "object", "required": ["dims", "matrix"],
            "properties": {"dims": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                           "matrix": _matrix}}
_perm = {"type": "object", "required": ["size", "cycles"],
         "properties": {"size": {"type": "integer", "minimum": 1}, "cycles": {"type": "string"}}}

CERTIFICATE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "mode", "encoding", "state", "target", "catalyst", "dynamics"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "mode": {"enum": ["theorem1", "conjecture", "lemma2", "classical_lemma3", "classical_conjecture"]},
        "encoding": {"enum": ["classical", "quantum"]},
        "ancilla_dim": {"type": "integer", "minimum": 1},
        "epsilon": _rational,
        "basis": {"oneOf": [{"type": "null"}, _matrix]},
        "meta": {"type": "object"},
    },
    "allOf": [
        {"if": {"properties": {"encoding": {"const": "classical"}}},
         "then": {"properties": {"state": _dist, "target": _dist, "catalyst": _dist, "dynamics": _perm}}},
        {"if": {"properties": {"encoding": {"const": "quantum"}}},
         "then": {"properties": {"state": _density, "target": _density, "catalyst": _density,
                                 "dynamics": _matrix}}},
    ],
}


def dist_to_json(d: JointDist) -> dict:
    return {"shape": list(d.shape), "entries": [format_fraction(e) for e in d.entries]}


def dist_from_json(obj) -> JointDist:
    if isinstance(obj, list):
        return ProbVector([as_fraction(v) for v in obj])
    entries = [as_fraction(v) for v in obj["entries"]]
    shape = obj.get("shape", [len(entries)])
    if len(shape) == 1:
        return ProbVector(entries)
    return JointDist(entries, shape)


def perm_to_json(p: Permutation) -> dict:
    return {"size": p.size, "cycles": p.cycles()}


def perm_from_json(obj) -> Permutation:
    return Permutation.from_cycles(obj["size"], obj["cycles"])


def controlled_perm_to_json(cp: ControlledPermutation) -> dict:
    return {"control_dim": cp.control_dim, "target_size": cp.target_size,
            "perms": [p.cycles() for p in cp.perms]}


def controlled_perm_from_json(obj) -> ControlledPermutation:
    size = obj["target_size"]
    return ControlledPermutation(tuple(Permutation.from_cycles(size, c) for c in obj["perms"]))


def matrix_to_json(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def matrix_from_json(rows) -> np.ndarray:
    def entry(v):
        if isinstance(v, (int, float)):
            return complex(v)
        return complex(v[0], v[1])
    return np.array([[entry(v) for v in row] for row in rows], dtype=complex)


def density_to_json(rho: DensityMatrix) -> dict:
    return {"dims": list(rho.dims), "matrix": matrix_to_json(rho.matrix)}


def density_from_json(obj) -> DensityMatrix:
    """Accepts ``{"matrix": ...}`` or a diagonal given as ``{"diagonal": [...]}``."""
    if "matrix" in obj:
        m = matrix_from_json(obj["matrix"])
    elif "diagonal" in obj:
        m = np.diag([float(as_fraction(v)) if isinstance(v, str) else float(v) for v in obj["diagonal"]])
    else:
        raise ValueError("state JSON needs 'matrix' or 'diagonal'")
    return DensityMatrix(m, obj.get("dims"))


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and obj != obj:
        return None
    return obj


def certificate_to_json(cert) -> dict:
    if cert.is_classical:
        body = {"encoding": "classical", "state": dist_to_json(cert.state), "target": dist_to_json(cert.target),
                "catalyst": dist_to_json(cert.catalyst), "dynamics": perm_to_json(cert.dynamics), "basis": None}
    else:
        body = {"encoding": "quantum", "state": density_to_json(cert.state),
                "target": density_to_json(cert.target), "catalyst": density_to_json(cert.catalyst),
                "dynamics": matrix_to_json(cert.dynamics),
                "basis": None if cert.basis is None else matrix_to_json(cert.basis.vectors)}
    return {"schema": SCHEMA_VERSION, "mode": cert.mode, **body, "ancilla_dim": cert.ancilla_dim,
            "epsilon": format_fraction(cert.epsilon), "meta": _json_safe(cert.meta)}


def certificate_from_json(obj):
    from .catalysis.certificate import CertificateError, TransitionCertificate

    try:
        jsonschema.validate(obj, CERTIFICATE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise CertificateError(f"certificate JSON does not match schema: {exc.message}") from exc
    if obj["encoding"] == "classical":
        state, target = dist_from_json(obj["state"]), dist_from_json(obj["target"])
        catalyst = dist_from_json(obj["catalyst"])
        dynamics = perm_from_json(obj["dynamics"])
        basis = None
    else:
        state, target = density_from_json(obj["state"]), density_from_json(obj["target"])
        catalyst = density_from_json(obj["catalyst"])
        dynamics = matrix_from_json(obj["dynamics"])
        basis = None if obj.get("basis") is None else Basis(matrix_from_json(obj["basis"]))
    return TransitionCertificate(
        mode=obj["mode"], state=state, target=target, catalyst=catalyst, dynamics=dynamics, basis=basis,
        ancilla_dim=obj.get("ancilla_dim", 1), epsilon=as_fraction(obj.get("epsilon", "0")),
        meta=obj.get("meta", {}),
    )


def save_certificate(cert, path) -> None:
    Path(path).write_text(json.dumps(certificate_to_json(cert), indent=1))


def load_certificate(path):
    return certificate_from_json(json.loads(Path(path).read_text()))
