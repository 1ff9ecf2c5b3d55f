"""Project files: JSON description of a field, a bound quiver, modules and
two-term complexes of projectives.

Structure is checked with a JSON schema; cross references (vertices, arrows,
entry names) are checked afterwards. Every error names its JSON path, e.g.
``quiver.arrows[0].to``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np

from .algebra import Config, FdModule, FiniteDimAlgebra, Quiver, module_from_representation, path_algebra
from .complexes import TwoTermComplex, projective_complex
from .errors import InfiniteDimensionalError, PreconditionError, ProjectError
from .linalg import GF, QQ, Field

_coeff = {"type": ["string", "integer"]}
_term = {
    "type": "object",
    "required": ["coeff", "path"],
    "properties": {"coeff": _coeff, "path": {"type": "array", "items": {"type": "string"}}, "vertex": {"type": "string"}},
    "additionalProperties": False,
}
_matrix = {"type": "array", "items": {"type": "array", "items": _coeff}}

SCHEMA = {
    "type": "object",
    "required": ["field", "quiver"],
    "properties": {
        "name": {"type": "string"},
        "field": {
            "oneOf": [
                {"type": "object", "required": ["type", "p"], "properties": {"type": {"const": "Fp"}, "p": {"type": "integer", "minimum": 2, "maximum": 65521}}, "additionalProperties": False},
                {"type": "object", "required": ["type"], "properties": {"type": {"const": "Q"}}, "additionalProperties": False},
            ]
        },
        "quiver": {
            "type": "object",
            "required": ["vertices", "arrows"],
            "properties": {
                "vertices": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                "arrows": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["name", "from", "to"],
                        "properties": {"name": {"type": "string"}, "from": {"type": "string"}, "to": {"type": "string"}},
                        "additionalProperties": False,
                    },
                },
            },
            "additionalProperties": False,
        },
        "relations": {"type": "array", "items": {"type": "array", "items": _term}},
        "modules": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["dims"],
                "properties": {
                    "dims": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
                    "arrows": {"type": "object", "additionalProperties": _matrix},
                },
                "additionalProperties": False,
            },
        },
        "complexes": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["pm1", "p0"],
                "properties": {
                    "pm1": {"type": "array", "items": {"type": "string"}},
                    "p0": {"type": "array", "items": {"type": "string"}},
                    "sigma": {"type": "array", "items": {"type": "array", "items": {"type": "array", "items": _term}}},
                },
                "additionalProperties": False,
            },
        },
        "config": {
            "type": "object",
            "properties": {
                "complex": {"type": "string"},
                "max_dim": {"type": "integer", "minimum": 0},
                "e_max_dim": {"type": "integer", "minimum": 0},
                "seed": {"type": "integer"},
                "checks": {"type": "array", "items": {"type": "string"}},
                "heart_limit": {"type": "integer", "minimum": 0},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}


@dataclass(eq=False)
class Project:
    name: str
    field: Field
    quiver: Quiver
    relations: list  # [[(coeff string, (arrow names...))]]
    algebra: FiniteDimAlgebra
    modules: dict = dc_field(default_factory=dict)  # name -> FdModule
    complexes: dict = dc_field(default_factory=dict)  # name -> TwoTermComplex
    config: dict = dc_field(default_factory=dict)
    source: dict = dc_field(default_factory=dict, repr=False)  # normalized JSON

    def complex(self, name: str = None) -> TwoTermComplex:
        name = name or self.config.get("complex") or next(iter(self.complexes), None)
        if name is None:
            raise ProjectError("complexes", "project defines no complex")
        if name not in self.complexes:
            raise ProjectError(f"complexes.{name}", "unknown complex")
        return self.complexes[name]

    def module(self, name: str) -> FdModule:
        if name not in self.modules:
            raise ProjectError(f"modules.{name}", "unknown module")
        return self.modules[name]

    def make_config(self, **overrides) -> Config:
        cfg = Config()
        if "seed" in self.config:
            cfg.seed = self.config["seed"]
        for k, v in overrides.items():
            if v is not None:
                setattr(cfg, k, v)
        return cfg


def _json_path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out


def _canon(F: Field, c) -> str:
    """Canonical decimal string of a coefficient in the field."""
    try:
        x = F.scalar(str(c))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad coefficient {c!r}: {exc}") from None
    return str(Fraction(x)) if F.p is None else str(int(x))


def _field(data: dict) -> Field:
    if data["type"] == "Q":
        return QQ
    p = data["p"]
    if any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
        raise ProjectError("field.p", f"{p} is not prime")
    return GF(p)


def _element(A: FiniteDimAlgebra, terms: list, where: str) -> np.ndarray:
    F = A.field
    q = A.quiver
    out = []
    for k, t in enumerate(terms):
        path = tuple(t["path"])
        try:
            c = _canon(F, t["coeff"])
        except ValueError as exc:
            raise ProjectError(f"{where}[{k}].coeff", str(exc)) from None
        if not path:
            if "vertex" not in t:
                raise ProjectError(f"{where}[{k}]", "trivial path needs a vertex")
            if t["vertex"] not in q.vertices:
                raise ProjectError(f"{where}[{k}].vertex", f"unknown vertex {t['vertex']!r}")
            out.append((c, ("e", t["vertex"])))
        else:
            for a in path:
                if a not in [x for x, _, _ in q.arrows]:
                    raise ProjectError(f"{where}[{k}].path", f"unknown arrow {a!r}")
            out.append((c, path))
    try:
        return A.path_element(out) if out else F.zeros(A.dim)
    except ValueError as exc:
        raise ProjectError(where, str(exc)) from None


def _entries(q: Quiver, names: list, where: str) -> list:
    out = []
    for k, n in enumerate(names):
        if n == "A":
            out.extend(q.vertices)
        elif n.startswith("P") and n[1:] in q.vertices:
            out.append(n[1:])
        else:
            raise ProjectError(f"{where}[{k}]", f"{n!r} is not P<vertex> or A")
    return out


def loads(data: dict) -> Project:
    """Validate and build a project from parsed JSON."""
    try:
        jsonschema.validate(data, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ProjectError(_json_path(exc.absolute_path) or "<root>", exc.message) from None
    F = _field(data["field"])
    qd = data["quiver"]
    for k, a in enumerate(qd["arrows"]):
        for key in ("from", "to"):
            if a[key] not in qd["vertices"]:
                raise ProjectError(f"arrows[{k}].{'source' if key == 'from' else 'target'}", f"unknown vertex {a[key]!r}")
    try:
        q = Quiver(qd["vertices"], [(a["name"], a["from"], a["to"]) for a in qd["arrows"]])
    except ValueError as exc:
        raise ProjectError("quiver", str(exc)) from None
    arrow_names = [a for a, _, _ in q.arrows]
    rels = []
    for i, rel in enumerate(data.get("relations", [])):
        terms = []
        for j, t in enumerate(rel):
            where = f"relations[{i}][{j}]"
            for a in t["path"]:
                if a not in arrow_names:
                    raise ProjectError(f"{where}.path", f"unknown arrow {a!r}")
            try:
                terms.append((_canon(F, t["coeff"]), tuple(t["path"])))
            except ValueError as exc:
                raise ProjectError(f"{where}.coeff", str(exc)) from None
        rels.append(terms)
    try:
        A = path_algebra(q, rels, F, name=data.get("name", ""))
    except InfiniteDimensionalError as exc:
        raise ProjectError("relations", f"algebra is not finite-dimensional: {exc}") from None
    except PreconditionError as exc:
        raise ProjectError("relations", str(exc)) from None
    proj = Project(data.get("name", ""), F, q, rels, A, config=dict(data.get("config", {})))
    norm_modules = {}
    for name, m in data.get("modules", {}).items():
        where = f"modules.{name}"
        for v in m["dims"]:
            if v not in q.vertices:
                raise ProjectError(f"{where}.dims.{v}", "unknown vertex")
        mats = {}
        for a, mat in m.get("arrows", {}).items():
            if a not in arrow_names:
                raise ProjectError(f"{where}.arrows.{a}", "unknown arrow")
            _, s, t = q.arrows[q.arrow_index(a)]
            rows, cols = m["dims"].get(t, 0), m["dims"].get(s, 0)
            if rows * cols and (len(mat) != rows or any(len(r) != cols for r in mat)):
                raise ProjectError(f"{where}.arrows.{a}", f"expected a {rows}x{cols} matrix")
            try:
                mats[a] = [[_canon(F, x) for x in r] for r in mat]
            except ValueError as exc:
                raise ProjectError(f"{where}.arrows.{a}", str(exc)) from None
        try:
            M = module_from_representation(A, m["dims"], {a: [[F.scalar(x) for x in r] for r in mat] for a, mat in mats.items()}, name)
        except ValueError as exc:
            raise ProjectError(where, str(exc)) from None
        proj.modules[name] = M
        norm_modules[name] = {"dims": {v: m["dims"][v] for v in q.vertices if v in m["dims"]}, "arrows": mats}
    norm_cx = {}
    for name, c in data.get("complexes", {}).items():
        where = f"complexes.{name}"
        pm1 = _entries(q, c["pm1"], f"{where}.pm1")
        p0 = _entries(q, c["p0"], f"{where}.p0")
        sig = c.get("sigma", [])
        if pm1 and p0:
            if len(sig) != len(p0) or any(len(r) != len(pm1) for r in sig):
                raise ProjectError(f"{where}.sigma", f"expected {len(p0)} rows of {len(pm1)} entries")
        elif sig and any(sig):
            raise ProjectError(f"{where}.sigma", "must be empty when an entry is zero")
        mat = [[_element(A, sig[i][j], f"{where}.sigma[{i}][{j}]") for j in range(len(pm1))] for i in range(len(p0))]
        try:
            X = projective_complex(A, pm1, p0, mat, name)
        except ValueError as exc:
            raise ProjectError(f"{where}.sigma", str(exc)) from None
        proj.complexes[name] = X
        norm_cx[name] = {
            "pm1": [f"P{v}" for v in pm1],
            "p0": [f"P{v}" for v in p0],
            "sigma": [[[_norm_term(F, t) for t in sig[i][j]] for j in range(len(pm1))] for i in range(len(p0))],
        }
    cfg = proj.config
    if "complex" in cfg and cfg["complex"] not in proj.complexes:
        raise ProjectError("config.complex", f"unknown complex {cfg['complex']!r}")
    proj.source = {
        "name": proj.name,
        "field": F.to_json(),
        "quiver": {"vertices": list(q.vertices), "arrows": [{"name": a, "from": s, "to": t} for a, s, t in q.arrows]},
        "relations": [[{"coeff": c, "path": list(p)} for c, p in rel] for rel in rels],
        "modules": norm_modules,
        "complexes": norm_cx,
        "config": cfg,
    }
    return proj


def _norm_term(F: Field, t: dict) -> dict:
    out = {"coeff": _canon(F, t["coeff"]), "path": list(t["path"])}
    if not t["path"]:
        out["vertex"] = t["vertex"]
    return out


def load(path) -> Project:
    p = Path(path)
    if not p.exists():
        raise ProjectError("", f"no such file: {p}")
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ProjectError("<root>", f"invalid JSON: {exc}") from None
    return loads(data)


def dumps(project: Project) -> dict:
    """Normalized JSON form; ``loads(dumps(p))`` gives an equivalent project."""
    return json.loads(json.dumps(project.source))


def save(project: Project, path) -> None:
    Path(path).write_text(json.dumps(dumps(project), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def module_json(M: FdModule) -> dict:
    """Action matrices of a module as strings; enough to rebuild it."""
    return {
        "name": M.name,
        "dim": M.dim,
        "action": [[[str(x) for x in row] for row in m] for m in M.action],
    }
