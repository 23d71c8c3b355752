"""Declarative spin models: sublattices, constraint families, collinear signs.

Model files are JSON documents::

    {
      "name": "j1j2_square",
      "dim": 2,
      "sublattices": 1,
      "constraints": [
        {"label": "plaquette",
         "terms": [{"sublattice": 0, "offset": [0, 0], "coeff": 1, "spin_sign": 1}, ...]}
      ],
      "metadata": {...}            # optional, free form
    }

Offsets are integer cell-lattice coordinates.  Cartesian geometry, if any, is
kept in ``metadata`` and never read by the numerics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

MAX_DIM = 6

BUILTIN_MODELS = ("j1j2_square", "square_anisotropic_nnn", "pyrochlore")


class ModelError(ValueError):
    """Base class for model parsing and validation failures."""


class ModelSyntaxError(ModelError):
    def __init__(self, msg: str, line: int, column: int):
        super().__init__(f"syntax error at line {line}, column {column}: {msg}")
        self.line = line
        self.column = column


class ModelSchemaError(ModelError):
    def __init__(self, field_name: str, reason: str):
        super().__init__(f"schema violation in '{field_name}': {reason}")
        self.field = field_name
        self.reason = reason


class ModelInvariantError(ModelError):
    def __init__(self, diagnostics: list["Diagnostic"]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics))


@dataclass(frozen=True)
class ConstraintTerm:
    sublattice: int
    offset: tuple[int, ...]
    coeff: float
    spin_sign: int


@dataclass(frozen=True)
class ConstraintFamily:
    label: str
    terms: tuple[ConstraintTerm, ...]


@dataclass(frozen=True)
class SpinModel:
    name: str
    dim: int
    sublattices: int
    constraints: tuple[ConstraintFamily, ...]
    metadata: dict = field(default_factory=dict, compare=True)

    @property
    def n_families(self) -> int:
        return len(self.constraints)

    @property
    def unit_cell_dof(self) -> int:
        """Spin-wave degrees of freedom per cell for a collinear state (two per site)."""
        return 2 * self.sublattices


@dataclass(frozen=True)
class Diagnostic:
    level: str              # "error" or "warning"
    message: str
    family: int | None = None
    term: int | None = None

    def __str__(self):
        where = ""
        if self.family is not None:
            where = f"family {self.family}"
            if self.term is not None:
                where += f", term {self.term}"
            where = f" [{where}]"
        return f"{self.level}{where}: {self.message}"


def validate(model: SpinModel) -> list[Diagnostic]:
    """Check every model invariant; an empty list means the model is valid.

    Diagnostics come out ordered by (family index, term index), with
    model-level problems first.
    """
    out: list[Diagnostic] = []
    if not 1 <= model.dim <= MAX_DIM:
        out.append(Diagnostic("error", f"dimension out of supported range: dim={model.dim}, expected 1..{MAX_DIM}"))
    if model.sublattices < 1:
        out.append(Diagnostic("error", f"sublattice count must be >= 1, got {model.sublattices}"))
    if not model.constraints:
        out.append(Diagnostic("error", "model has no constraint families"))
    for fi, fam in enumerate(model.constraints):
        if not fam.terms:
            out.append(Diagnostic("error", f"family '{fam.label}' has no terms", fi))
            continue
        seen: dict[tuple, int] = {}
        for ti, term in enumerate(fam.terms):
            loc = f"family '{fam.label}' term {ti}"
            if not 0 <= term.sublattice < model.sublattices:
                out.append(Diagnostic(
                    "error", f"{loc}: sublattice {term.sublattice} not in 0..{model.sublattices - 1}", fi, ti))
            if len(term.offset) != model.dim:
                out.append(Diagnostic(
                    "error", f"{loc}: offset {list(term.offset)} has length {len(term.offset)}, expected {model.dim}",
                    fi, ti))
            if term.coeff == 0:
                out.append(Diagnostic("error", f"{loc}: coefficient is zero", fi, ti))
            if term.spin_sign not in (1, -1):
                out.append(Diagnostic("error", f"{loc}: spin_sign must be +1 or -1, got {term.spin_sign}", fi, ti))
            key = (term.sublattice, tuple(term.offset))
            if key in seen:
                out.append(Diagnostic(
                    "error",
                    f"{loc}: duplicate (sublattice, offset) = ({term.sublattice}, {list(term.offset)}), "
                    f"first used by term {seen[key]}",
                    fi, ti))
            else:
                seen[key] = ti
    return out


def _require(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise ModelSchemaError(f"{where}{key}", "missing required field")
    val = obj[key]
    if kind is int:
        if isinstance(val, bool) or not isinstance(val, int):
            raise ModelSchemaError(f"{where}{key}", f"expected integer, got {type(val).__name__}")
    elif kind is float:
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ModelSchemaError(f"{where}{key}", f"expected number, got {type(val).__name__}")
    elif not isinstance(val, kind):
        raise ModelSchemaError(f"{where}{key}", f"expected {kind.__name__}, got {type(val).__name__}")
    return val


def model_from_obj(obj) -> SpinModel:
    """Build a :class:`SpinModel` from decoded JSON, checking the schema only."""
    if not isinstance(obj, dict):
        raise ModelSchemaError("<root>", "document must be a JSON object")
    name = _require(obj, "name", str, "")
    dim = _require(obj, "dim", int, "")
    subl = _require(obj, "sublattices", int, "")
    cons = _require(obj, "constraints", list, "")
    if not cons:
        raise ModelSchemaError("constraints", "constraint list is empty")
    families = []
    for fi, fam in enumerate(cons):
        where = f"constraints[{fi}]."
        if not isinstance(fam, dict):
            raise ModelSchemaError(f"constraints[{fi}]", "expected object")
        label = _require(fam, "label", str, where)
        terms_raw = _require(fam, "terms", list, where)
        if not terms_raw:
            raise ModelSchemaError(f"{where}terms", "term list is empty")
        terms = []
        for ti, t in enumerate(terms_raw):
            tw = f"{where}terms[{ti}]."
            if not isinstance(t, dict):
                raise ModelSchemaError(f"{where}terms[{ti}]", "expected object")
            offset = _require(t, "offset", list, tw)
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in offset):
                raise ModelSchemaError(f"{tw}offset", "expected a list of integers")
            terms.append(ConstraintTerm(
                sublattice=_require(t, "sublattice", int, tw),
                offset=tuple(offset),
                coeff=float(_require(t, "coeff", float, tw)),
                spin_sign=_require(t, "spin_sign", int, tw),
            ))
        families.append(ConstraintFamily(label, tuple(terms)))
    metadata = obj.get("metadata", {})
    if not isinstance(metadata, dict):
        raise ModelSchemaError("metadata", "expected object")
    unknown = set(obj) - {"name", "dim", "sublattices", "constraints", "metadata"}
    if unknown:
        raise ModelSchemaError(sorted(unknown)[0], "unknown top-level field")
    return SpinModel(name, dim, subl, tuple(families), dict(metadata))


def parse_model(text: str) -> SpinModel:
    """Parse and validate a model document."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    model = model_from_obj(obj)
    diags = [d for d in validate(model) if d.level == "error"]
    if diags:
        raise ModelInvariantError(diags)
    return model


def model_to_obj(model: SpinModel) -> dict:
    obj = {
        "name": model.name,
        "dim": model.dim,
        "sublattices": model.sublattices,
        "constraints": [
            {
                "label": fam.label,
                "terms": [
                    {
                        "sublattice": t.sublattice,
                        "offset": list(t.offset),
                        "coeff": t.coeff,
                        "spin_sign": t.spin_sign,
                    }
                    for t in fam.terms
                ],
            }
            for fam in model.constraints
        ],
    }
    if model.metadata:
        obj["metadata"] = model.metadata
    return obj


def serialize(model: SpinModel) -> str:
    return json.dumps(model_to_obj(model), indent=2)


def load_model(path) -> SpinModel:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


def load_builtin(name: str) -> SpinModel:
    if name not in BUILTIN_MODELS:
        raise KeyError(f"unknown built-in model '{name}'; choose from {', '.join(BUILTIN_MODELS)}")
    text = resources.files("rigidity.data.models").joinpath(f"{name}.json").read_text(encoding="utf-8")
    return parse_model(text)
