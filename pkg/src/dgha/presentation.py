"""JSON presentations of algebras and modules, and their construction pipeline."""
from __future__ import annotations

import copy
import hashlib
import json
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import jsonschema
import numpy as np

from .cdga import Cdga, monomial_quotient, validate
from .exactfield import FieldSpec
from .modules import (DenseModule, DgModule, check_module, cone, koszul, koszul_module, matlis_dual,
                      quotient_by_element, quotient_module, residue_field, restrict, shift, trivial_extension,
                      truncate)


class ParseError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '/'}: {message}")
        self.path = path
        self.message = message


class ValidationError(ValueError):
    def __init__(self, axiom: str, witness):
        super().__init__(f"{axiom}: {witness}")
        self.axiom = axiom
        self.witness = witness


_SCALAR = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _SCALAR}}
_DEGREE_KEY = r"^-?\d+$"

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "dgha presentation",
    "type": "object",
    "required": ["field", "base_ring"],
    "additionalProperties": False,
    "properties": {
        "field": {
            "type": "object",
            "required": ["kind"],
            "additionalProperties": False,
            "properties": {"kind": {"enum": ["Q", "GF"]}, "p": {"type": "integer", "minimum": 2}},
        },
        "base_ring": {
            "oneOf": [
                {
                    "type": "object",
                    "required": ["kind", "vars", "relations"],
                    "additionalProperties": False,
                    "properties": {
                        "kind": {"const": "monomial_quotient"},
                        "vars": {"type": "array", "items": {"type": "string", "pattern": r"^[a-zA-Z]\w*$"},
                                 "maxItems": 6, "uniqueItems": True},
                        "relations": {"type": "array", "items": {"type": "string"}},
                    },
                },
                {
                    "type": "object",
                    "required": ["kind", "dims", "unit", "mult"],
                    "additionalProperties": False,
                    "properties": {
                        "kind": {"const": "structure_constants"},
                        "dims": {"type": "object", "patternProperties": {_DEGREE_KEY: {"type": "integer"}},
                                 "additionalProperties": False},
                        "unit": {"type": "array", "items": _SCALAR},
                        "mult": {"type": "object",
                                 "patternProperties": {r"^-?\d+,-?\d+$": {"type": "array", "items": _MATRIX}},
                                 "additionalProperties": False},
                        "differential": {"type": "object", "patternProperties": {_DEGREE_KEY: _MATRIX},
                                         "additionalProperties": False},
                    },
                },
            ]
        },
        "constructions": {
            "type": "array",
            "items": {
                "type": "object",
                "minProperties": 1,
                "maxProperties": 1,
                "properties": {
                    "koszul": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                    "quotient": {"type": "string"},
                    "cone_of_mult": {"type": "string"},
                    "matlis_dual": {"const": True},
                    "residue": {"const": True},
                    "trivial_extension": {"const": True},
                    "shift": {"type": "integer"},
                    "truncate": {"type": "object", "required": ["mode", "n"], "additionalProperties": False,
                                 "properties": {"mode": {"enum": ["le", "gt"]}, "n": {"type": "integer"}}},
                },
                "additionalProperties": False,
            },
        },
        "module": {
            "type": "object",
            "required": ["dims", "action"],
            "additionalProperties": False,
            "properties": {
                "dims": {"type": "object", "patternProperties": {_DEGREE_KEY: {"type": "integer"}},
                         "additionalProperties": False},
                "differential": {"type": "object", "patternProperties": {_DEGREE_KEY: _MATRIX},
                                 "additionalProperties": False},
                "action": {"type": "object",
                           "patternProperties": {r"^-?\d+,-?\d+$": {"type": "array", "items": _MATRIX}},
                           "additionalProperties": False},
            },
        },
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def _pointer(parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


@dataclass
class PresentationDoc:
    field: dict
    base_ring: dict
    constructions: list = dc_field(default_factory=list)
    module: dict | None = None

    def to_json(self) -> dict:
        out = {"field": self.field, "base_ring": self.base_ring}
        if self.constructions:
            out["constructions"] = self.constructions
        if self.module is not None:
            out["module"] = self.module
        return copy.deepcopy(out)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()[:16]

    @property
    def field_spec(self) -> FieldSpec:
        return FieldSpec(self.field.get("p", 0) if self.field["kind"] == "GF" else 0)


def parse_presentation(text) -> PresentationDoc:
    if isinstance(text, (str, bytes)):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError("", f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    else:
        data = copy.deepcopy(text)
    errs = sorted(_VALIDATOR.iter_errors(data), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errs:
        e = errs[-1]
        raise ParseError(_pointer(e.absolute_path), e.message)
    if data["field"]["kind"] == "GF":
        if "p" not in data["field"]:
            raise ParseError("/field", "GF needs a prime p")
        try:
            FieldSpec(data["field"]["p"])
        except ValueError as ex:
            raise ParseError("/field/p", str(ex)) from None
    return PresentationDoc(data["field"], data["base_ring"], data.get("constructions", []), data.get("module"))


def serialize(doc: PresentationDoc) -> str:
    return json.dumps(doc.to_json(), indent=2, sort_keys=True)


# polynomial expressions --------------------------------------------------------

_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")
_FACTOR = re.compile(r"^([a-zA-Z]\w*)(?:\^(\d+))?$")
_COEF = re.compile(r"^\d+(/\d+)?$")


def parse_monomials(expr: str, var_names, path: str = "") -> list:
    """'2*x^2 - 3/2*x*y + 1' -> [(Fraction, exponent tuple)]."""
    var_names = list(var_names)
    s = expr.strip()
    if not s:
        raise ParseError(path, "empty expression")
    out = []
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(path, f"cannot parse at column {pos}")
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(sign)
        exps = [0] * len(var_names)
        for f in m.group(2).split("*"):
            f = f.strip()
            if _COEF.match(f):
                coef *= Fraction(f)
            elif (fm := _FACTOR.match(f)):
                if fm.group(1) not in var_names:
                    raise ParseError(path, f"unknown variable {fm.group(1)!r} at column {m.start(2)}")
                exps[var_names.index(fm.group(1))] += int(fm.group(2) or 1)
            else:
                raise ParseError(path, f"bad factor {f!r} at column {m.start(2)}")
        out.append((coef, tuple(exps)))
        pos = m.end()
    return out


def relation_exponents(expr: str, var_names, path: str = "") -> tuple:
    terms = parse_monomials(expr, var_names, path)
    if len(terms) != 1 or terms[0][0] != 1:
        raise ParseError(path, "relations must be single monic monomials")
    return terms[0][1]


def element(R: Cdga, expr: str, path: str = "") -> np.ndarray:
    """A degree-0 element; monomials outside the basis lie in the monomial ideal and vanish."""
    F = R.field
    v = F.zeros((R.dim(0),))
    if not R.monomials:
        names = [f"e{i}" for i in range(R.dim(0))]
        for c, e in parse_monomials(expr, names, path):
            if sum(e) > 1:
                raise ParseError(path, "products of basis names need a monomial ring")
            if sum(e) == 0:
                v = F.add(v, F.scale(R.unit, F.scalar(c)))
            else:
                k = e.index(1)
                v[k] = F.add(F.array([v[k]]), F.array([F.scalar(c)]))[0]
        return v
    index = {m: k for k, m in enumerate(R.monomials)}
    for c, e in parse_monomials(expr, R.var_names, path):
        if e in index:
            k = index[e]
            v[k] = F.add(F.array([v[k]]), F.array([F.scalar(c)]))[0]
    return F.normalize(v)


def _matrix(F: FieldSpec, rows, shape, path):
    a = F.array([[F.scalar(x) for x in r] for r in rows]) if rows else F.zeros(shape)
    if a.size == 0:
        a = F.zeros(shape)
    if a.shape != shape:
        raise ParseError(path, f"expected shape {shape}, got {a.shape}")
    return a


def _tensor(F, data, shape, path):
    if len(data) != shape[0]:
        raise ParseError(path, f"expected {shape[0]} slices, got {len(data)}")
    t = F.zeros(shape)
    for a, rows in enumerate(data):
        t[a] = _matrix(F, rows, shape[1:], f"{path}/{a}")
    return t


def _base_ring(doc: PresentationDoc) -> Cdga:
    F = doc.field_spec
    b = doc.base_ring
    if b["kind"] == "monomial_quotient":
        rels = [relation_exponents(r, b["vars"], f"/base_ring/relations/{k}") for k, r in enumerate(b["relations"])]
        try:
            return monomial_quotient(F, b["vars"], rels)
        except ValueError as e:
            raise ParseError("/base_ring/relations", str(e)) from None
    dims = {int(n): d for n, d in b["dims"].items() if d}
    if any(n > 0 for n in dims):
        raise ParseError("/base_ring/dims", "positive degrees are not allowed")
    unit = F.array([F.scalar(x) for x in b["unit"]])
    if unit.shape != (dims.get(0, 0),):
        raise ParseError("/base_ring/unit", "unit must lie in degree 0")
    mult = {}
    for key, data in b["mult"].items():
        i, j = map(int, key.split(","))
        mult[(i, j)] = _tensor(F, data, (dims.get(i, 0), dims.get(i + j, 0), dims.get(j, 0)), f"/base_ring/mult/{key}")
    diff = {int(n): _matrix(F, rows, (dims.get(int(n) + 1, 0), dims.get(int(n), 0)), f"/base_ring/differential/{n}")
            for n, rows in b.get("differential", {}).items()}
    return Cdga(F, dims, unit, mult, diff)


def _literal_module(R: Cdga, lit: dict) -> DenseModule:
    F = R.field
    dims = {int(n): d for n, d in lit["dims"].items() if d}
    diff = {int(n): _matrix(F, rows, (dims.get(int(n) + 1, 0), dims.get(int(n), 0)), f"/module/differential/{n}")
            for n, rows in lit.get("differential", {}).items()}
    act = {}
    for key, data in lit["action"].items():
        i, n = map(int, key.split(","))
        act[(i, n)] = _tensor(F, data, (R.dim(i), dims.get(n + i, 0), dims.get(n, 0)), f"/module/action/{key}")
    return DenseModule(R, dims, diff, act, name="M")


@dataclass
class Built:
    ring: Cdga
    module: DgModule
    regular: bool  # module is the regular module of ring


def build(doc: PresentationDoc, check: bool = True) -> Built:
    R = _base_ring(doc)
    if check:
        rep = validate(R)
        if not rep.ok:
            v = rep.violations[0]
            raise ValidationError(v.axiom, v.witness)
    if doc.module is not None:
        m = _literal_module(R, doc.module)
        if check:
            bad = check_module(m)
            if bad:
                raise ValidationError(bad[0].axiom, bad[0].witness)
        st = Built(R, m, False)
    else:
        st = Built(R, R.regular, True)
    for k, c in enumerate(doc.constructions):
        st = _apply(st, c, f"/constructions/{k}")
    return st


def _apply(st: Built, c: dict, path: str) -> Built:
    (op, arg), = c.items()
    R, m = st.ring, st.module
    if op == "koszul":
        xs = [element(R, e, f"{path}/koszul/{k}") for k, e in enumerate(arg)]
        if st.regular:
            S = koszul(R, xs)
            return Built(S, S.regular, True)
        n = koszul_module(m, xs)
        return Built(n.ring, n, False)
    if op == "quotient":
        x = element(R, arg, f"{path}/quotient")
        S, _ = quotient_by_element(R, x)
        if st.regular:
            return Built(S, S.regular, True)
        return Built(S, quotient_module(m, x, S=S), False)
    if op == "cone_of_mult":
        x = element(R, arg, f"{path}/cone_of_mult")
        S, phi = quotient_by_element(R, x)
        return Built(R, restrict(quotient_module(m, x, S=S), phi), False)
    if op == "matlis_dual":
        return Built(R, matlis_dual(m), False)
    if op == "residue":
        return Built(R, residue_field(R), False)
    if op == "shift":
        return Built(R, shift(m, arg).dense(), False)
    if op == "truncate":
        return Built(R, truncate(m, arg["mode"], arg["n"]), False)
    if op == "trivial_extension":
        T = trivial_extension(R, m)
        return Built(T, T.regular, True)
    raise ParseError(path, f"unknown construction {op!r}")


# writing modules back out --------------------------------------------------------

def module_literal(m: DgModule) -> dict:
    F = m.field
    R = m.ring
    out = {"dims": {str(n): d for n, d in m.dims.items()}, "differential": {}, "action": {}}
    for n in m.degrees:
        if m.dim(n + 1):
            out["differential"][str(n)] = [[F.scalar_to_json(x) for x in r] for r in m.d(n)]
    for i in R.degrees:
        for n in m.degrees:
            if m.dim(n + i):
                t = m.action(i, n)
                out["action"][f"{i},{n}"] = [[[F.scalar_to_json(x) for x in r] for r in s] for s in t]
    return out


def ring_literal(R: Cdga) -> dict:
    F = R.field
    return {
        "kind": "structure_constants",
        "dims": {str(n): d for n, d in R.dims.items()},
        "unit": [F.scalar_to_json(x) for x in R.unit],
        "mult": {f"{i},{j}": [[[F.scalar_to_json(x) for x in r] for r in s] for s in R.m(i, j)]
                 for i in R.degrees for j in R.degrees if R.dim(i + j)},
        "differential": {str(n): [[F.scalar_to_json(x) for x in r] for r in R.d(n)]
                         for n in R.degrees if R.dim(n + 1)},
    }


# named example documents -----------------------------------------------------------

def corpus_names() -> list:
    from importlib.resources import files
    return sorted(p.name[:-5] for p in files("dgha.corpus").iterdir() if p.name.endswith(".json"))


def load_example(name: str) -> PresentationDoc:
    from importlib.resources import files
    path = files("dgha.corpus") / f"{name}.json"
    if not path.is_file():
        raise KeyError(f"no example named {name!r}; available: {', '.join(corpus_names())}")
    return parse_presentation(path.read_text(encoding="utf-8"))
