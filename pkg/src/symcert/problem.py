"""Problem files: JSON documents with exact rationals written as ``"p/q"`` strings.

Polynomials are objects keyed by comma-joined exponent vectors, e.g.
``{"2,0": "1", "1,1": "-3/2"}``. Matrices are lists of rows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import jsonschema

from .exact import Matrix, SymPoly, monomial_index
from .fiber import FiberModel
from .macaulay import InvalidInput

SCHEMA_VERSION = 1

_scalar = {"type": ["string", "integer"]}
_poly = {"type": "object", "additionalProperties": _scalar}
_poly_list = {"type": "array", "items": _poly}
_matrix = {"type": "array", "items": {"type": "array", "items": _scalar}}
_mult = {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}}
_int_list = {"type": "array", "items": {"type": "integer"}}

SCHEMA = {
    "type": "object",
    "required": ["schema_version"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "d": {"type": "integer", "minimum": 1},
        "e": {"type": "integer", "minimum": 1},
        "r": {"type": "integer", "minimum": 1},
        "pairing": _matrix,
        "A": _poly_list,
        "B": _poly_list,
        "trace": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "instances": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["N", "word"],
                        "additionalProperties": False,
                        "properties": {
                            "N": {"type": "integer", "minimum": 0},
                            "word": {"type": "string"},
                            "vdecs": _poly_list,
                            "wdecs": _poly_list,
                        },
                    },
                },
                "sweep": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "d": _int_list,
                        "r": _int_list,
                        "m": _int_list,
                        "N": _int_list,
                        "samples": {"type": "integer", "minimum": 0},
                        "orderings": {"type": "integer", "minimum": 1},
                    },
                },
            },
        },
        "graph": {
            "type": "object",
            "required": ["mult", "vdecs", "wdecs"],
            "additionalProperties": False,
            "properties": {
                "mult": _mult,
                "vdecs": _poly_list,
                "wdecs": _poly_list,
                "expected_value": _scalar,
            },
        },
        "fiber_model": {
            "type": "object",
            "required": ["points", "e", "f", "r", "sections_E", "sections_F"],
            "additionalProperties": False,
            "properties": {
                "points": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                "e": {"type": "integer", "minimum": 1},
                "f": {"type": "integer", "minimum": 1},
                "r": {"type": "integer", "minimum": 1},
                "sections_E": {"type": "array", "items": {"type": "object", "additionalProperties": _poly}},
                "sections_F": {"type": "array", "items": {"type": "object", "additionalProperties": _poly}},
            },
        },
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "seed": {"type": "integer", "minimum": 0},
                "N_max": {"type": "integer", "minimum": 0},
                "m_max": {"type": "integer", "minimum": 0},
                "point": {"type": "string"},
                "c_gamma_offset": _scalar,
            },
        },
    },
}


def parse_scalar(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise InvalidInput(f"{x!r} is not an exact scalar; write it as a 'p/q' string")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"cannot parse scalar {x!r}: {exc}") from None


def format_scalar(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_poly(obj: dict, dim: int, degree: int) -> SymPoly:
    terms = {}
    for key, c in obj.items():
        try:
            exps = tuple(int(t) for t in key.split(","))
        except ValueError:
            raise InvalidInput(f"bad exponent key {key!r}") from None
        if len(exps) != dim:
            raise InvalidInput(f"exponent key {key!r} has {len(exps)} entries, expected {dim}")
        if any(k < 0 for k in exps) or sum(exps) != degree:
            raise InvalidInput(f"exponent key {key!r} is not of degree {degree}")
        if exps in terms:
            raise InvalidInput(f"duplicate exponent key {key!r}")
        terms[exps] = parse_scalar(c)
    return SymPoly(dim, degree, terms)


def format_poly(p: SymPoly) -> dict:
    order = monomial_index(p.dim, p.degree)
    keys = sorted(p.terms, key=order.__getitem__)
    return {",".join(str(k) for k in a): format_scalar(p.terms[a]) for a in keys}


def parse_matrix(rows, shape=None) -> Matrix:
    M = Matrix([[parse_scalar(x) for x in row] for row in rows]) if rows else None
    if M is None or M.rows == 0 or M.cols == 0:
        raise InvalidInput("matrix must be nonempty")
    if shape is not None and M.shape != tuple(shape):
        raise InvalidInput(f"matrix has shape {M.shape}, expected {tuple(shape)}")
    return M


def format_matrix(M: Matrix) -> list:
    return [[format_scalar(x) for x in row] for row in M.entries]


@dataclass
class TraceInstance:
    N: int
    word: str
    vdecs: list | None = None
    wdecs: list | None = None


@dataclass
class Sweep:
    d: list = field(default_factory=list)
    r: list = field(default_factory=list)
    m: list = field(default_factory=list)
    N: list = field(default_factory=list)
    samples: int = 1
    orderings: int = 3


@dataclass
class GraphSpec:
    mult: tuple
    vdecs: list
    wdecs: list
    expected_value: Fraction | None = None


@dataclass
class ProblemFile:
    d: int | None = None
    e: int | None = None
    r: int | None = None
    pairing: Matrix | None = None
    A: list | None = None
    B: list | None = None
    trace_instances: list | None = None
    sweep: Sweep | None = None
    graph: GraphSpec | None = None
    fiber_model: FiberModel | None = None
    options: dict = field(default_factory=dict)

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise InvalidInput(f"problem file is missing: {', '.join(missing)}")

    @property
    def seed(self) -> int:
        return self.options.get("seed", 0)


def _poly_list(objs, dim, degree, what):
    if dim is None or degree is None:
        raise InvalidInput(f"{what} needs the dimensions and r to be declared")
    return [parse_poly(o, dim, degree) for o in objs]


def problem_from_dict(doc: Any) -> ProblemFile:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InvalidInput(f"schema error at {where}: {exc.message}") from None
    pf = ProblemFile(d=doc.get("d"), e=doc.get("e"), r=doc.get("r"))
    if "pairing" in doc:
        shape = (pf.d, pf.e) if pf.d and pf.e else None
        pf.pairing = parse_matrix(doc["pairing"], shape)
    if "A" in doc:
        pf.A = _poly_list(doc["A"], pf.d, pf.r, "A")
    if "B" in doc:
        pf.B = _poly_list(doc["B"], pf.e, pf.r, "B")
    if "trace" in doc:
        t = doc["trace"]
        if "instances" in t:
            pf.trace_instances = []
            for inst in t["instances"]:
                pf.trace_instances.append(
                    TraceInstance(
                        inst["N"],
                        inst["word"],
                        _poly_list(inst["vdecs"], pf.d, pf.r, "vdecs") if "vdecs" in inst else None,
                        _poly_list(inst["wdecs"], pf.e, pf.r, "wdecs") if "wdecs" in inst else None,
                    )
                )
        if "sweep" in t:
            pf.sweep = Sweep(**t["sweep"])
    if "graph" in doc:
        g = doc["graph"]
        pf.graph = GraphSpec(
            tuple(tuple(row) for row in g["mult"]),
            _poly_list(g["vdecs"], pf.d, pf.r, "graph.vdecs"),
            _poly_list(g["wdecs"], pf.e, pf.r, "graph.wdecs"),
            parse_scalar(g["expected_value"]) if "expected_value" in g else None,
        )
    if "fiber_model" in doc:
        fm = doc["fiber_model"]

        def sections(tables, dim):
            return [{x: parse_poly(p, dim, fm["r"]) for x, p in table.items()} for table in tables]

        pf.fiber_model = FiberModel(
            list(fm["points"]),
            fm["e"],
            fm["f"],
            fm["r"],
            sections(fm["sections_E"], fm["e"]),
            sections(fm["sections_F"], fm["f"]),
        )
    opts = dict(doc.get("options", {}))
    if "c_gamma_offset" in opts:
        opts["c_gamma_offset"] = parse_scalar(opts["c_gamma_offset"])
    pf.options = opts
    return pf


def problem_to_dict(pf: ProblemFile) -> dict:
    doc: dict = {"schema_version": SCHEMA_VERSION}
    for name in ("d", "e", "r"):
        if getattr(pf, name) is not None:
            doc[name] = getattr(pf, name)
    if pf.pairing is not None:
        doc["pairing"] = format_matrix(pf.pairing)
    if pf.A is not None:
        doc["A"] = [format_poly(p) for p in pf.A]
    if pf.B is not None:
        doc["B"] = [format_poly(p) for p in pf.B]
    if pf.trace_instances is not None or pf.sweep is not None:
        t: dict = {}
        if pf.trace_instances is not None:
            t["instances"] = []
            for inst in pf.trace_instances:
                item: dict = {"N": inst.N, "word": inst.word}
                if inst.vdecs is not None:
                    item["vdecs"] = [format_poly(p) for p in inst.vdecs]
                if inst.wdecs is not None:
                    item["wdecs"] = [format_poly(p) for p in inst.wdecs]
                t["instances"].append(item)
        if pf.sweep is not None:
            s = pf.sweep
            t["sweep"] = {"d": s.d, "r": s.r, "m": s.m, "N": s.N, "samples": s.samples, "orderings": s.orderings}
        doc["trace"] = t
    if pf.graph is not None:
        g = pf.graph
        doc["graph"] = {
            "mult": [list(row) for row in g.mult],
            "vdecs": [format_poly(p) for p in g.vdecs],
            "wdecs": [format_poly(p) for p in g.wdecs],
        }
        if g.expected_value is not None:
            doc["graph"]["expected_value"] = format_scalar(g.expected_value)
    if pf.fiber_model is not None:
        fm = pf.fiber_model
        doc["fiber_model"] = {
            "points": list(fm.points),
            "e": fm.e,
            "f": fm.f,
            "r": fm.r,
            "sections_E": [{x: format_poly(t[x]) for x in fm.points} for t in fm.sections_E],
            "sections_F": [{x: format_poly(t[x]) for x in fm.points} for t in fm.sections_F],
        }
    if pf.options:
        opts = dict(pf.options)
        if "c_gamma_offset" in opts:
            opts["c_gamma_offset"] = format_scalar(opts["c_gamma_offset"])
        doc["options"] = opts
    return doc


def loads(text: str) -> ProblemFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"not valid JSON: {exc}") from None
    return problem_from_dict(doc)


def load(path) -> ProblemFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from None
    return loads(text)


def dumps(pf: ProblemFile) -> str:
    return canonical_json(problem_to_dict(pf))


def canonical_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
