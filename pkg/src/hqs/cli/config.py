"""Run configuration: a versioned YAML document with dotted command-line overrides."""

from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import jsonschema
import yaml

from ..errors import ConfigError
from ..evolve import EvolutionGrid, LindbladSpec
from ..model import SystemParams
from ..states import InitialStateSpec, OscillatorSpec, QubitPairSpec

SCHEMA_VERSION = 1
OSC_MEASURES = ("auto", "concurrence", "log_negativity")

_NUMBER = {"type": ["number", "string"]}
_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["version"],
    "properties": {
        "version": {"const": SCHEMA_VERSION},
        "label": {"type": "string"},
        "system": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                k: _NUMBER for k in ("r_b", "r_d", "r_i", "omega_tilde", "delta_tilde", "g_ratio_2")
            },
        },
        "initial": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "qubits": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {"family": {"enum": ["psi1", "psi2"]}, "phi": _NUMBER},
                },
                "osc_a": {"$ref": "#/$defs/oscillator"},
                "osc_b": {"$ref": "#/$defs/oscillator"},
                "truncation": {
                    "oneOf": [
                        {"type": "null"},
                        {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 2, "maxItems": 2},
                    ]
                },
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"tau_max": _NUMBER, "n_samples": {"type": "integer"}},
        },
        "lindblad": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {k: _NUMBER for k in ("lambda_r", "lambda_d", "nbar_th")},
                },
            ]
        },
        "measures": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"oscillator": {"enum": list(OSC_MEASURES)}},
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "path": {"type": ["string", "null"]},
                "format": {"const": "csv"},
                "gnuplot": {"type": "boolean"},
            },
        },
        "validation": {"type": "boolean"},
    },
    "$defs": {
        "oscillator": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["fock", "coherent", "thermal"]},
                "n": {"type": "integer", "minimum": 0},
                "alpha": {
                    "oneOf": [_NUMBER, {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2}]
                },
                "nbar": _NUMBER,
            },
        }
    },
}

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv, ast.Pow: operator.pow}
_NAMES = {"pi": math.pi}
_FUNCS = {"sqrt": math.sqrt}


def _eval_node(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        value = _eval_node(node.operand)
        return -value if isinstance(node.op, ast.USub) else value
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS and len(node.args) == 1:
        return _FUNCS[node.func.id](_eval_node(node.args[0]))
    raise ValueError("unsupported expression")


def parse_number(value, where: str = "value") -> float:
    """A float, or an arithmetic string over ``pi`` and ``sqrt`` such as ``"pi/12"``."""
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a number, got a boolean")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(_eval_node(ast.parse(value, mode="eval").body))
        except (SyntaxError, ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"{where}: cannot read {value!r} as a number") from exc
    raise ConfigError(f"{where}: expected a number, got {type(value).__name__}")


@dataclass(frozen=True)
class OutputSpec:
    path: str | None = None
    format: str = "csv"
    gnuplot: bool = False


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one trajectory."""

    system: SystemParams = field(default_factory=SystemParams)
    initial: InitialStateSpec = field(default_factory=InitialStateSpec)
    grid: EvolutionGrid = field(default_factory=lambda: EvolutionGrid(10.0, 401))
    lindblad: LindbladSpec | None = None
    osc_measure: str = "auto"
    output: OutputSpec = field(default_factory=OutputSpec)
    validation: bool = False
    truncation: tuple[int, int] | None = None
    label: str = "run"

    def __post_init__(self):
        if self.osc_measure not in OSC_MEASURES:
            raise ConfigError(f"measures.oscillator must be one of {OSC_MEASURES}, got {self.osc_measure!r}")

    def to_dict(self) -> dict:
        """Plain nested dict in the config-file layout (round-trips through ``from_dict``)."""

        def osc(o: OscillatorSpec):
            if o.kind == "fock":
                return {"kind": "fock", "n": int(o.n)}
            if o.kind == "coherent":
                return {"kind": "coherent", "alpha": [float(o.alpha.real), float(o.alpha.imag)]}
            return {"kind": "thermal", "nbar": float(o.nbar)}

        s = self.system
        return {
            "version": SCHEMA_VERSION,
            "label": self.label,
            "system": {
                "r_b": s.r_b,
                "r_d": s.r_d,
                "r_i": s.r_i,
                "omega_tilde": s.omega_tilde,
                "delta_tilde": s.delta_tilde,
                "g_ratio_2": s.g_ratio_2,
            },
            "initial": {
                "qubits": {"family": self.initial.qubits.family, "phi": self.initial.qubits.phi},
                "osc_a": osc(self.initial.osc_a),
                "osc_b": osc(self.initial.osc_b),
                "truncation": list(self.truncation) if self.truncation else None,
            },
            "grid": {"tau_max": self.grid.tau_max, "n_samples": int(self.grid.n_samples)},
            "lindblad": None
            if self.lindblad is None
            else {
                "lambda_r": self.lindblad.lambda_r,
                "lambda_d": self.lindblad.lambda_d,
                "nbar_th": self.lindblad.nbar_th,
            },
            "measures": {"oscillator": self.osc_measure},
            "output": {"path": self.output.path, "format": self.output.format, "gnuplot": self.output.gnuplot},
            "validation": self.validation,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        """Validate against the schema and build the typed configuration."""
        try:
            jsonschema.validate(doc, _SCHEMA)
        except jsonschema.ValidationError as exc:
            where = ".".join(str(p) for p in exc.absolute_path) or "<root>"
            raise ConfigError(f"{where}: {exc.message}") from None
        try:
            return cls._build(doc)
        except ConfigError:
            raise
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def _build(cls, doc: dict) -> "RunConfig":
        sysd = doc.get("system", {})
        system = SystemParams(**{k: parse_number(v, f"system.{k}") for k, v in sysd.items()})

        ini = doc.get("initial", {})
        qd = ini.get("qubits", {})
        qubits = QubitPairSpec(
            family=qd.get("family", "psi1"),
            phi=parse_number(qd.get("phi", "pi/4"), "initial.qubits.phi"),
        )
        oscs = [_oscillator(ini.get(name, {"kind": "fock", "n": 0}), f"initial.{name}") for name in ("osc_a", "osc_b")]
        truncation = ini.get("truncation")

        gd = doc.get("grid", {})
        grid = EvolutionGrid(parse_number(gd.get("tau_max", 10.0), "grid.tau_max"), gd.get("n_samples", 401))

        ld = doc.get("lindblad")
        lindblad = None
        if ld is not None:
            lindblad = LindbladSpec(**{k: parse_number(v, f"lindblad.{k}") for k, v in ld.items()})

        od = doc.get("output", {})
        return cls(
            system=system,
            initial=InitialStateSpec(qubits, oscs[0], oscs[1]),
            grid=grid,
            lindblad=lindblad,
            osc_measure=doc.get("measures", {}).get("oscillator", "auto"),
            output=OutputSpec(od.get("path"), od.get("format", "csv"), od.get("gnuplot", False)),
            validation=doc.get("validation", False),
            truncation=tuple(truncation) if truncation else None,
            label=doc.get("label", "run"),
        )


def _oscillator(d: dict, where: str) -> OscillatorSpec:
    kind = d["kind"]
    extra = set(d) - {"kind", {"fock": "n", "coherent": "alpha", "thermal": "nbar"}[kind]}
    if extra:
        raise ConfigError(f"{where}: key(s) {sorted(extra)} do not apply to a {kind} oscillator")
    if kind == "fock":
        return OscillatorSpec.fock(d.get("n", 0))
    if kind == "coherent":
        a = d.get("alpha", 0.0)
        if isinstance(a, list):
            return OscillatorSpec.coherent(complex(parse_number(a[0], where), parse_number(a[1], where)))
        return OscillatorSpec.coherent(parse_number(a, f"{where}.alpha"))
    return OscillatorSpec.thermal(parse_number(d.get("nbar", 0.0), f"{where}.nbar"))


def apply_overrides(doc: dict, overrides: Sequence[str]) -> dict:
    """Apply ``--section.key value`` or ``--section.key=value`` pairs to a config tree.

    Dashes in key names map to underscores (``--system.r-b`` sets
    ``system.r_b``). Values are read as YAML scalars.
    """
    doc = yaml.safe_load(yaml.safe_dump(doc))  # deep copy of plain data
    items = list(overrides)
    i = 0
    while i < len(items):
        tok = items[i]
        if not tok.startswith("--") or len(tok) < 3:
            raise ConfigError(f"unexpected argument {tok!r}; overrides look like --system.r-b 0.5")
        key = tok[2:]
        if "=" in key:
            key, raw = key.split("=", 1)
            i += 1
        else:
            if i + 1 >= len(items):
                raise ConfigError(f"override {tok} has no value")
            raw = items[i + 1]
            i += 2
        path = [p.replace("-", "_") for p in key.split(".")]
        node: Any = doc
        for p in path[:-1]:
            if node.get(p) is None:
                node[p] = {}
            node = node[p]
            if not isinstance(node, dict):
                raise ConfigError(f"override {key}: {p} is not a section")
        node[path[-1]] = yaml.safe_load(raw)
    return doc


def load_config(path: str | Path | None = None, overrides: Sequence[str] = ()) -> RunConfig:
    """Read a config file (or start from defaults) and apply overrides."""
    doc: dict = {"version": SCHEMA_VERSION}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
        try:
            loaded = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path} is not valid YAML: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError(f"{path} must contain a mapping at the top level")
        doc = loaded
    return RunConfig.from_dict(apply_overrides(doc, overrides))
