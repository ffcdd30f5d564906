"""JSON model specifications and built-in presets.

Schema: ``{"kind": "parameters" | "heston" | "heston_jumps" | "bates" |
"bns", ...fields}``. Every malformed field raises
:class:`ModelSpecError` naming the field.
"""

import copy
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Union

from affinevol.core.errors import ModelSpecError, ParameterError
from affinevol.core.generator import GeneratorPair, ParametricGenerator
from affinevol.core.jumps import (
    CompoundPoisson,
    JumpMeasureSpec,
    MarkLaw,
    NoJumps,
    PointMass,
    PriceDoubleExponential,
    PriceExponential,
    PriceGaussian,
    VarianceExponential,
)
from affinevol.core.parameters import AdmissibleParameterSet
from affinevol.models.bates import BatesGenerator, BatesParams
from affinevol.models.bns import SUBORDINATORS, BNSGenerator, BNSParams
from affinevol.models.heston import (
    HestonGenerator,
    HestonJumpGenerator,
    HestonJumpParams,
    HestonParams,
)

FIG1_HESTON = {
    "lambda": 1.3253,
    "theta": 0.0354,
    "zeta": 0.3877,
    "rho": -0.7165,
}

PRESETS: Dict[str, Dict[str, Any]] = {
    "heston": {"kind": "heston", **FIG1_HESTON},
    "heston_jumps": {
        "kind": "heston_jumps",
        **FIG1_HESTON,
        "jumps": {"intensity": 0.1, "law": "exponential", "mean": 0.1},
    },
    "bates": {
        "kind": "bates",
        **FIG1_HESTON,
        "jumps": {
            "intensity": 5.0,
            "law": "gaussian",
            "mean": -0.1,
            "std": 0.1,
        },
    },
    "bns": {
        "kind": "bns",
        "lambda": 1.0,
        "rho": -0.5,
        "subordinator": {"family": "gamma", "a": 0.5, "b": 12.5},
    },
}


@dataclass
class Model:
    """A parsed model: its generator, native parameters and embedding."""

    kind: str
    generator: GeneratorPair
    params: Any

    def embedding(self) -> AdmissibleParameterSet:
        """The model as an admissible parameter set."""
        if isinstance(self.params, AdmissibleParameterSet):
            return self.params
        return self.params.to_parameters()


def _number(spec: Mapping[str, Any], key: str, path: str, default=None):
    if key not in spec:
        if default is not None:
            return default
        raise ModelSpecError(f"{path}{key}", "missing required field")
    value = spec[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ModelSpecError(
            f"{path}{key}", f"expected a number, got {value!r}"
        )
    if math.isnan(value):
        raise ModelSpecError(f"{path}{key}", "NaN is not allowed")
    return float(value)


def _section(spec: Mapping[str, Any], key: str, path: str) -> Mapping:
    value = spec.get(key)
    if not isinstance(value, Mapping):
        raise ModelSpecError(f"{path}{key}", "expected an object")
    return value


def parse_mark_law(spec: Mapping[str, Any], path: str) -> MarkLaw:
    """Build a mark law from ``{"law": ..., ...}``."""
    law = spec.get("law")
    builders: Dict[str, Callable[[], MarkLaw]] = {
        "exponential": lambda: PriceExponential(
            _number(spec, "mean", path),
            int(_number(spec, "direction", path, default=-1.0)),
        ),
        "double_exponential": lambda: PriceDoubleExponential(
            _number(spec, "p_up", path),
            _number(spec, "eta_up", path),
            _number(spec, "eta_down", path),
        ),
        "gaussian": lambda: PriceGaussian(
            _number(spec, "mean", path), _number(spec, "std", path)
        ),
        "variance_exponential": lambda: VarianceExponential(
            _number(spec, "mean", path),
            _number(spec, "rho", path, default=0.0),
        ),
        "point_mass": lambda: PointMass(
            _number(spec, "x", path), _number(spec, "y", path, default=0.0)
        ),
    }
    if law not in builders:
        raise ModelSpecError(
            f"{path}law", f"unknown mark law {law!r}; one of {sorted(builders)}"
        )
    try:
        return builders[law]()
    except ParameterError as exc:
        raise ModelSpecError(f"{path}law", str(exc)) from exc


def parse_jump_measure(spec: Any, path: str) -> JumpMeasureSpec:
    """Build a jump measure from ``null`` or a compound Poisson object."""
    if spec is None:
        return NoJumps()
    if not isinstance(spec, Mapping):
        raise ModelSpecError(path.rstrip("."), "expected an object or null")
    kind = spec.get("type", "compound_poisson")
    if kind == "none":
        return NoJumps()
    if kind != "compound_poisson":
        raise ModelSpecError(
            f"{path}type",
            f"unsupported jump measure {kind!r}; analytic cgf handles are "
            "available from Python only",
        )
    intensity = _number(spec, "intensity", path)
    marks = parse_mark_law(_section(spec, "marks", path), f"{path}marks.")
    try:
        return CompoundPoisson(intensity, marks)
    except ParameterError as exc:
        raise ModelSpecError(f"{path}intensity", str(exc)) from exc


def _heston(spec: Mapping[str, Any]) -> HestonParams:
    return HestonParams(
        lam=_number(spec, "lambda", ""),
        theta=_number(spec, "theta", ""),
        zeta=_number(spec, "zeta", ""),
        rho=_number(spec, "rho", ""),
    )


def _element(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ModelSpecError(path, f"expected numbers, got {value!r}")
    return float(value)


def _matrix(spec: Mapping[str, Any], key: str):
    value = spec.get(key, [[0.0, 0.0], [0.0, 0.0]])
    if (
        not isinstance(value, list)
        or len(value) != 2
        or any(not isinstance(r, list) or len(r) != 2 for r in value)
    ):
        raise ModelSpecError(key, "expected a 2x2 array")
    return [[_element(x, key) for x in row] for row in value]


def _vector(spec: Mapping[str, Any], key: str):
    value = spec.get(key, [0.0, 0.0])
    if not isinstance(value, list) or len(value) != 2:
        raise ModelSpecError(key, "expected a 2-vector")
    return [_element(x, key) for x in value]


FIELDS: Dict[str, frozenset] = {
    "heston": frozenset({"kind", "lambda", "theta", "zeta", "rho"}),
    "heston_jumps": frozenset(
        {"kind", "lambda", "theta", "zeta", "rho", "jumps"}
    ),
    "bates": frozenset({"kind", "lambda", "theta", "zeta", "rho", "jumps"}),
    "bns": frozenset({"kind", "lambda", "rho", "subordinator"}),
    "parameters": frozenset(
        {"kind", "a", "alpha", "b", "beta", "c", "gamma", "m", "mu"}
    ),
}


def _build(spec: Mapping[str, Any]) -> Model:
    kind = spec.get("kind")
    allowed = FIELDS.get(kind) if isinstance(kind, str) else None
    unknown = sorted(set(spec) - allowed) if allowed else []
    if unknown:
        raise ModelSpecError(
            unknown[0],
            f"not a field of kind {kind!r}; one of {sorted(allowed)}",
        )
    if kind == "heston":
        params = _heston(spec)
        return Model(kind, HestonGenerator(params), params)
    if kind in ("heston_jumps", "bates"):
        heston = _heston(spec)
        jumps = _section(spec, "jumps", "")
        intensity = _number(jumps, "intensity", "jumps.")
        marks = parse_mark_law(jumps, "jumps.")
        if kind == "bates":
            params = BatesParams(heston, intensity, marks)
            return Model(kind, BatesGenerator(params), params)
        params = HestonJumpParams(heston, intensity, marks)
        return Model(kind, HestonJumpGenerator(params), params)
    if kind == "bns":
        sub = _section(spec, "subordinator", "")
        family = sub.get("family")
        if family not in SUBORDINATORS:
            raise ModelSpecError(
                "subordinator.family",
                f"unknown family {family!r}; one of {sorted(SUBORDINATORS)}",
            )
        fields = {
            k: _number(sub, k, "subordinator.")
            for k in sub
            if k != "family"
        }
        try:
            subordinator = SUBORDINATORS[family](**fields)
        except TypeError as exc:
            raise ModelSpecError("subordinator", str(exc)) from exc
        params = BNSParams(
            lam=_number(spec, "lambda", ""),
            rho=_number(spec, "rho", ""),
            subordinator=subordinator,
        )
        return Model(kind, BNSGenerator(params), params)
    if kind == "parameters":
        params = AdmissibleParameterSet(
            a=_matrix(spec, "a"),
            alpha=_matrix(spec, "alpha"),
            b=_vector(spec, "b"),
            beta=_vector(spec, "beta"),
            c=_number(spec, "c", "", default=0.0),
            gamma=_number(spec, "gamma", "", default=0.0),
            m=parse_jump_measure(spec.get("m"), "m."),
            mu=parse_jump_measure(spec.get("mu"), "mu."),
        )
        return Model(kind, ParametricGenerator(params), params)
    raise ModelSpecError(
        "kind",
        f"unknown model kind {kind!r}; one of "
        "['bates', 'bns', 'heston', 'heston_jumps', 'parameters']",
    )


def build_model(spec: Mapping[str, Any]) -> Model:
    """Parse a model specification into a :class:`Model`.

    Raises:
    ------
        ModelSpecError: On any malformed or inadmissible field
    """
    if not isinstance(spec, Mapping):
        raise ModelSpecError("<root>", "expected a JSON object")
    try:
        return _build(spec)
    except ParameterError as exc:
        raise ModelSpecError(spec.get("kind", "<root>"), str(exc)) from exc


def build_generator(spec: Mapping[str, Any]) -> GeneratorPair:
    """Generator pair of a model specification."""
    return build_model(spec).generator


def load_model_spec(source: Union[str, Path]) -> Dict[str, Any]:
    """Read a model spec from a JSON file path or an inline JSON string."""
    text = str(source)
    path = Path(text)
    if not text.lstrip().startswith("{") and path.exists():
        text = path.read_text()
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelSpecError(
            "<json>", f"line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(spec, dict):
        raise ModelSpecError("<root>", "expected a JSON object")
    return spec


def preset_spec(name: str, overrides: Mapping[str, Any] = None) -> Dict:
    """A preset spec, optionally with fields overridden."""
    if name not in PRESETS:
        raise ModelSpecError(
            "preset", f"unknown preset {name!r}; one of {sorted(PRESETS)}"
        )
    spec = copy.deepcopy(PRESETS[name])
    for key, value in (overrides or {}).items():
        if isinstance(value, Mapping) and isinstance(spec.get(key), dict):
            spec[key].update(value)
        else:
            spec[key] = value
    return spec
