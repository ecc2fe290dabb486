"""Experiment configuration: YAML (or JSON) file -> ExperimentConfig -> instances.

Example::

    model: {n: 1, K: 2}
    exponents: {head: ["2", "2"]}
    weights:
      omega: [[1, 1, 4, 4], [4, 4, 1, 1]]
      v: [1, 1, 1, 1]
    suites: [holder, theorem_ap, sp]
    seed: 7

Weights may instead be ``{file: path}`` (YAML/JSON with omega and v),
``{generator: {seed: 3, L: 2.0}}`` or the string ``trivial``.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import yaml

from .dyadic_model import EXACT, FLOAT, DyadicModel
from .exponents import ExponentSequence
from .function_vectors import WeightVector, make_weight_vector, trivial_weights
from .sampling import make_rng, random_weight_vector

SUITES = ("holder", "theorem_ap", "classical", "universal", "carleson", "sp", "corollary_astar")


class ConfigError(ValueError):
    pass


@dataclass
class ModelConfig:
    n: int = 1
    K: int = 3


@dataclass
class SearchConfig:
    restarts: int = 8
    sweeps: int = 40
    step: float = 0.5


@dataclass
class BenchConfig:
    n: int = 1
    K: list[int] = field(default_factory=lambda: [12, 14, 16, 18])
    repeats: int = 3


@dataclass
class ExperimentConfig:
    model: ModelConfig = field(default_factory=ModelConfig)
    exponents: dict = field(default_factory=lambda: {"head": ["2", "2"]})
    weights: object = "trivial"
    suites: list[str] = field(default_factory=lambda: list(SUITES))
    samples: int = 200
    lambda_grid: int = 32
    seed: int = 0
    mode: str = FLOAT
    tolerances: dict = field(default_factory=lambda: {"rel": 1e-9})
    classical_p: list[str] = field(default_factory=lambda: ["3/2", "2", "3"])
    corollary_v: str = "p/p_i"
    search: SearchConfig = field(default_factory=SearchConfig)
    bench: BenchConfig = field(default_factory=BenchConfig)
    output: dict = field(default_factory=lambda: {"dir": "out", "formats": ["json", "csv", "text"]})
    base_dir: str = field(default=".", repr=False, compare=False)

    @property
    def tol(self) -> float:
        return float(self.tolerances.get("rel", 1e-9))

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out.pop("base_dir")
        return out

    @classmethod
    def from_dict(cls, d: dict, base_dir: str = ".") -> "ExperimentConfig":
        d = dict(d)
        known = {f.name for f in dataclasses.fields(cls)} - {"base_dir"}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            if "model" in d:
                d["model"] = ModelConfig(**d["model"])
            if "search" in d:
                d["search"] = SearchConfig(**d["search"])
            if "bench" in d:
                d["bench"] = BenchConfig(**d["bench"])
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc
        cfg = cls(**d, base_dir=base_dir)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.mode not in (FLOAT, EXACT):
            raise ConfigError(f"mode must be 'float' or 'exact', not {self.mode!r}")
        bad = [s for s in self.suites if s not in SUITES]
        if bad:
            raise ConfigError(f"unknown suites {bad}; choose from {list(SUITES)}")
        if self.corollary_v not in ("p/p_i", "1/p_i"):
            raise ConfigError("corollary_v must be 'p/p_i' or '1/p_i'")
        self.sequence()
        if isinstance(self.weights, dict) and "file" in self.weights:
            if not self.resolve(self.weights["file"]).exists():
                raise ConfigError(f"weights file {self.weights['file']!r} does not exist")

    def resolve(self, path: str) -> Path:
        p = Path(path)
        return p if p.is_absolute() else Path(self.base_dir) / p

    def sequence(self) -> ExponentSequence:
        try:
            return ExponentSequence.from_dict(self.exponents)
        except (ValueError, ZeroDivisionError, TypeError, KeyError) as exc:
            raise ConfigError(str(exc)) from exc

    def build_model(self) -> DyadicModel:
        try:
            return DyadicModel(self.model.n, self.model.K)
        except (ValueError, MemoryError) as exc:
            raise ConfigError(str(exc)) from exc

    def build_weights(self, model: DyadicModel, mode: str | None = None) -> WeightVector:
        mode = mode or self.mode
        seq = self.sequence()
        spec = self.weights
        try:
            if spec == "trivial" or spec is None:
                return trivial_weights(model, seq, mode)
            if not isinstance(spec, dict):
                raise ConfigError("weights must be 'trivial' or a mapping")
            if "generator" in spec:
                g = spec["generator"]
                rng = make_rng(int(g.get("seed", self.seed)), 0)
                return random_weight_vector(rng, model, seq, mode, float(g.get("L", 2.0)))
            if "file" in spec:
                spec = load_mapping(self.resolve(spec["file"]))
            omega = [[_number(x, mode) for x in w] for w in spec["omega"]]
            v = [_number(x, mode) for x in spec["v"]]
            return make_weight_vector(model, omega, v, seq, mode)
        except ConfigError:
            raise
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"bad weights: {exc}") from exc


def _number(x, mode: str):
    if mode == EXACT:
        return Fraction(str(x)) if not isinstance(x, (int, Fraction)) else Fraction(x)
    return float(Fraction(x)) if isinstance(x, str) else float(x)


def load_mapping(path: Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text) if str(path).endswith(".json") else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must hold a mapping")
    return data


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    return ExperimentConfig.from_dict(load_mapping(path), base_dir=str(path.parent))


def dump_config(cfg: ExperimentConfig, path: str | Path) -> None:
    path = Path(path)
    data = cfg.to_dict()
    if path.suffix == ".json":
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        path.write_text(yaml.safe_dump(data, sort_keys=True))
