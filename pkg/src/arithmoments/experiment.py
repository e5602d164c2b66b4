import logging
from pathlib import Path
from typing import Any, Dict, Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from arithmoments.errors import ConfigError, ParameterError
from arithmoments.functions.builtins import BUILTINS, builtin
from arithmoments.functions.combinators import custom_function
from arithmoments.functions.prime_classes import build_prime_classes, kolmogorov_example_function
from arithmoments.functions.types import AdditiveFunction
from arithmoments.limitlaws.kolmogorov import parse_params
from arithmoments.models.domain import KolmogorovParams, PrimeSumMode, ProgressionSpec
from arithmoments.primes.sieve import MAX_BOUND, primes_in_progression
from arithmoments.primes.types import PrimeSet

logger = logging.getLogger(__name__)

KOLMOGOROV_EXAMPLE = "kolmogorov_example"

# keys that change where or how fast a run happens, never what it computes
RUNTIME_KEYS = {"out", "workers"}


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    fn: str = Field(default="omega", description="Built-in name, kolmogorov_example, or the name of a custom rule")
    rule: Optional[str] = Field(default=None, description="Rule expression over p and a for a custom function")
    kind: Literal["additive", "strongly_additive"] = Field(default="additive", description="Kind of the custom rule")
    k: int = Field(default=1, ge=1)
    l: Optional[int] = Field(default=None, ge=1)
    n: int = Field(..., ge=1, le=MAX_BOUND)
    orders: int = Field(default=4, ge=1)
    mode: Literal["paper_progression", "divisor_density", "both"] = "both"
    trials: int = Field(default=10_000, ge=1)
    seed: int = Field(default=0, ge=0)
    params: Optional[str] = Field(default=None, description='Kolmogorov params, "A=-1,C=1,mu=0.3,nu=0.3"')
    vs: Literal["normal", "kfun", "omega_diff"] = "normal"
    epsilon: Optional[float] = Field(default=None, gt=0)
    export_samples: bool = False
    workers: Optional[int] = Field(default=None, ge=1)
    out: Path = Path("reports")

    @model_validator(mode="after")
    def check_experiment(self) -> "ExperimentConfig":
        if self.k > 1 and self.l is None:
            raise ValueError(f"l is required when k={self.k} > 1")
        if self.rule is None and self.fn not in BUILTINS and self.fn != KOLMOGOROV_EXAMPLE:
            raise ValueError(f"fn {self.fn!r} is neither a built-in nor given a rule")
        if self.fn == KOLMOGOROV_EXAMPLE and self.params is None:
            raise ValueError("params are required for fn kolmogorov_example")
        return self

    @property
    def residue(self) -> int:
        return self.l if self.l is not None else 1

    def progression(self) -> ProgressionSpec:
        try:
            return ProgressionSpec(k=self.k, l=self.residue, n=self.n)
        except ValidationError as e:
            raise ConfigError(validation_message(e), field="l") from e

    def modes(self) -> list[PrimeSumMode]:
        if self.mode == "both":
            return [PrimeSumMode.PAPER_PROGRESSION, PrimeSumMode.DIVISOR_DENSITY]
        return [PrimeSumMode(self.mode)]

    def single_mode(self) -> PrimeSumMode:
        """Mode for commands that take one prime set; 'both' means the progression's primes."""
        if self.mode == "both":
            return PrimeSumMode.PAPER_PROGRESSION
        return PrimeSumMode(self.mode)

    def kolmogorov_params(self) -> Optional[KolmogorovParams]:
        if self.params is None:
            return None
        try:
            return parse_params(self.params)
        except ValueError as e:
            raise ConfigError(str(e), field="params") from e

    def custom(self) -> Optional[AdditiveFunction]:
        """The custom rule function; a rule that does not parse is a config error."""
        if self.rule is None:
            return None
        try:
            return custom_function(self.fn, self.kind, self.rule)
        except ParameterError as e:
            raise ConfigError(e.message, field=e.field or "rule") from e

    def identity(self) -> Dict[str, Any]:
        """Config values that determine the results."""
        return self.model_dump(mode="json", exclude=RUNTIME_KEYS)


def validation_message(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        loc = ".".join(str(x) for x in item["loc"])
        parts.append(f"{loc}: {item['msg']}" if loc else item["msg"])
    return "; ".join(parts)


def validation_field(error: ValidationError) -> Optional[str]:
    for item in error.errors():
        if item["loc"]:
            return ".".join(str(x) for x in item["loc"])
    return None


def load_config_file(path: Path) -> Dict[str, Any]:
    """Flat YAML mapping of config keys to scalar values."""
    if not path.exists():
        raise ConfigError(f"config file not found: {path}", field="config")
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse {path}: {e}", field="config") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must hold a mapping of key: value lines", field="config")
    for key, value in data.items():
        if isinstance(value, (dict, list)):
            raise ConfigError(f"config key {key!r} must be a scalar, nested values are not supported", field=str(key))
    return {str(key).replace("-", "_"): value for key, value in data.items()}


def load_experiment_config(config_path: Optional[Path], overrides: Dict[str, Any]) -> ExperimentConfig:
    """File values first, then every flag that was actually given."""
    values = load_config_file(config_path) if config_path else {}
    values.update({key: value for key, value in overrides.items() if value is not None})
    return ExperimentConfig(**values)


def resolve_function(config: ExperimentConfig, primes: PrimeSet) -> AdditiveFunction:
    custom = config.custom()
    if custom is not None:
        return custom
    if config.fn == KOLMOGOROV_EXAMPLE:
        params = config.kolmogorov_params()
        assert params is not None
        spec = config.progression()
        class_primes = primes_in_progression(
            PrimeSet(bound=spec.n, primes=primes.up_to(spec.n)), spec.k, spec.l
        )
        assignment = build_prime_classes(class_primes, params, spec.k)
        return kolmogorov_example_function(params, assignment)
    return builtin(config.fn)
