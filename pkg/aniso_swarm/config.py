"""Run configuration: flat ``section.key = value`` files parsed into pydantic-settings.

Example::

    fs.family = exp_shifted
    fs.c = 0.1
    fs.e_s = 100
    fs.cutoff_mode = shift_then_blend
    pair.r_cutoff = 0.5
    sim.integrator = dormand_prince

Composite coefficients list their members as ``fs.members.<i>.weight``,
``fs.members.<i>.family`` and ``fs.members.<i>.<param>``. Environment
variables prefixed with ``ANISO_SWARM_`` (for instance
``ANISO_SWARM_OUTPUT_DIR``) take precedence over file and CLI values.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from aniso_swarm.coeffs.dispatcher import FAMILIES, dispatch_family
from aniso_swarm.coeffs.models import CoefficientSpec, Composite, CutoffMode, Family, KuckenAttraction
from aniso_swarm.dynamics.models import DormandPrince, Euler, NeighborMethod, SimConfig
from aniso_swarm.errors import ConfigError
from aniso_swarm.field import ForcePair, TensorField
from aniso_swarm.linestab.ansatz import LineAnsatz
from aniso_swarm.linestab.quadrature import QuadratureSpec
from aniso_swarm.linestab.spectrum import SpectrumSource
from aniso_swarm.log import logger


def _nest_family(data: dict[str, Any]) -> dict[str, Any]:
    family = dict(data)
    members = family.get("members")
    if isinstance(members, list):
        family["members"] = [_nest_member(member) for member in members]
    return family


def _nest_member(member: Any) -> Any:
    if not isinstance(member, dict) or isinstance(member.get("family"), dict):
        return member
    member = dict(member)
    nested: dict[str, Any] = {}
    if "weight" in member:
        nested["weight"] = member.pop("weight")
    nested["family"] = _nest_family(member)
    return nested


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", validate_assignment=True)


class CoefficientSection(_Section):
    family: Family
    cutoff_mode: CutoffMode = CutoffMode.BLEND_TO_ZERO

    @model_validator(mode="before")
    @classmethod
    def nest_family_keys(cls, data: Any) -> Any:
        """Collect flat family parameters (``fs.c``, ``fs.e_s``) under ``family``."""
        if not isinstance(data, dict) or isinstance(data.get("family"), (dict, BaseModel)):
            return data
        data = dict(data)
        nested: dict[str, Any] = {}
        if "cutoff_mode" in data:
            nested["cutoff_mode"] = data.pop("cutoff_mode")
        nested["family"] = _nest_family(data)
        return nested


class PairSection(_Section):
    r_cutoff: float = Field(default=0.5, gt=0)
    epsilon: float = Field(default=0.0, ge=0)
    domain_size: float = Field(default=1.0, gt=0)


class FieldSection(_Section):
    chi: float | None = Field(default=None, ge=0, le=1)
    theta: float = 0.0


class SimSection(_Section):
    integrator: Literal["euler", "dormand_prince"] = "euler"
    dt: float | None = Field(default=None, gt=0)
    abs_tol: float = Field(default=1e-9, gt=0)
    rel_tol: float = Field(default=1e-6, gt=0)
    dt_init: float = Field(default=1e-4, gt=0)
    dt_max: float = Field(default=10.0, gt=0)
    t_max: float = Field(default=100.0, gt=0)
    stationary_tol: float = Field(default=1e-8, ge=0)
    snapshot_every: float | None = Field(default=None, gt=0)
    neighbors: NeighborMethod = NeighborMethod.CELL_LIST


class InitSection(_Section):
    kind: Literal["circle", "line"] = "circle"
    n: int = Field(default=600, ge=2)
    center_x: float = 0.5
    center_y: float = 0.5
    radius: float = Field(default=0.005, gt=0)
    tiles: int = Field(default=1, ge=1)
    jitter: float = Field(default=0.0, ge=0)


class LineSection(_Section):
    theta: float = math.pi / 2
    n: int = Field(default=100, ge=2)


class SpectrumSection(_Section):
    source: SpectrumSource = SpectrumSource.CONTINUUM
    line: Literal["vertical", "horizontal"] = "vertical"
    n: int | None = Field(default=None, ge=2)
    m_min: int = Field(default=1, ge=1)
    m_max: int | None = Field(default=None, ge=1)
    nodes_per_panel: int = Field(default=16, ge=2)


class ScanSection(_Section):
    b: float = Field(default=0.1, gt=0)
    r_cutoffs: list[float] = Field(default_factory=lambda: [0.1, 0.2, 0.3, 0.4, 0.5], min_length=1)
    epsilon: float = Field(default=0.0, ge=0)
    m_max: int = Field(default=10_000, ge=1)

    @field_validator("r_cutoffs", mode="before")
    @classmethod
    def split_commas(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [part.strip() for part in value.split(",") if part.strip()]
        return value


class ForcesSection(_Section):
    r_min: float = Field(default=0.0, ge=0)
    r_max: float = Field(default=0.5, gt=0)
    points: int = Field(default=501, ge=2)


class RotatedSection(_Section):
    max_n: int = Field(default=5, ge=1)


class RunConfig(BaseSettings):
    fs: CoefficientSection | None = None
    fl: CoefficientSection | None = None
    pair: PairSection = PairSection()
    field: FieldSection = FieldSection()
    sim: SimSection = SimSection()
    init: InitSection = InitSection()
    line: LineSection = LineSection()
    spectrum: SpectrumSection = SpectrumSection()
    scan: ScanSection = ScanSection()
    forces: ForcesSection = ForcesSection()
    rotated: RotatedSection = RotatedSection()
    seed: int = 0
    output_dir: Path = Path("output")

    model_config = SettingsConfigDict(
        env_prefix="ANISO_SWARM_", extra="ignore", validate_assignment=True, revalidate_instances="always"
    )

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (env_settings, init_settings)

    def coefficient(self, name: Literal["fs", "fl"]) -> CoefficientSpec:
        section = getattr(self, name)
        if section is None:
            raise ConfigError("missing required key", key=f"{name}.family")
        return CoefficientSpec(
            family=section.family,
            r_cutoff=self.pair.r_cutoff,
            epsilon=self.pair.epsilon,
            cutoff_mode=section.cutoff_mode,
        )

    def force_pair(self) -> ForcePair:
        return ForcePair(f_s=self.coefficient("fs"), f_l=self.coefficient("fl"), domain_size=self.pair.domain_size)

    def attraction_weight(self) -> float | None:
        """Weight of the ``kucken_attraction`` member of a composite ``fs``, if it has one."""
        family = self.fs.family if self.fs is not None else None
        if not isinstance(family, Composite):
            return None
        for member in family.members:
            if isinstance(member.family, KuckenAttraction):
                return member.weight
        return None

    def chi_conflict(self) -> str | None:
        """Why ``field.chi`` disagrees with ``fs``, or ``None`` when it is unset or consistent."""
        chi = self.field.chi
        if chi is None:
            return None
        weight = self.attraction_weight()
        if weight is None:
            return "chi only applies to a composite fs with a kucken_attraction member"
        if chi != weight:
            return f"chi = {chi!r} disagrees with the kucken_attraction weight {weight!r} of fs"
        return None

    def tensor_field(self) -> TensorField:
        """The rotated canonical field; chi is the attraction weight of ``fs`` when it lies in [0, 1]."""
        conflict = self.chi_conflict()
        if conflict is not None:
            raise ConfigError(conflict, key="field.chi")
        weight = self.attraction_weight()
        chi = weight if weight is not None and 0 <= weight <= 1 else 1.0
        return TensorField.from_angle(self.field.theta, chi)

    def sim_config(self) -> SimConfig:
        sim = self.sim
        if sim.integrator == "euler":
            integrator = Euler(dt=sim.dt)
        else:
            integrator = DormandPrince(
                abs_tol=sim.abs_tol, rel_tol=sim.rel_tol, dt_init=sim.dt_init, dt_max=sim.dt_max
            )
        return SimConfig(
            pair=self.force_pair(),
            field=self.tensor_field(),
            integrator=integrator,
            t_max=sim.t_max,
            stationary_tol=sim.stationary_tol,
            snapshot_every=sim.snapshot_every,
            neighbors=sim.neighbors,
        )

    def line_ansatz(self) -> LineAnsatz:
        return LineAnsatz(n=self.line.n, theta=self.line.theta, domain_size=self.pair.domain_size)

    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(nodes_per_panel=self.spectrum.nodes_per_panel)


def _read_entries(text: str) -> dict[str, tuple[str, int]]:
    entries: dict[str, tuple[str, int]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigError(f"expected `key = value`, got {content!r}", line=number)
        key, value = (part.strip() for part in content.split("=", 1))
        if not key:
            raise ConfigError("empty key", line=number)
        if key in entries:
            logger.warning(f"Key `{key}` set on line {entries[key][1]} and again on line {number}, the last one wins")
        entries[key] = (value, number)
    return entries


def _listify(node: Any, key: str) -> Any:
    if not isinstance(node, dict):
        return node
    children = {name: _listify(child, f"{key}.{name}" if key else name) for name, child in node.items()}
    if children and all(name.isdigit() for name in children):
        indices = sorted(int(name) for name in children)
        if indices != list(range(len(indices))):
            raise ConfigError(f"list indices must run 0..{len(indices) - 1}, got {indices}", key=key)
        return [children[str(index)] for index in indices]
    return children


def _nest(entries: dict[str, tuple[str, int]]) -> dict[str, Any]:
    data: dict[str, Any] = {}
    for key, (value, number) in entries.items():
        segments = key.split(".")
        if any(not segment for segment in segments):
            raise ConfigError("malformed key", key=key, line=number)
        if segments[0] not in RunConfig.model_fields:
            raise ConfigError("unknown key", key=key, line=number)
        if segments[-1] == "family":
            try:
                dispatch_family(value)
            except ValueError as e:
                raise ConfigError(str(e), key=key, line=number) from None
        node = data
        for depth, segment in enumerate(segments[:-1]):
            child = node.setdefault(segment, {})
            if not isinstance(child, dict):
                section = ".".join(segments[: depth + 1])
                raise ConfigError(f"`{section}` is a value, not a section", key=key, line=number)
            node = child
        if isinstance(node.get(segments[-1]), dict):
            raise ConfigError("is a section, not a value", key=key, line=number)
        node[segments[-1]] = value
    return _listify(data, "")


def _dotted(loc: Sequence[int | str]) -> str:
    """Config key of a validation error location, without discriminator tags."""
    parts: list[str] = []
    i = 0
    while i < len(loc):
        if loc[i] == "family" and i + 1 < len(loc) and loc[i + 1] in FAMILIES:
            i += 2
            continue
        parts.append(str(loc[i]))
        i += 1
    return ".".join(parts)


def _line_of(key: str, entries: dict[str, tuple[str, int]]) -> int | None:
    if key in entries:
        return entries[key][1]
    for candidate, (_, number) in entries.items():
        if candidate.startswith(f"{key}."):
            return number
    return None


def parse_config(text: str) -> RunConfig:
    """Build a ``RunConfig`` from flat ``key = value`` text.

    ``#`` starts a comment, duplicate keys keep the last value with a
    warning, and every failure is a ``ConfigError`` naming key and line.
    """
    entries = _read_entries(text)
    data = _nest(entries)
    try:
        config = RunConfig(**data)
    except ValidationError as e:
        error = e.errors()[0]
        key = _dotted(error["loc"])
        message = "missing required key" if error["type"] == "missing" else error["msg"]
        raise ConfigError(message, key=key, line=_line_of(key, entries)) from e
    conflict = config.chi_conflict()
    if conflict is not None:
        raise ConfigError(conflict, key="field.chi", line=_line_of("field.chi", entries))
    return config


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list) and all(not isinstance(item, (dict, list)) for item in value):
        return ",".join(_format(item) for item in value)
    return str(value)


def _flatten_family(prefix: str, family: dict[str, Any]) -> list[tuple[str, Any]]:
    lines = [(f"{prefix}.family", family["family"])]
    for name, value in family.items():
        if name == "family":
            continue
        if name == "members":
            for index, member in enumerate(value):
                lines.append((f"{prefix}.members.{index}.weight", member["weight"]))
                lines.extend(_flatten_family(f"{prefix}.members.{index}", member["family"]))
            continue
        lines.append((f"{prefix}.{name}", value))
    return lines


def emit_config(config: RunConfig) -> str:
    """Flat text that ``parse_config`` turns back into an equal ``RunConfig``."""
    dumped = config.model_dump(mode="json")
    lines: list[tuple[str, Any]] = []
    for name, section in dumped.items():
        if section is None:
            continue
        if name in ("fs", "fl"):
            lines.extend(_flatten_family(name, section["family"]))
            lines.append((f"{name}.cutoff_mode", section["cutoff_mode"]))
        elif isinstance(section, dict):
            lines.extend((f"{name}.{key}", value) for key, value in section.items() if value is not None)
        else:
            lines.append((name, section))
    return "".join(f"{key} = {_format(value)}\n" for key, value in lines)


def load_config(path: Path | None = None, overrides: Sequence[str] = ()) -> RunConfig:
    """Read a config file (or start from defaults) and apply ``--key=value`` overrides after it."""
    text = ""
    if path is not None:
        if not path.is_file():
            raise ConfigError(f"config file {path} does not exist")
        text = path.read_text(encoding="utf-8")
        logger.info(f"Loading config from {path}")
    extra = []
    for override in overrides:
        stripped = override.removeprefix("--")
        if "=" not in stripped:
            raise ConfigError(f"override {override!r} must look like --key=value")
        extra.append(stripped)
    if extra:
        text = text + ("\n" if text and not text.endswith("\n") else "") + "\n".join(extra) + "\n"
    return parse_config(text)
