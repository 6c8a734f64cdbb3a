"""JSON shapes of the command-line surface: matroid descriptions in, reports out."""
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator

from app.services.decomposition import TorsoKind
from app.services.matroid_kernel import Matroid, ValidationLevel, dual, from_circuits, graphic, linear_gf2, uniform

RESERVED_PREFIX = "@"


def _check_labels(labels: list[str] | None) -> list[str] | None:
    for label in labels or ():
        if label.startswith(RESERVED_PREFIX):
            raise ValueError(f"label {label!r} uses the reserved prefix {RESERVED_PREFIX!r}")
    return labels


class UniformSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["uniform"]
    r: int
    n: int

    def build(self, validate: ValidationLevel) -> Matroid:
        return uniform(self.r, self.n)


class GraphicSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["graphic"]
    vertices: list[str | int]
    edges: list[tuple[str | int, str | int]]
    labels: list[str] | None = None

    @field_validator("labels")
    @classmethod
    def reserved_labels(cls, labels: list[str] | None) -> list[str] | None:
        return _check_labels(labels)

    def build(self, validate: ValidationLevel) -> Matroid:
        return graphic(self.vertices, self.edges, self.labels)


class Gf2Spec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["gf2"]
    columns: list[list[int]]
    labels: list[str] | None = None

    @field_validator("labels")
    @classmethod
    def reserved_labels(cls, labels: list[str] | None) -> list[str] | None:
        return _check_labels(labels)

    def build(self, validate: ValidationLevel) -> Matroid:
        return linear_gf2(self.columns, self.labels)


class CircuitsSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["circuits"]
    ground: list[str]
    circuits: list[list[str]]

    @field_validator("ground")
    @classmethod
    def reserved_labels(cls, ground: list[str]) -> list[str]:
        return _check_labels(ground)

    def build(self, validate: ValidationLevel) -> Matroid:
        return from_circuits(self.ground, self.circuits, validate)


class DualSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dual: "MatroidSpec"

    def build(self, validate: ValidationLevel) -> Matroid:
        return dual(self.dual.build(validate))


MatroidSpec = Union[
    Annotated[Union[UniformSpec, GraphicSpec, Gf2Spec, CircuitsSpec], Field(discriminator="kind")],
    DualSpec,
]
DualSpec.model_rebuild()

spec_adapter = TypeAdapter(MatroidSpec)


class InfoReport(BaseModel):
    elements: int
    rank: int
    circuits: int
    connected: bool
    three_connected: bool


class SeparationOut(BaseModel):
    side_a: list[str]
    side_b: list[str]
    order: int
    good: bool


class TorsoOut(BaseModel):
    ground: list[str]
    circuits: list[list[str]]
    kind: TorsoKind


class NodeOut(BaseModel):
    id: str
    key: list[str]
    part: list[str]
    torso: TorsoOut


class EdgeOut(BaseModel):
    a: str
    b: str
    label: str
    separation: list[str]


class DecompositionReport(BaseModel):
    nodes: list[NodeOut]
    edges: list[EdgeOut]
    adhesion: int
    irredundant: bool
