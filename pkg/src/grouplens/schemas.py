"""
Pydantic documents for groups, functions and command reports.
"""
from typing import Annotated, Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter


class CayleyDocument(BaseModel):
    """A group given by its full multiplication table."""

    kind: Literal["cayley"] = "cayley"
    order: int = Field(ge=1)
    table: list[list[int]]
    labels: Optional[list[str]] = None
    name: Optional[str] = None


class PermutationDocument(BaseModel):
    """A group generated by 0-based one-line permutations."""

    kind: Literal["perm"] = "perm"
    degree: int = Field(ge=1)
    generators: list[list[int]]
    name: Optional[str] = None


class SpecDocument(BaseModel):
    kind: Literal["spec"] = "spec"
    expr: str


GroupDocument = Annotated[
    Union[CayleyDocument, PermutationDocument, SpecDocument],
    Field(discriminator="kind"),
]
group_document_adapter: TypeAdapter[GroupDocument] = TypeAdapter(GroupDocument)


class FunctionDocument(BaseModel):
    """
    A function between two groups. `homomorphism`, when present, is a claim
    that gets verified on load.
    """

    domain: GroupDocument
    codomain: GroupDocument
    values: list[int]
    homomorphism: Optional[bool] = None


class Check(BaseModel):
    name: str
    passed: bool
    witness: Optional[dict[str, Any]] = None


class Report(BaseModel):
    model_config = ConfigDict(extra="forbid")

    command: str
    version: str
    inputs: dict[str, Any]
    result: dict[str, Any]
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> list[Check]:
        return [check for check in self.checks if not check.passed]


# Result payloads


class OrbitCensus(BaseModel):
    domain: str
    codomain: str
    census_mode: Literal["full", "fixed-points-only"]
    functions: Optional[int] = None
    histogram: dict[int, int] = Field(default_factory=dict)
    fixed_points: int
    homomorphisms: Optional[int] = None


class CauchyResult(BaseModel):
    group: str
    prime: int
    element: int
    element_label: str
    element_order: int
    census: OrbitCensus


class SylowIteration(BaseModel):
    subgroup_order: int
    normalizer_order: int
    quotient_order: int
    pulled_back: int


class SylowResult(BaseModel):
    group: str
    prime: int
    order: int
    p_part: int
    members: list[int]
    generators: list[int]
    iterations: list[SylowIteration]


class TransferReport(BaseModel):
    group: str
    subgroup_order: int
    index: int
    multiplicity_m: int
    transfer_values: list[int]
    is_trivial: bool


class LiftStepReport(BaseModel):
    kernel_order: int
    index: int
    m: int


class LiftReport(BaseModel):
    group: str
    extension: str
    kernel_order: int
    steps: list[LiftStepReport]
    lift_values: list[int]
    lift_labels: list[str]
    conjugator: Optional[int] = None
    conjugacy_class_size_of_image: int


class DistributorCensus(BaseModel):
    domain: str
    codomain: str
    distinct_values: list[int]
    subgroup_members: list[int]
    subgroup_order: int
    image_order: int
    quotient_order: int
    homomorphism: bool


class GroupDescription(BaseModel):
    name: str
    order: int
    abelian: bool
    soluble: bool
    labels: list[str]
    element_orders: list[int]
    order_statistics: dict[int, int]
    generators: list[int]
