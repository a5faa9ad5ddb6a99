from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from .errors import CHECK_FAILURES, CheckFailure


# Seed file schemas
class SeedFile(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    m: int = Field(gt=0)
    n_ex: int = Field(gt=0)
    lambda_: List[List[int]] = Field(alias="lambda")
    b_tilde: List[List[int]]
    names: Optional[List[str]] = None
    # Optional default grading vector for `grading` and graded checks
    grading: Optional[List[int]] = None
    description: Optional[str] = None


# Report schemas
class VerificationReport(BaseModel):
    check_name: str
    status: Literal["pass", "fail"]
    cases_run: int
    witnesses: List[Dict[str, Any]] = []
    # Wall-clock time, only when timing is enabled
    millis: Optional[int] = None
    details: Dict[str, Any] = {}

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def raise_for_status(self) -> "VerificationReport":
        if self.status == "fail":
            error = CHECK_FAILURES.get(self.check_name, CheckFailure)
            raise error(
                f"{self.check_name} failed on {len(self.witnesses)} of {self.cases_run} cases",
                self.witnesses,
            )
        return self

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)


# CLI output schemas
class ValidateResponse(BaseModel):
    m: int
    n_ex: int
    d: List[int]
    description: Optional[str] = None


class VariableEntry(BaseModel):
    index: int
    label: str
    value: str


class MutateResponse(BaseModel):
    path: str
    picture: Literal["quantum", "classical"]
    variables: List[VariableEntry]
    b_tilde: List[List[int]]


class SpecializeResponse(BaseModel):
    path: str
    variables: List[VariableEntry]
    matches_classical: bool


class GradingResponse(BaseModel):
    basis: List[List[int]]
    rank: int
    grading: Optional[List[int]] = None
    grading_in_lattice: Optional[bool] = None


class GraphResponse(BaseModel):
    picture: Literal["quantum", "classical"]
    max_depth: int
    clusters: int
    variables: int
    complete: bool
