"""Contains the schemas of the potential file, the reports and the run
manifest."""

from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, model_validator

from .algebra import (MAX_VARIABLES, HomogeneousPotential, Polynomial,
                      RadialPotential)
from .settings import RunConfig


class MonomialEntry(BaseModel):
    """One term ``c * q^e`` of a potential file."""

    c: Tuple[float, float] = Field(
        ..., description="Coefficient as [real part, imaginary part]."
    )
    e: List[int] = Field(..., description="Exponent of each variable.")

    @model_validator(mode="after")
    def _non_negative(self):
        for index, power in enumerate(self.e):
            if power < 0:
                raise ValueError(f"e.{index}: exponent {power} is negative")
        return self


class PotentialFile(BaseModel):
    """A potential as stored on disk.

    ``kind`` defaults to a homogeneous polynomial of degree ``k``;
    ``polynomial`` drops the homogeneity check (Henon-Heiles) and
    ``radial`` describes ``coefficient * |q|^k``.
    """

    n: int = Field(..., ge=1, le=MAX_VARIABLES, description="Variables.")
    k: Optional[int] = Field(None, description="Degree of homogeneity.")
    kind: Literal["homogeneous", "polynomial", "radial"] = Field(
        "homogeneous", description="How the potential is interpreted."
    )
    monomials: List[MonomialEntry] = Field(
        default_factory=list, description="Terms of a polynomial potential."
    )
    coefficient: Optional[float] = Field(
        None, description="Coefficient of a radial potential."
    )

    @model_validator(mode="after")
    def _consistent(self):
        if self.kind == "radial":
            if self.k is None or self.k == 0 or not self.coefficient:
                raise ValueError(
                    "radial potentials need a non-zero k and coefficient"
                )
            return self
        if not self.monomials:
            raise ValueError("monomials: potential has no terms")
        if self.kind == "homogeneous" and (self.k is None or self.k == 0):
            raise ValueError("k: homogeneous potentials need a non-zero k")
        seen = set()
        for index, entry in enumerate(self.monomials):
            if tuple(entry.e) in seen:
                raise ValueError(
                    f"monomials.{index}.e: exponent vector {entry.e} "
                    "appears twice"
                )
            seen.add(tuple(entry.e))
            if len(entry.e) != self.n:
                raise ValueError(
                    f"monomials.{index}.e: has {len(entry.e)} exponents, "
                    f"expected n={self.n}"
                )
            if self.kind == "homogeneous" and sum(entry.e) != self.k:
                raise ValueError(
                    f"monomials.{index}.e: exponents sum to {sum(entry.e)}, "
                    f"expected k={self.k}"
                )
        return self

    def to_potential(
        self,
    ) -> Union[HomogeneousPotential, Polynomial, RadialPotential]:
        if self.kind == "radial":
            return RadialPotential(self.coefficient, self.k, self.n)
        terms = {tuple(m.e): complex(*m.c) for m in self.monomials}
        if self.kind == "homogeneous":
            return HomogeneousPotential.from_terms(self.n, terms, k=self.k)
        return Polynomial.from_terms(self.n, terms)

    @classmethod
    def from_potential(
        cls, V: Union[HomogeneousPotential, Polynomial, RadialPotential]
    ) -> "PotentialFile":
        if isinstance(V, RadialPotential):
            return cls(
                n=V.n, k=V.k, kind="radial", coefficient=V.coefficient
            )
        monomials = [
            MonomialEntry(
                c=(m.coefficient.real, m.coefficient.imag),
                e=list(m.exponents),
            )
            for m in V.monomials
        ]
        if isinstance(V, HomogeneousPotential):
            return cls(n=V.n, k=V.k, monomials=monomials)
        return cls(n=V.n, kind="polynomial", monomials=monomials)


class FamilyHitReport(BaseModel):
    """A row of an eigenvalue table matched by an eigenvalue."""

    table: str
    row_id: str
    parameter_p: Optional[int]


class EigenvalueReport(BaseModel):
    """A non-trivial eigenvalue next to its exact reconstruction."""

    value: Tuple[float, float] = Field(
        ..., description="Floating eigenvalue as [re, im]."
    )
    rational: Optional[str] = Field(
        None, description="Exact reconstruction 'p/q', if any."
    )
    integer: Optional[int] = None
    passes: bool
    passes_classical: bool
    reason: str
    memberships: List[str] = Field(default_factory=list)
    hits: Optional[List[FamilyHitReport]] = Field(
        None, description="Per-table diagnostics, with --explain only."
    )
    kimura_case: Optional[str] = None


class SpectrumBlock(BaseModel):
    """Eigenvalues of the scaled Hessian at one Darboux point."""

    trivial: Tuple[float, float] = Field(
        ..., description="The eigenvalue k - 1 along d, as [re, im]."
    )
    nontrivial: List[Tuple[float, float]] = Field(
        ..., description="The remaining eigenvalues, as [re, im]."
    )
    rational: List[Optional[str]] = Field(
        ...,
        description="'p/q' for each non-trivial eigenvalue, null if none.",
    )


class DarbouxPointReport(BaseModel):
    """One element of the ``check`` JSON array.

    ``d``, ``gamma``, ``residual`` and ``eigenvalues`` form the documented
    interface; the remaining keys are extra annotations.
    """

    d: List[Tuple[float, float]]
    gamma: Tuple[float, float]
    residual: float
    eigenvalues: SpectrumBlock
    normalization: str
    multiplicity: int
    continuum: bool
    checks: List[EigenvalueReport] = Field(
        default_factory=list,
        description="Verdict of each non-trivial eigenvalue.",
    )


class CheckReport(BaseModel):
    """Outcome of the ``check`` pipeline.

    The JSON output of ``check`` is the ``points`` array; the verdict
    fields drive the exit code and the text format.
    """

    potential: PotentialFile
    k: int
    points: List[DarbouxPointReport]
    verdict: str
    classical_verdict: str
    explanation: str
    inconsistent: bool = Field(
        False,
        description="Relativistic pass together with a classical failure.",
    )
    partial_table: bool = False
    universal_relation: Optional[Tuple[float, float]] = None


class JSetReport(BaseModel):
    """Least elements of J+ u J- by absolute value."""

    k: int
    count: int
    method: Literal["conic", "pell"]
    values: List[int]


class JScanReport(BaseModel):
    """Integer values of f(k, p, +-1) over ``|p| <= p_bound``."""

    k: int
    p_bound: int
    parameter_count: int
    hit_count: int
    parameters: List[int]


class RunManifest(BaseModel):
    """Everything needed to repeat a run."""

    tool_version: str
    command: str
    config: RunConfig
    versions: Dict[str, str] = Field(
        ..., description="Versions of the numerical dependencies."
    )
    outputs: List[str]


class OrbitSummary(BaseModel):
    """Outcome of one orbit of a section run."""

    orbit_id: int
    status: str
    crossings: int
    energy_drift: float
    casimir_drift: float
    message: str = ""


class PoincareReport(BaseModel):
    """Per-orbit summary of a section run."""

    kinetic: str
    energy: float
    t_end: float
    orbits: List[OrbitSummary]
