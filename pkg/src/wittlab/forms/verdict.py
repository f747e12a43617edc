"""Three-valued outcomes of decision procedures."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction


class Status(str, Enum):
    PROVED = "Proved"
    REFUTED = "Refuted"
    REDUCED = "Reduced"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Obligation:
    """A residual statement, optionally backed by an external citation.

    ``status`` is "open" (nothing known), "assumed" (matched a declared
    assumption), "discharged" (decided by exact computation; see ``holds``).
    """

    statement: str
    citation: str = ""
    status: str = "open"
    holds: bool | None = None
    context: str = ""

    def to_json(self) -> dict:
        out = {"statement": self.statement, "citation": self.citation, "status": self.status}
        if self.holds is not None:
            out["holds"] = self.holds
        if self.context:
            out["context"] = self.context
        return out


def jsonable(x):
    """Recursively convert certificate payloads to JSON-compatible values."""
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return str(x)


@dataclass(frozen=True)
class Verdict:
    status: Status
    certificate: dict = field(default_factory=dict)
    obligations: tuple[Obligation, ...] = ()

    @classmethod
    def proved(cls, **certificate) -> "Verdict":
        return cls(Status.PROVED, certificate)

    @classmethod
    def refuted(cls, **certificate) -> "Verdict":
        return cls(Status.REFUTED, certificate)

    @classmethod
    def reduced(cls, obligations, **certificate) -> "Verdict":
        return cls(Status.REDUCED, certificate, tuple(obligations))

    @property
    def is_proved(self) -> bool:
        return self.status is Status.PROVED

    @property
    def is_refuted(self) -> bool:
        return self.status is Status.REFUTED

    @property
    def is_reduced(self) -> bool:
        return self.status is Status.REDUCED

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "certificate": jsonable(self.certificate),
            "obligations": [o.to_json() for o in self.obligations],
        }

    def __str__(self) -> str:
        return self.status.value
