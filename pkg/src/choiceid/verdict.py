from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class Klass(str, enum.Enum):
    """Identifiability class of a parameter.

    ``GENERIC`` means generically identifiable without a global
    certificate; whether global identifiability was refuted or simply not
    assessed is recorded in the verdict's ``provenance``.
    """

    GLOBAL = "global"
    GENERIC = "generic"
    STRUCTURAL = "structural"
    INCONCLUSIVE = "inconclusive"

    @property
    def identifiable(self) -> bool:
        return self in (Klass.GLOBAL, Klass.GENERIC)


@dataclass(frozen=True)
class Verdict:
    """An identifiability verdict with the evidence that produced it.

    ``witnesses`` holds index-based payloads (type and alternative indices,
    row subsets as sorted tuples, rationals as Fractions). Every payload
    can be re-checked against the input with :func:`choiceid.certify.check`.
    """

    klass: Klass
    provenance: str
    witnesses: dict[str, Any] = field(default_factory=dict)
    probabilistic: bool = False
    notes: tuple[str, ...] = ()

    @property
    def identifiable(self) -> bool:
        return self.klass.identifiable
