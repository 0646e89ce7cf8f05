"""Solve results shared by the solvers, the oracles and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

from .costs import Cost, format_cost
from .formats import SOLUTION_FORMAT


@dataclass(frozen=True)
class SolveResult:
    """An optimal assignment with its exact cost and provenance notes.

    ``assignment`` and ``cost`` are None only for an explicit "not solved"
    outcome (dispatch fell through every route); ``certificate`` carries
    solver-specific audit data such as the matching used.
    """

    assignment: Optional[Tuple[int, ...]]
    cost: Optional[Cost]
    solver: str
    certificate: dict = field(default_factory=dict)
    verdicts: Tuple[dict, ...] = ()

    @property
    def solved(self) -> bool:
        return self.assignment is not None

    def to_doc(self) -> dict:
        doc = {
            "format": SOLUTION_FORMAT,
            "assignment": list(self.assignment) if self.assignment is not None else None,
            "cost": format_cost(self.cost) if self.cost is not None else None,
            "solver": self.solver,
        }
        if not self.solved:
            doc["status"] = "unsolved"
        if self.verdicts:
            doc["verdicts"] = list(self.verdicts)
        doc["certificate"] = self.certificate
        return doc
