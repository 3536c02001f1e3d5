"""
Report data model.
Represents a single CLI command execution and everything needed to audit it.

Every emitted decomposition carries its residuals. Reports are the ONLY thing
written to standard output.
"""

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any
import json


REPORT_VERSION = "0.1.0"


class ReportStatus(Enum):
    """Outcome of a command."""
    COMPLETED = "completed"
    REJECTED = "rejected"  # a mathematical hypothesis does not hold
    FAILED = "failed"  # I/O, parse or numerical failure

    @property
    def exit_code(self) -> int:
        return {
            ReportStatus.COMPLETED: 0,
            ReportStatus.REJECTED: 2,
            ReportStatus.FAILED: 1,
        }[self]


@dataclass
class Report:
    """
    A single command execution.

    Defined by:
    - Command (williamson, simdiag, partition, ...)
    - Inputs (file names, shapes, scalar parameters)
    - Result payload and named residuals
    - Warnings raised while computing, and the tolerances in force
    """
    command: str = ""
    status: ReportStatus = ReportStatus.COMPLETED
    inputs: dict[str, Any] = field(default_factory=dict)
    result: dict[str, Any] = field(default_factory=dict)
    residuals: dict[str, float] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    tolerances: dict[str, float] = field(default_factory=dict)
    error: dict[str, Any] | None = None
    executed_at: str = ""
    version: str = REPORT_VERSION

    def __post_init__(self):
        if not self.executed_at:
            self.executed_at = datetime.now().isoformat()

    @property
    def exit_code(self) -> int:
        return self.status.exit_code

    @property
    def display_name(self) -> str:
        """Short human-readable label, e.g. 'simdiag - completed'."""
        name = self.command or "unknown"
        if self.error:
            return f"{name} - {self.status.value}: {self.error.get('violated_hypothesis') or self.error.get('type')}"
        return f"{name} - {self.status.value}"

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "command": self.command,
            "status": self.status.value,
            "inputs": self.inputs,
            "result": self.result,
            "residuals": self.residuals,
            "warnings": self.warnings,
            "tolerances": self.tolerances,
            "error": self.error,
            "executed_at": self.executed_at,
            "version": self.version,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        """Create from dictionary."""
        return cls(
            command=data.get("command", ""),
            status=ReportStatus(data.get("status", "completed")),
            inputs=data.get("inputs", {}),
            result=data.get("result", {}),
            residuals=data.get("residuals", {}),
            warnings=data.get("warnings", []),
            tolerances=data.get("tolerances", {}),
            error=data.get("error"),
            executed_at=data.get("executed_at", ""),
            version=data.get("version", REPORT_VERSION),
        )
