"""
Report model shared by every CLI command.
"""
import json
from dataclasses import asdict, dataclass, field

import pandas as pd

CSV_COLUMNS = {
    "validate": ["check", "value", "status"],
    "pressure": ["t", "P", "epsilon", "iterations", "residual"],
    "eigen": ["t", "pattern", "log_h", "h", "residual"],
    "gibbs": ["t", "word", "measure", "log_measure"],
    "zero-temp": ["pattern", "V"],
    "select": ["quantity", "value"],
    "rates": ["label", "t", "log_value", "per_point_rate", "slope", "r_squared"],
    "oracle": ["t", "k", "log_lambda", "pressure", "gap", "word", "oracle_measure", "gibbs_measure", "measure_gap"],
    "example1": ["check", "expected", "observed", "status"],
    "runs": ["id", "command", "potential", "config_digest", "exit_code", "created_at"],
}


@dataclass
class CommandReport:
    """
    Attributes:
        command: CLI command that produced the report
        potential: Spec name or path
        notes: Interpretation notes and warnings worth keeping with the numbers
        summary: Scalar results
        rows: Table rows, keyed by the command's CSV columns
    """

    command: str
    potential: str
    notes: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "CommandReport":
        data = json.loads(text)
        return cls(
            command=data["command"],
            potential=data["potential"],
            notes=list(data.get("notes", [])),
            summary=dict(data.get("summary", {})),
            rows=list(data.get("rows", [])),
        )

    def to_csv(self) -> str:
        columns = CSV_COLUMNS[self.command]
        return pd.DataFrame(self.rows, columns=columns).to_csv(index=False)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json() + "\n"
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown report format {fmt!r}")
