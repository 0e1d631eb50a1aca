"""Path helpers for deterministic artifact layout."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


@dataclass
class OutputPaths:
    """Normalized output paths derived from the ``output`` config section."""

    root: Path

    @classmethod
    def from_config(cls, cfg: dict) -> "OutputPaths":
        root = Path(cfg.get("output", {}).get("root", "output"))
        return cls(root=root)

    @property
    def reports_dir(self) -> Path:
        return self.root / "reports"

    @property
    def traces_dir(self) -> Path:
        return self.root / "traces"

    @property
    def tables_dir(self) -> Path:
        return self.root / "tables"

    @property
    def logs_dir(self) -> Path:
        return self.root / "logs"

    def report_path(self, report_id: str) -> Path:
        return self.reports_dir / f"estimate_{report_id}.json"

    def ensure_all(self) -> None:
        for path in [
            self.root,
            self.reports_dir,
            self.traces_dir,
            self.tables_dir,
            self.logs_dir,
        ]:
            path.mkdir(parents=True, exist_ok=True)
