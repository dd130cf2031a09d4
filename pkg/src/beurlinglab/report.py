"""Experiment configuration and structured reports."""
from __future__ import annotations

import configparser
import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

VERDICTS = ("pass", "fail", "report-only")


@dataclass
class ExperimentConfig:
    experiment: str
    extent: float | None = None
    size: int | None = None
    seed: int = 0
    out: str | None = None
    format: str = "json"
    params: dict = field(default_factory=dict)
    tol: dict = field(default_factory=dict)

    def to_ini(self) -> str:
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        base = {"experiment": self.experiment, "seed": str(self.seed), "format": self.format}
        if self.extent is not None:
            base["extent"] = repr(float(self.extent))
        if self.size is not None:
            base["size"] = str(int(self.size))
        if self.out is not None:
            base["out"] = self.out
        cp["run"] = base
        cp["params"] = {k: str(v) for k, v in sorted(self.params.items())}
        cp["tol"] = {k: repr(float(v)) for k, v in sorted(self.tol.items())}
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()

    @classmethod
    def from_ini(cls, text: str) -> "ExperimentConfig":
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        cp.read_string(text)
        run = cp["run"]
        return cls(
            experiment=run["experiment"],
            extent=float(run["extent"]) if "extent" in run else None,
            size=int(run["size"]) if "size" in run else None,
            seed=int(run.get("seed", "0")),
            out=run.get("out"),
            format=run.get("format", "json"),
            params=dict(cp["params"]) if cp.has_section("params") else {},
            tol={k: float(v) for k, v in cp["tol"].items()} if cp.has_section("tol") else {},
        )

    def param(self, name: str, default, kind=float):
        return kind(self.params[name]) if name in self.params else default

    def tolerance(self, name: str, default: float) -> float:
        return float(self.tol.get(name, default))


def _clean(x):
    if x is None or isinstance(x, (str, bool)):
        return x
    if isinstance(x, complex):
        return _clean(x.real) if x.imag == 0 else [_clean(x.real), _clean(x.imag)]
    x = float(x)
    return x if math.isfinite(x) else repr(x)


@dataclass
class ReportRow:
    quantity: str
    measured: object
    reference: object
    claim: str
    verdict: str

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict must be one of {VERDICTS}")
        self.measured = _clean(self.measured)
        self.reference = _clean(self.reference)


@dataclass
class ExperimentReport:
    experiment: str
    config: dict
    rows: list = field(default_factory=list)
    elapsed_s: float = 0.0

    def add(self, quantity, measured, reference, claim, ok: bool | None):
        verdict = "report-only" if ok is None else ("pass" if ok else "fail")
        self.rows.append(ReportRow(quantity, measured, reference, claim, verdict))

    @property
    def failed(self) -> bool:
        return any(r.verdict == "fail" for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "config": self.config,
            "rows": [asdict(r) for r in self.rows],
            "elapsed_s": self.elapsed_s,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        return cls(d["experiment"], d["config"], [ReportRow(**r) for r in d["rows"]], d["elapsed_s"])


CSV_HEADER = ("quantity", "measured", "reference", "verdict")


def render(report: ExperimentReport, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in report.rows:
            w.writerow([r.quantity, r.measured, r.reference, r.verdict])
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def emit(report: ExperimentReport, path: str | Path, fmt: str = "json") -> Path:
    path = Path(path)
    path.write_text(render(report, fmt))
    return path
