"""Run reports: canonical JSON, determinism hashing, CSV summaries, and the
experiment configuration loader."""

from __future__ import annotations

import configparser
import csv
import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path

from . import __version__

VOLATILE_KEYS = {"runtime_ms", "timestamp", "output_dir", "determinism_hash"}

CSV_COLUMNS = [
    "pipeline",
    "n",
    "params_hash",
    "certified_bound",
    "target_bound",
    "verdict",
    "seed",
    "runtime_ms",
]


def jsonable(obj):
    """Rewrite a report object tree into JSON-safe values.

    Floats are rounded to 12 significant digits so serialized reports are
    byte-stable; Fractions become exact "p/q" strings.
    """
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (str, int, bool)) or obj is None:
        return obj
    return str(obj)


def canonical_json(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"))


def _strip_volatile(obj):
    if isinstance(obj, dict):
        return {k: _strip_volatile(v) for k, v in obj.items() if k not in VOLATILE_KEYS}
    if isinstance(obj, list):
        return [_strip_volatile(v) for v in obj]
    return obj


def params_hash(params: dict) -> str:
    return hashlib.sha256(canonical_json(params).encode()).hexdigest()[:12]


@dataclass
class StepRecord:
    name: str
    verdict: str
    detail: dict = field(default_factory=dict)
    runtime_ms: float = 0.0


@dataclass
class RunReport:
    """Per-step records plus certified conclusions of one pipeline run.

    Every certified conclusion carries a replay spec (operation name,
    JSON arguments, expected value) so ``forge replay`` can re-derive it,
    and either a stored witness or an exhaustive-check flag. Certified
    bounds hold at this instance; asymptotic targets are reported but never
    certified.
    """

    pipeline: str
    params: dict
    seed: int | None
    steps: list[StepRecord] = field(default_factory=list)
    certified: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    certified_bound: int | None = None
    target_bound: float | None = None
    verdict: str = "completed"
    n: int | None = None
    runtime_ms: float = 0.0

    def add_step(self, name: str, verdict: str, detail: dict | None = None, runtime_ms: float = 0.0):
        self.steps.append(StepRecord(name, verdict, detail or {}, runtime_ms))

    def certify(
        self,
        claim: str,
        op: str,
        args: dict,
        expect,
        *,
        exhaustive: bool = False,
        witness=None,
    ):
        entry = {
            "claim": claim,
            "replay": {"op": op, "args": jsonable(args), "expect": jsonable(expect)},
            "exhaustive": exhaustive,
        }
        if witness is not None:
            entry["witness"] = jsonable(witness)
        self.certified.append(entry)

    def to_dict(self) -> dict:
        data = {
            "pipeline": self.pipeline,
            "params": jsonable(self.params),
            "seed": self.seed,
            "environment": {"version": __version__, "seed": self.seed},
            "steps": [jsonable(asdict(s)) for s in self.steps],
            "certified": jsonable(self.certified),
            "notes": list(self.notes),
            "certified_bound": self.certified_bound,
            "target_bound": jsonable(self.target_bound),
            "verdict": self.verdict,
            "n": self.n,
            "runtime_ms": jsonable(self.runtime_ms),
        }
        data["determinism_hash"] = determinism_hash(data)
        return data

    def to_json(self) -> str:
        return json.dumps(jsonable(self.to_dict()), sort_keys=True, indent=2)

    def csv_row(self) -> dict:
        return {
            "pipeline": self.pipeline,
            "n": self.n,
            "params_hash": params_hash(self.params),
            "certified_bound": self.certified_bound,
            "target_bound": jsonable(self.target_bound),
            "verdict": self.verdict,
            "seed": self.seed,
            "runtime_ms": jsonable(self.runtime_ms),
        }


def determinism_hash(report_dict: dict) -> str:
    """Hash of the report with timing and location fields excluded."""
    return hashlib.sha256(canonical_json(_strip_volatile(report_dict)).encode()).hexdigest()


def write_run_dir(report: RunReport, out_dir: str | Path) -> Path:
    """Persist report JSON and CSV summary into a run directory.

    A lockfile guards against two runs sharing the directory.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lock = out / ".forge-lock"
    try:
        fd = lock.open("x")
    except FileExistsError:
        raise RuntimeError(f"run directory {out} is locked by another run") from None
    try:
        fd.write("locked\n")
        fd.close()
        (out / "report.json").write_text(report.to_json() + "\n")
        with (out / "summary.csv").open("w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            writer.writerow(report.csv_row())
    finally:
        lock.unlink(missing_ok=True)
    return out


def load_report_dict(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())


@dataclass
class ExperimentConfig:
    """Inputs of one pipeline run; seeds are mandatory for randomized steps."""

    pipeline: str = ""
    graph: str | None = None  # inline graph6 or a file path
    params: dict = field(default_factory=dict)
    seed: int | None = None
    output_dir: str | None = None
    attempts: int = 200
    sample_count: int = 300
    sample_max_vertices: int = 8
    edge_prob: float = 0.5

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        text = Path(path).read_text()
        stripped = text.lstrip()
        if stripped.startswith("{"):
            data = json.loads(text)
            known = {f.name for f in fields(cls)}
            return cls(**{k: v for k, v in data.items() if k in known})
        parser = configparser.ConfigParser()
        parser.read_string(text)
        cfg = cls()
        if parser.has_section("run"):
            run = parser["run"]
            cfg.pipeline = run.get("pipeline", cfg.pipeline)
            cfg.graph = run.get("graph", cfg.graph)
            if "seed" in run:
                cfg.seed = run.getint("seed")
            cfg.output_dir = run.get("output_dir", cfg.output_dir)
            if "attempts" in run:
                cfg.attempts = run.getint("attempts")
            if "sample_count" in run:
                cfg.sample_count = run.getint("sample_count")
            if "sample_max_vertices" in run:
                cfg.sample_max_vertices = run.getint("sample_max_vertices")
            if "edge_prob" in run:
                cfg.edge_prob = run.getfloat("edge_prob")
        if parser.has_section("params"):
            cfg.params = dict(parser["params"])
        return cfg
