"""
Instance files, inline instances and run configuration
"""
from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, List, Optional, Tuple

from src.core.errors import InstanceError
from src.core.geometry import GENUS_KINDS, CompleteIntersection
from src.core.series import DEFAULT_Q_ORDER

LOGGER = logging.getLogger(__name__)

DATA_DIR = os.path.join(os.path.dirname(__file__), '..', '..', 'data')
THREADS_ENV = "CIGENUS_THREADS"
OUTPUT_FORMATS = ("human", "json", "csv")


def _threads_from_env() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        LOGGER.warning("ignoring %s=%r, expected an integer", THREADS_ENV, raw)
        return 1


@dataclass(frozen=True)
class RunConfig:
    q_order: int = DEFAULT_Q_ORDER
    y_order: Optional[int] = None
    genera: Tuple[str, ...] = ("witten", "ahat", "lgenus", "euler")
    oracle: bool = False
    oracle_q: complex = 0.1
    tolerance: float = 1e-6
    samples: int = 64
    radius: Optional[float] = None
    output_format: str = "human"
    threads: int = field(default_factory=_threads_from_env)

    def __post_init__(self):
        if self.q_order < 0:
            raise InstanceError(f"q_order must be >= 0, got {self.q_order}")
        if self.y_order is not None and self.y_order < 0:
            raise InstanceError(f"y_order must be >= 0, got {self.y_order}")
        if self.tolerance <= 0:
            raise InstanceError(f"tolerance must be > 0, got {self.tolerance}")
        if self.samples < 2 or self.samples & (self.samples - 1):
            raise InstanceError(f"samples must be a power of two >= 2, got {self.samples}")
        if self.radius is not None and self.radius <= 0:
            raise InstanceError(f"radius must be > 0, got {self.radius}")
        if self.output_format not in OUTPUT_FORMATS:
            raise InstanceError(f"unknown output format {self.output_format!r}")
        unknown = [g for g in self.genera if g not in GENUS_KINDS]
        if unknown:
            raise InstanceError(f"unknown genus kind(s): {', '.join(unknown)}")
        if self.threads < 1:
            raise InstanceError(f"threads must be >= 1, got {self.threads}")

    def override(self, **changes: Any) -> "RunConfig":
        """Copy with every non-None change applied"""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def parse_complex(value: Any) -> complex:
    if isinstance(value, (int, float, complex)):
        return complex(value)
    try:
        return complex(str(value).replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise InstanceError(f"cannot read {value!r} as a complex number") from exc


def load_run_config(path: Optional[str] = None) -> RunConfig:
    """Load RunConfig defaults from JSON, falling back to built-in defaults"""
    path = path or os.path.join(DATA_DIR, 'run_config.json')
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except FileNotFoundError:
        LOGGER.warning("run config %s not found, using built-in defaults", path)
        return RunConfig()
    except json.JSONDecodeError as exc:
        raise InstanceError(f"run config {path} is not valid JSON: {exc}") from exc

    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        LOGGER.warning("run config %s: ignoring unknown keys %s", path, ", ".join(unknown))
    values = {k: v for k, v in raw.items() if k in known}
    if "genera" in values:
        values["genera"] = tuple(values["genera"])
    if "oracle_q" in values:
        values["oracle_q"] = parse_complex(values["oracle_q"])
    return RunConfig(**values)


def instance_from_dict(obj: Dict[str, Any], source: str = "<inline>") -> CompleteIntersection:
    if not isinstance(obj, dict):
        raise InstanceError(f"{source}: an instance is an object with fields n and D")
    if "n" not in obj:
        raise InstanceError(f"{source}: missing field n")
    n = obj["n"]
    D = obj.get("D", []) or []
    if not isinstance(n, list) or not isinstance(D, list) or any(not isinstance(r, list) for r in D):
        raise InstanceError(f"{source}: n must be an array of integers and D an array of rows")
    label = obj.get("label", "") or ""
    return CompleteIntersection(tuple(n), tuple(tuple(r) for r in D), str(label))


def load_instance(path: str) -> CompleteIntersection:
    """Load an InstanceFile (JSON with n, D and an optional label)"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            obj = json.load(f)
    except OSError as exc:
        raise InstanceError(f"cannot read instance file {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InstanceError(f"instance file {path} is not valid JSON: {exc}") from exc
    ci = instance_from_dict(obj, source=path)
    if not ci.label:
        ci = CompleteIntersection(ci.n, ci.D, os.path.splitext(os.path.basename(path))[0])
    return ci


def _int_list(text: str, what: str) -> List[int]:
    text = text.strip().strip("[]")
    if not text:
        return []
    try:
        return [int(v) for v in text.split(",")]
    except ValueError as exc:
        raise InstanceError(f"inline instance: cannot read {what} from {text!r}") from exc


def parse_inline(text: str) -> CompleteIntersection:
    """Parse 'n=7,4;D=2,1/1,-2/1,0' (rows split by '/') or 'n=[7,4];D=[[2,1],[1,-2]]'"""
    parts: Dict[str, str] = {}
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        key, sep, value = chunk.partition("=")
        if not sep:
            raise InstanceError(f"inline instance: expected key=value, got {chunk!r}")
        parts[key.strip()] = value.strip()
    unknown = set(parts) - {"n", "D", "label"}
    if unknown:
        raise InstanceError(f"inline instance: unknown field(s) {', '.join(sorted(unknown))}")
    if "n" not in parts:
        raise InstanceError("inline instance: missing field n")

    raw_rows = parts.get("D", "")
    if raw_rows.startswith("["):
        try:
            rows = json.loads(raw_rows)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"inline instance: bad D {raw_rows!r}") from exc
    else:
        rows = [_int_list(r, "a row of D") for r in raw_rows.split("/")] if raw_rows else []
    return instance_from_dict({"n": _int_list(parts["n"], "n"), "D": rows, "label": parts.get("label", "")})


def load_sample_instances() -> List[CompleteIntersection]:
    """Every instance under data/instances, sorted by file name"""
    instances_dir = os.path.join(DATA_DIR, 'instances')
    out: List[CompleteIntersection] = []
    if not os.path.isdir(instances_dir):
        return out
    for name in sorted(os.listdir(instances_dir)):
        if name.endswith('.json'):
            out.append(load_instance(os.path.join(instances_dir, name)))
    return out
