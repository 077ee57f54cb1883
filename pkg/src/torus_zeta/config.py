"""System description files (JSON)."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .cohomology import CohomologyAction, CohomologyError, from_explicit, from_toral
from .exactlinalg import IntMatrix


class ConfigError(ValueError):
    """Malformed or inconsistent system description."""


@dataclass(frozen=True)
class SystemConfig:
    kind: str
    r: float
    r_token: str
    convention: str = "signed"
    precision: int = 12
    matrix: IntMatrix | None = None
    d: int | None = None
    betti: tuple[int, ...] | None = None
    matrices: tuple[IntMatrix, ...] | None = None

    def echo(self) -> dict[str, Any]:
        if self.kind == "toral":
            fiber = {"kind": "toral", "matrix": [[str(x) for x in row] for row in self.matrix.rows]}
        else:
            fiber = {
                "kind": "explicit",
                "d": self.d,
                "betti": list(self.betti),
                "matrices": [[[str(x) for x in row] for row in M.rows] for M in self.matrices],
            }
        return {"fiber": fiber, "r": self.r_token, "convention": self.convention, "precision": self.precision}

    def build_action(self) -> CohomologyAction:
        try:
            if self.kind == "toral":
                return from_toral(self.matrix)
            return from_explicit(self.d, self.betti, self.matrices)
        except CohomologyError as exc:
            raise ConfigError(str(exc)) from exc


def _int_matrix(raw, what: str) -> IntMatrix:
    if not isinstance(raw, list) or not all(isinstance(row, list) for row in raw):
        raise ConfigError(f"{what} must be a list of integer rows")
    try:
        return IntMatrix(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what}: {exc}") from exc


def _parse_r(raw) -> tuple[float, str]:
    if isinstance(raw, str):
        if raw.strip() == "e":
            return math.e, "e"
        try:
            value = float(raw)
        except ValueError as exc:
            raise ConfigError(f"r must be a number > 1 or the token \"e\", got {raw!r}") from exc
    elif isinstance(raw, (int, float)) and not isinstance(raw, bool):
        value = float(raw)
    else:
        raise ConfigError(f"r must be a number > 1 or the token \"e\", got {raw!r}")
    if not value > 1 or not math.isfinite(value):
        raise ConfigError(f"r must exceed 1, got {raw!r}")
    return value, raw.strip() if isinstance(raw, str) else str(raw)


def parse_config(data: Any) -> SystemConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    fiber = data.get("fiber")
    if not isinstance(fiber, dict):
        raise ConfigError("missing 'fiber' object")
    if "r" not in data:
        raise ConfigError("missing 'r'")
    r, token = _parse_r(data["r"])
    convention = data.get("convention", "signed")
    if convention not in ("signed", "unsigned"):
        raise ConfigError(f"convention must be signed or unsigned, got {convention!r}")
    precision = data.get("precision", 12)
    if not isinstance(precision, int) or isinstance(precision, bool) or not 1 <= precision <= 15:
        raise ConfigError(f"precision must be an integer in 1..15, got {precision!r}")
    kind = fiber.get("kind")
    if kind == "toral":
        return SystemConfig("toral", r, token, convention, precision, matrix=_int_matrix(fiber.get("matrix"), "matrix"))
    if kind == "explicit":
        d, betti, mats = fiber.get("d"), fiber.get("betti"), fiber.get("matrices")
        if not isinstance(d, int) or isinstance(d, bool):
            raise ConfigError("explicit fiber needs integer 'd'")
        if not isinstance(betti, list) or not all(isinstance(b, int) for b in betti):
            raise ConfigError("explicit fiber needs integer list 'betti'")
        if not isinstance(mats, list):
            raise ConfigError("explicit fiber needs list 'matrices'")
        parsed = tuple(
            IntMatrix([]) if m == [] else _int_matrix(m, f"matrices[{i}]") for i, m in enumerate(mats)
        )
        return SystemConfig("explicit", r, token, convention, precision, d=d, betti=tuple(betti), matrices=parsed)
    raise ConfigError(f"fiber kind must be 'toral' or 'explicit', got {kind!r}")


def load_config(path: str | Path) -> SystemConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return parse_config(data)
