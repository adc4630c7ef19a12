"""Python interface to the symphonic engine.

Reports are returned as plain dictionaries with the same layout as the
command-line JSON output.
"""

from __future__ import annotations

import json
import pkgutil
from pathlib import Path
from typing import Any, Sequence

# The compiled module may live in a separate build tree.
__path__ = pkgutil.extend_path(__path__, __name__)

from . import _core  # noqa: E402
from ._core import (  # noqa: E402
    ArgumentError,
    ConfigError,
    Error,
    EvaluationError,
    Expression,
    ParseError,
    SingularWeightError,
    identity_names,
    map_jet,
    parse,
    report_schema_version,
)

__all__ = [
    "ArgumentError",
    "ConfigError",
    "Error",
    "EvaluationError",
    "Expression",
    "ParseError",
    "SingularWeightError",
    "check",
    "identity_names",
    "map_jet",
    "parse",
    "report_schema_version",
    "run_config",
    "sweep",
    "verify",
    "zoo",
]


def zoo() -> list[dict[str, Any]]:
    """Every zoo entry with its tags and boxes."""
    return json.loads(_core.zoo_catalog_json())


def verify(identity: str, u: str, f: str, *, p: float = 2.0, m: int = 2,
           samples: int = 100, seed: int = 0, tol: float = 1e-7) -> dict[str, Any]:
    """Check a composition identity for zoo maps u and f."""
    return json.loads(_core.verify_json(identity, u, f, p, m, samples, seed, tol))


def sweep(identity: str, f: str, lambdas: Sequence[float], *, family: str = "dilation",
          p: float = 2.0, m: int = 2, samples: int = 100, seed: int = 0,
          tol: float = 1e-7) -> dict[str, Any]:
    """Fit the scaling exponent of an identity over a dilation family."""
    return json.loads(
        _core.sweep_json(identity, family, f, list(lambdas), p, m, samples, seed, tol))


def check(predicate: str, map: str, *, p: float = 2.0, samples: int = 100, seed: int = 0,
          tol: float = 1e-7) -> dict[str, Any]:
    """Evaluate a predicate such as "p_symphonic" or "totally_geodesic"."""
    return json.loads(_core.predicate_json(predicate, map, p, samples, seed, tol))


def run_config(config: str | Path) -> dict[str, Any]:
    """Run a YAML configuration given as a path or as YAML text."""
    if isinstance(config, Path) or (isinstance(config, str) and "\n" not in config
                                    and Path(config).is_file()):
        config = Path(config).read_text()
    return json.loads(_core.run_config_json(config))
