"""Bundled instances and the island config file format."""
from __future__ import annotations

import copy
from dataclasses import dataclass

from .algebra import RatFunc
from .field import FieldConfig, FieldError, RamifiedScalar
from .islands import IslandConfig
from .parsing import ParseError, parse_berkpoint, parse_disk, parse_ratfunc, parse_scalar


class UnknownPreset(FieldError, KeyError):
    pass


_WARP_ISLANDS = ["D(0, p^0)", "D(1, p^0)", "D(2, p^0)", "comp Dbar(0, p^0)"]
_WARP_TAIL = "(((z-1)^3 - 81)/(z-1)^3) * (((z-2)^3 - 81)/(z-2)^3)"

PRESETS: dict[str, dict] = {
    # f = lambda z with |lambda| = 27; islands of radius 1/3 around points of size 27
    "remark5": {
        "prime": 3,
        "ram_index": 1,
        "fn": "z/27",
        "islands": ["D(1/27, p^-1)", "D(1/27 + 1, p^-1)", "D(2/27, p^-1)", "D(2/27 + 1, p^-1)"],
        "nu1": "nu(0, p^-(-3))",
        "seeds": [],
        "audit": False,
    },
    "linear-positive": {
        "prime": 3,
        "ram_index": 1,
        "fn": "z/27",
        "islands": ["D(0, p^0)", "D(1/9, p^0)", "D(2/9, p^0)", "comp Dbar(0, p^-(-4))"],
        "nu1": "nu(0, p^-(-2))",
        "seeds": ["0"],
        "audit": False,
    },
    # n = 1, N = 2, b = 3, c = -81
    "warp-p3": {
        "prime": 3,
        "ram_index": 3,
        "fn": "((z^4 - 81)/z^3) * " + _WARP_TAIL,
        "islands": _WARP_ISLANDS,
        "nu1": "nu(0, p^0)",
        "seeds": ["3", "1 + pi^4", "2 + pi^4"],
        "audit": False,
    },
    "warp-p3-modified": {
        "prime": 3,
        "ram_index": 3,
        "fn": "((z^3 - 81)/z^2) * " + _WARP_TAIL,
        "islands": _WARP_ISLANDS,
        "nu1": "nu(0, p^0)",
        "seeds": ["3", "1 + pi^4", "2 + pi^4"],
        "audit": False,
    },
}


def preset(name: str) -> dict:
    try:
        return copy.deepcopy(PRESETS[name])
    except KeyError:
        raise UnknownPreset(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


@dataclass(frozen=True)
class LoadedConfig:
    field: FieldConfig
    f: RatFunc | None
    cfg: IslandConfig | None
    seeds: tuple
    audit: bool


def load_config(data: dict) -> LoadedConfig:
    """Parse a config dict ({prime, ram_index, fn, islands, nu1, seeds, audit})."""
    if not isinstance(data, dict):
        raise ParseError("config must be a JSON object")
    try:
        K = FieldConfig(int(data["prime"]), int(data.get("ram_index", 1)))
    except KeyError:
        raise ParseError("config needs a prime") from None
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from exc
    f = parse_ratfunc(data["fn"], K) if data.get("fn") else None
    cfg = None
    if data.get("islands") is not None:
        islands = [parse_disk(s, K) for s in data["islands"]]
        if "nu1" not in data:
            raise ParseError("config with islands needs nu1")
        nu1 = parse_berkpoint(data["nu1"], K)
        if not hasattr(nu1, "log_radius"):
            raise ParseError("nu1 must be a type II point nu(a, r)")
        cfg = IslandConfig(islands, nu1, K)
    seeds = tuple(parse_scalar(s, K) for s in data.get("seeds", []))
    return LoadedConfig(K, f, cfg, seeds, bool(data.get("audit", False)))
