"""Report envelopes and their JSON / plain-text rendering."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .cone_engine import ConeSector, EClass, Rank2Config, Ray
from .presets import Preset, sector_inequalities
from .qlattice import square

CONJECTURAL = "conjectural: relies on the predicted description of the effective and ample cones"
CONJECTURAL_FIBRATION = "conjectural: square-zero classes are predicted to induce abelian fibrations"


def plain(obj):
    """Recursively turn a payload into JSON-compatible values (Fractions become strings)."""
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    return obj


def config_digest(preset: Preset) -> str:
    data = {
        "gram": preset.lattice.gram,
        "labels": preset.lattice.basis_labels,
        "profile": None if preset.profile is None else preset.profile.divisors,
        "g": None if preset.config is None else preset.config.g,
    }
    blob = json.dumps(plain(data), sort_keys=True, ensure_ascii=False).encode()
    return hashlib.sha256(blob).hexdigest()


@dataclass
class ReportEnvelope:
    command: str
    config: dict | None
    params: dict
    results: object
    warnings: list[str] = field(default_factory=list)

    @classmethod
    def for_preset(cls, command: str, preset: Preset | None, params: dict, results, warnings=()):
        config = None
        if preset is not None:
            config = {"name": preset.name, "digest": config_digest(preset)}
            if preset.note:
                config["note"] = preset.note
        return cls(command, config, params, results, list(warnings))

    def as_dict(self) -> dict:
        return plain(
            {
                "command": self.command,
                "config": self.config,
                "params": self.params,
                "results": self.results,
                "warnings": self.warnings,
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, ensure_ascii=False, indent=2)

    def to_text(self) -> str:
        lines: list[str] = []
        _render(self.as_dict(), 0, lines)
        return "\n".join(lines)


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, list) and all(isinstance(x, list) and all(not isinstance(y, (dict, list)) for y in x) for x in v) and v:
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def _render(obj, depth: int, lines: list[str]) -> None:
    pad = "  " * depth
    if isinstance(obj, dict):
        for key in sorted(obj):
            val = obj[key]
            if isinstance(val, dict) or (isinstance(val, list) and val and any(isinstance(x, dict) for x in val)):
                lines.append(f"{pad}{key}:")
                _render(val, depth + 1, lines)
            else:
                lines.append(f"{pad}{key}: {_scalar(val)}")
    elif isinstance(obj, list):
        for i, item in enumerate(obj):
            if isinstance(item, dict):
                lines.append(f"{pad}- [{i}]")
                _render(item, depth + 1, lines)
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")


# --- payload builders -----------------------------------------------------

def vector_payload(preset: Preset, v) -> dict:
    coords = tuple(getattr(v, "coords", v))
    vec = preset.lattice.vector(coords)
    return {
        "raw": list(coords),
        "display": preset.display.expr(coords),
        "display_coords": list(preset.display.coords(coords)),
        "square": square(vec),
    }


def ray_payload(preset: Preset, ray: Ray) -> dict:
    out = {"slope": str(ray.slope), "square": ray.square}
    if ray.vector is not None:
        out.update(vector_payload(preset, ray.vector))
    else:
        out["raw"] = None
        out["irrational"] = {
            "radicand": ray.radicand,
            "coords": [[str(p), str(q)] for p, q in ray.surd],
            "meaning": "coordinate i is p_i + q_i*sqrt(radicand)",
        }
    out["wall_of"] = None if ray.wall is None else preset.display.expr(ray.wall)
    return out


def sector_payload(cfg: Rank2Config, preset: Preset, sector: ConeSector) -> dict:
    ineq = sector_inequalities(cfg, sector, preset.display)
    return {
        "ray_lo": ray_payload(preset, sector.ray_lo),
        "ray_hi": ray_payload(preset, sector.ray_hi),
        "lo_closed": sector.lo_closed,
        "hi_closed": sector.hi_closed,
        "inequalities": [i for i in ineq if i is not None],
    }


def eclass_payload(cfg: Rank2Config, preset: Preset, e: EClass) -> dict:
    curve = e.curve(cfg)
    out = vector_payload(preset, e.vector)
    out.update(
        {
            "kind": e.kind,
            "nodal": e.nodal,
            "divisibility": curve.div,
            "degree": curve.degree,
            "r_square": curve.r_square,
        }
    )
    return out
