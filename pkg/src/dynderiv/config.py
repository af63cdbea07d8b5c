"""Case-config documents: the JSON description of a sweep plan.

A config is one strict JSON object with four blocks (``condition``,
``oscillation``, ``plant``, ``scenarios``) plus an optional top-level
``speed_basis``.  Angles are degrees here and nowhere else inside the
package.  Unknown keys are rejected; every error names the offending key
(and the line it sits on when it can be located in the source text).

``render_case_config`` emits the canonical form: sorted keys, explicit
scenario list, two-space indent.  Rendering picks degree values whose
parse reproduces the stored radians bit-for-bit, so
``parse_case_config(render_case_config(plan)) == plan``.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .errors import MalformedDocument, MissingKey, UnitViolation, UnknownKey
from .kinematics import FlightCondition, OscillationMode, OscillationSpec
from .plants import (
    DragPolar,
    FlatPlatePlant,
    IndicialPlant,
    Plant,
    QuasiSteadyCoefficients,
    QuasiSteadyPlant,
)
from .scenarios import SweepPlan, TransitionScenario, builtin_scenarios

_TOP_KEYS = {"condition", "oscillation", "plant", "scenarios", "speed_basis"}
_CONDITION_KEYS = {
    "speed_m_s", "sound_speed_m_s", "density_kg_m3", "chord_m", "span_m", "area_m2",
}
_OSCILLATION_KEYS = {
    "modes", "mean_incidence_deg", "amplitude_deg", "reduced_frequency",
    "cycles", "samples_per_cycle", "skip_cycles",
}
_SCENARIO_KEYS = {"name", "altitude_m", "vertical_velocity_m_s", "forward_velocity_m_s"}
_QS_KEYS = {
    "kind",
    "CL0", "CL_alpha", "CL_q", "CL_alphadot",
    "CD0", "CD_alpha", "CD_q",
    "Cm0", "Cm_alpha", "Cm_q", "Cm_alphadot",
    "induced_drag_factor", "mach_scaling",
}
_FLAT_PLATE_KEYS = {"kind", "pitch_axis", "kernel"}
_INDICIAL_KEYS = {"kind", "pitch_axis", "CD0", "CD_alpha", "CD_q", "induced_drag_factor"}

_MODE_NAMES = {"alpha": OscillationMode.ALPHA, "q": OscillationMode.Q}


def _key_line(text: str, key: str) -> str:
    """Best-effort line locator for error messages."""
    needle = f'"{key.split(".")[-1]}"'
    for i, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return f" (line {i})"
    return ""


class _Ctx:
    """Carries the raw text around so every error can cite key and line."""

    def __init__(self, text: str):
        self.text = text

    def require(self, obj: dict, key: str, path: str) -> Any:
        if key not in obj:
            raise MissingKey(f"missing required key '{path}'{_key_line(self.text, path)}")
        return obj[key]

    def reject_unknown(self, obj: dict, allowed: set[str], path: str) -> None:
        for key in obj:
            if key not in allowed:
                where = f"{path}.{key}" if path else key
                raise UnknownKey(f"unknown key '{where}'{_key_line(self.text, key)}")

    def number(self, obj: dict, key: str, path: str, *, optional: bool = False) -> float | None:
        if optional and obj.get(key) is None:
            return None
        value = self.require(obj, key, path)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise UnitViolation(f"'{path}' must be a number{_key_line(self.text, key)}")
        value = float(value)
        if not math.isfinite(value):
            raise UnitViolation(f"'{path}' must be finite{_key_line(self.text, key)}")
        return value

    def positive(self, obj: dict, key: str, path: str, *, optional: bool = False) -> float | None:
        value = self.number(obj, key, path, optional=optional)
        if value is not None and value <= 0.0:
            raise UnitViolation(f"'{path}' must be > 0, got {value}{_key_line(self.text, key)}")
        return value

    def integer(self, obj: dict, key: str, path: str, *, minimum: int) -> int:
        value = self.require(obj, key, path)
        if isinstance(value, bool) or not isinstance(value, int):
            raise UnitViolation(f"'{path}' must be an integer{_key_line(self.text, key)}")
        if value < minimum:
            raise UnitViolation(f"'{path}' must be >= {minimum}, got {value}{_key_line(self.text, key)}")
        return value


def _parse_condition(ctx: _Ctx, obj: Any) -> FlightCondition:
    if not isinstance(obj, dict):
        raise MalformedDocument("'condition' must be an object")
    ctx.reject_unknown(obj, _CONDITION_KEYS, "condition")
    speed = ctx.number(obj, "speed_m_s", "condition.speed_m_s")
    if speed < 0.0:
        raise UnitViolation(f"'condition.speed_m_s' must be >= 0, got {speed}")
    sound = obj.get("sound_speed_m_s")
    if sound is not None:
        sound = ctx.positive(obj, "sound_speed_m_s", "condition.sound_speed_m_s")
        if speed >= sound:
            raise UnitViolation(
                f"'condition.speed_m_s' implies Mach >= 1 ({speed}/{sound})"
            )
    return FlightCondition(
        freestream_speed=speed,
        density=ctx.positive(obj, "density_kg_m3", "condition.density_kg_m3"),
        ref_chord=ctx.positive(obj, "chord_m", "condition.chord_m"),
        ref_span=ctx.positive(obj, "span_m", "condition.span_m"),
        ref_area=ctx.positive(obj, "area_m2", "condition.area_m2"),
        sound_speed=sound,
    )


def _parse_modes(ctx: _Ctx, obj: dict) -> tuple[OscillationMode, ...]:
    raw = ctx.require(obj, "modes", "oscillation.modes")
    if not isinstance(raw, list) or not raw:
        raise UnitViolation("'oscillation.modes' must be a non-empty list")
    modes: list[OscillationMode] = []
    for item in raw:
        if not isinstance(item, str) or item not in _MODE_NAMES:
            raise UnitViolation(
                f"'oscillation.modes' entries must be 'alpha' or 'q', got {item!r}"
            )
        mode = _MODE_NAMES[item]
        if mode in modes:
            raise UnitViolation(f"'oscillation.modes' repeats {item!r}")
        modes.append(mode)
    return tuple(modes)


def _parse_oscillation(ctx: _Ctx, obj: Any) -> tuple[OscillationSpec, tuple[OscillationMode, ...], int | None]:
    if not isinstance(obj, dict):
        raise MalformedDocument("'oscillation' must be an object")
    ctx.reject_unknown(obj, _OSCILLATION_KEYS, "oscillation")
    modes = _parse_modes(ctx, obj)
    mean_deg = ctx.number(obj, "mean_incidence_deg", "oscillation.mean_incidence_deg")
    amp_deg = ctx.positive(obj, "amplitude_deg", "oscillation.amplitude_deg")
    spec = OscillationSpec(
        mode=modes[0],
        mean_incidence=math.radians(mean_deg),
        body_amplitude=math.radians(amp_deg),
        reduced_frequency=ctx.positive(obj, "reduced_frequency", "oscillation.reduced_frequency"),
        cycles=ctx.integer(obj, "cycles", "oscillation.cycles", minimum=1),
        samples_per_cycle=ctx.integer(
            obj, "samples_per_cycle", "oscillation.samples_per_cycle", minimum=8
        ),
    )
    skip = obj.get("skip_cycles")
    if skip is not None:
        skip = ctx.integer(obj, "skip_cycles", "oscillation.skip_cycles", minimum=0)
    return spec, modes, skip


def _parse_plant(ctx: _Ctx, obj: Any) -> Plant:
    if not isinstance(obj, dict):
        raise MalformedDocument("'plant' must be an object")
    kind = ctx.require(obj, "kind", "plant.kind")
    if kind == "quasi-steady":
        ctx.reject_unknown(obj, _QS_KEYS, "plant")
        kwargs = {}
        for name in QuasiSteadyCoefficients.__dataclass_fields__:
            if name == "induced_drag_factor":
                value = ctx.number(obj, name, f"plant.{name}", optional=True)
                if value is not None and value < 0.0:
                    raise UnitViolation(f"'plant.{name}' must be >= 0, got {value}")
                kwargs[name] = value
            elif name == "mach_scaling":
                value = obj.get(name, False)
                if not isinstance(value, bool):
                    raise UnitViolation("'plant.mach_scaling' must be a boolean")
                kwargs[name] = value
            else:
                kwargs[name] = ctx.number(obj, name, f"plant.{name}") if name in obj else 0.0
        return QuasiSteadyPlant(coefficients=QuasiSteadyCoefficients(**kwargs))
    if kind == "flat-plate":
        ctx.reject_unknown(obj, _FLAT_PLATE_KEYS, "plant")
        kernel = obj.get("kernel", "theodorsen")
        if kernel not in ("theodorsen", "jones"):
            raise UnitViolation(f"'plant.kernel' must be 'theodorsen' or 'jones', got {kernel!r}")
        return FlatPlatePlant(
            pitch_axis=ctx.number(obj, "pitch_axis", "plant.pitch_axis") if "pitch_axis" in obj else -0.5,
            kernel=kernel,
        )
    if kind == "indicial":
        ctx.reject_unknown(obj, _INDICIAL_KEYS, "plant")
        kappa = ctx.number(obj, "induced_drag_factor", "plant.induced_drag_factor", optional=True)
        if kappa is not None and kappa < 0.0:
            raise UnitViolation(f"'plant.induced_drag_factor' must be >= 0, got {kappa}")
        drag = DragPolar(
            CD0=ctx.number(obj, "CD0", "plant.CD0") if "CD0" in obj else 0.0,
            CD_alpha=ctx.number(obj, "CD_alpha", "plant.CD_alpha") if "CD_alpha" in obj else 0.0,
            CD_q=ctx.number(obj, "CD_q", "plant.CD_q") if "CD_q" in obj else 0.0,
            induced_drag_factor=kappa,
        )
        return IndicialPlant(
            pitch_axis=ctx.number(obj, "pitch_axis", "plant.pitch_axis") if "pitch_axis" in obj else -0.5,
            drag=drag,
        )
    raise UnitViolation(
        f"'plant.kind' must be 'quasi-steady', 'flat-plate' or 'indicial', got {kind!r}"
    )


def _parse_scenarios(ctx: _Ctx, obj: Any) -> tuple[TransitionScenario, ...]:
    if obj == "builtin":
        return tuple(builtin_scenarios())
    if not isinstance(obj, list) or not obj:
        raise UnitViolation("'scenarios' must be \"builtin\" or a non-empty list")
    out = []
    for i, entry in enumerate(obj):
        path = f"scenarios[{i}]"
        if not isinstance(entry, dict):
            raise MalformedDocument(f"'{path}' must be an object")
        ctx.reject_unknown(entry, _SCENARIO_KEYS, path)
        name = ctx.require(entry, "name", f"{path}.name")
        if not isinstance(name, str) or not name:
            raise UnitViolation(f"'{path}.name' must be a non-empty string")
        altitude = ctx.number(entry, "altitude_m", f"{path}.altitude_m")
        if altitude < 0.0:
            raise UnitViolation(f"'{path}.altitude_m' must be >= 0, got {altitude}")
        forward = ctx.number(entry, "forward_velocity_m_s", f"{path}.forward_velocity_m_s")
        if forward < 0.0:
            raise UnitViolation(f"'{path}.forward_velocity_m_s' must be >= 0, got {forward}")
        out.append(
            TransitionScenario(
                name=name,
                altitude=altitude,
                vertical_velocity=ctx.number(
                    entry, "vertical_velocity_m_s", f"{path}.vertical_velocity_m_s"
                ),
                forward_velocity=forward,
            )
        )
    return tuple(out)


def parse_case_config(text: str) -> SweepPlan:
    """Parse and validate one case-config document into a SweepPlan."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedDocument("top level must be a JSON object")
    ctx = _Ctx(text)
    ctx.reject_unknown(doc, _TOP_KEYS, "")
    condition = _parse_condition(ctx, ctx.require(doc, "condition", "condition"))
    spec, modes, skip = _parse_oscillation(ctx, ctx.require(doc, "oscillation", "oscillation"))
    plant = _parse_plant(ctx, ctx.require(doc, "plant", "plant"))
    scenarios = _parse_scenarios(ctx, ctx.require(doc, "scenarios", "scenarios"))
    speed_basis = doc.get("speed_basis", "forward")
    if speed_basis not in ("forward", "total"):
        raise UnitViolation(
            f"'speed_basis' must be 'forward' or 'total', got {speed_basis!r}"
        )
    return SweepPlan(
        scenarios=scenarios,
        oscillation=spec,
        condition=condition,
        plant=plant,
        modes=modes,
        skip_cycles=skip,
        speed_basis=speed_basis,
    )


def _degrees_preimage(radians_value: float) -> float:
    """Degree value whose math.radians() reproduces the input bit-for-bit.

    math.radians(math.degrees(x)) can land one ulp off; searching the
    immediate neighbors restores the exact preimage whenever the value is
    reachable from a degree input at all (it always is for values that
    entered through a config).
    """
    d = math.degrees(radians_value)
    if math.radians(d) == radians_value:
        return d
    lo = hi = d
    for _ in range(8):
        lo = math.nextafter(lo, -math.inf)
        if math.radians(lo) == radians_value:
            return lo
        hi = math.nextafter(hi, math.inf)
        if math.radians(hi) == radians_value:
            return hi
    return d


def _plant_to_dict(plant: Plant) -> dict[str, Any]:
    if isinstance(plant, QuasiSteadyPlant):
        p = plant.coefficients
        out: dict[str, Any] = {"kind": "quasi-steady"}
        for name in QuasiSteadyCoefficients.__dataclass_fields__:
            out[name] = getattr(p, name)
        return out
    if isinstance(plant, FlatPlatePlant):
        return {"kind": "flat-plate", "pitch_axis": plant.pitch_axis, "kernel": plant.kernel}
    if isinstance(plant, IndicialPlant):
        return {
            "kind": "indicial",
            "pitch_axis": plant.pitch_axis,
            "CD0": plant.drag.CD0,
            "CD_alpha": plant.drag.CD_alpha,
            "CD_q": plant.drag.CD_q,
            "induced_drag_factor": plant.drag.induced_drag_factor,
        }
    raise TypeError(f"unknown plant type {type(plant).__name__}")


def render_case_config(plan: SweepPlan) -> str:
    """Canonical JSON rendering of a plan; parse(render(plan)) == plan."""
    cond = plan.condition
    spec = plan.oscillation
    doc = {
        "condition": {
            "speed_m_s": cond.freestream_speed,
            "sound_speed_m_s": cond.sound_speed,
            "density_kg_m3": cond.density,
            "chord_m": cond.ref_chord,
            "span_m": cond.ref_span,
            "area_m2": cond.ref_area,
        },
        "oscillation": {
            "modes": [m.value for m in plan.modes],
            "mean_incidence_deg": _degrees_preimage(spec.mean_incidence),
            "amplitude_deg": _degrees_preimage(spec.body_amplitude),
            "reduced_frequency": spec.reduced_frequency,
            "cycles": spec.cycles,
            "samples_per_cycle": spec.samples_per_cycle,
            "skip_cycles": plan.skip_cycles,
        },
        "plant": _plant_to_dict(plan.plant),
        "scenarios": [
            {
                "name": s.name,
                "altitude_m": s.altitude,
                "vertical_velocity_m_s": s.vertical_velocity,
                "forward_velocity_m_s": s.forward_velocity,
            }
            for s in plan.scenarios
        ],
        "speed_basis": plan.speed_basis,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
