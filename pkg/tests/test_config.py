"""Case-config documents: strict validation and the canonical round trip."""

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynderiv import (
    FlatPlatePlant,
    IndicialPlant,
    MalformedDocument,
    MissingKey,
    OscillationMode,
    QuasiSteadyPlant,
    UnitViolation,
    UnknownKey,
    agard_ct2_preset,
    parse_case_config,
    render_case_config,
    run_sweep,
)
from dynderiv.plants import DragPolar


def base_doc():
    return {
        "condition": {
            "speed_m_s": 100.0,
            "sound_speed_m_s": None,
            "density_kg_m3": 1.225,
            "chord_m": 0.2299,
            "span_m": 0.6096,
            "area_m2": 0.1238,
        },
        "oscillation": {
            "modes": ["alpha", "q"],
            "mean_incidence_deg": 3.16,
            "amplitude_deg": 4.59,
            "reduced_frequency": 0.0811,
            "cycles": 3,
            "samples_per_cycle": 720,
            "skip_cycles": None,
        },
        "plant": {
            "kind": "quasi-steady",
            "CL0": 0.2, "CL_alpha": 5.0, "CL_q": 4.0, "CL_alphadot": 6.0,
            "CD0": 0.02, "CD_alpha": 0.3, "CD_q": 0.1,
            "Cm0": -0.05, "Cm_alpha": -1.2, "Cm_q": -3.0, "Cm_alphadot": -1.2,
            "induced_drag_factor": None,
            "mach_scaling": False,
        },
        "scenarios": "builtin",
    }


def doc_text(doc=None):
    return json.dumps(doc if doc is not None else base_doc(), indent=2)


class TestParse:
    def test_minimal_builtin_doc(self):
        plan = parse_case_config(doc_text())
        assert len(plan.scenarios) == 3
        assert plan.scenarios[0].name == "transition-beginning"
        assert plan.speed_basis == "forward"
        assert isinstance(plan.plant, QuasiSteadyPlant)
        assert plan.plant.coefficients.Cm_q == -3.0

    def test_reference_oscillation_matches_preset(self):
        plan = parse_case_config(doc_text())
        preset, _ = agard_ct2_preset(mode=OscillationMode.ALPHA)
        assert plan.oscillation == preset
        assert plan.modes == (OscillationMode.ALPHA, OscillationMode.Q)

    def test_degrees_at_the_boundary(self):
        plan = parse_case_config(doc_text())
        assert plan.oscillation.mean_incidence == math.radians(3.16)
        assert plan.oscillation.body_amplitude == math.radians(4.59)

    def test_explicit_scenario_list(self):
        doc = base_doc()
        doc["scenarios"] = [
            {"name": "one", "altitude_m": 10.0, "vertical_velocity_m_s": 0.0,
             "forward_velocity_m_s": 20.0},
        ]
        plan = parse_case_config(doc_text(doc))
        assert plan.scenarios[0].name == "one"
        assert plan.scenarios[0].forward_velocity == 20.0

    def test_flat_plate_plant(self):
        doc = base_doc()
        doc["plant"] = {"kind": "flat-plate", "pitch_axis": -0.5, "kernel": "jones"}
        plan = parse_case_config(doc_text(doc))
        assert plan.plant == FlatPlatePlant(pitch_axis=-0.5, kernel="jones")

    def test_indicial_plant(self):
        doc = base_doc()
        doc["plant"] = {"kind": "indicial", "pitch_axis": -0.5,
                        "CD0": 0.02, "CD_alpha": 0.3, "CD_q": 0.0,
                        "induced_drag_factor": 0.05}
        plan = parse_case_config(doc_text(doc))
        assert plan.plant == IndicialPlant(
            pitch_axis=-0.5,
            drag=DragPolar(CD0=0.02, CD_alpha=0.3, CD_q=0.0, induced_drag_factor=0.05),
        )


class TestErrors:
    def test_negative_chord_names_the_key(self):
        doc = base_doc()
        doc["condition"]["chord_m"] = -1.0
        with pytest.raises(UnitViolation, match="chord_m"):
            parse_case_config(doc_text(doc))

    def test_missing_key_named_with_line(self):
        doc = base_doc()
        del doc["condition"]["density_kg_m3"]
        with pytest.raises(MissingKey, match="condition.density_kg_m3"):
            parse_case_config(doc_text(doc))

    def test_unknown_key_rejected(self):
        doc = base_doc()
        doc["condition"]["color"] = "red"
        with pytest.raises(UnknownKey, match="condition.color"):
            parse_case_config(doc_text(doc))

    def test_unknown_top_level_key(self):
        doc = base_doc()
        doc["extra"] = 1
        with pytest.raises(UnknownKey, match="extra"):
            parse_case_config(doc_text(doc))

    def test_error_carries_line_number(self):
        doc = base_doc()
        doc["condition"]["chord_m"] = -1.0
        text = doc_text(doc)
        expected_line = next(
            i for i, line in enumerate(text.splitlines(), start=1) if '"chord_m"' in line
        )
        with pytest.raises(UnitViolation, match=f"line {expected_line}"):
            parse_case_config(text)

    def test_malformed_json(self):
        with pytest.raises(MalformedDocument):
            parse_case_config("{not json")

    def test_non_object_top_level(self):
        with pytest.raises(MalformedDocument):
            parse_case_config("[1, 2, 3]")

    def test_supersonic_condition_rejected(self):
        doc = base_doc()
        doc["condition"]["sound_speed_m_s"] = 50.0
        with pytest.raises(UnitViolation, match="Mach"):
            parse_case_config(doc_text(doc))

    def test_bad_mode_name(self):
        doc = base_doc()
        doc["oscillation"]["modes"] = ["alpha", "roll"]
        with pytest.raises(UnitViolation, match="modes"):
            parse_case_config(doc_text(doc))

    def test_bad_plant_kind(self):
        doc = base_doc()
        doc["plant"] = {"kind": "wind-tunnel"}
        with pytest.raises(UnitViolation, match="plant.kind"):
            parse_case_config(doc_text(doc))

    def test_string_where_number_expected(self):
        doc = base_doc()
        doc["condition"]["speed_m_s"] = "fast"
        with pytest.raises(UnitViolation, match="speed_m_s"):
            parse_case_config(doc_text(doc))


class TestRoundTrip:
    def test_parse_render_identity(self):
        plan = parse_case_config(doc_text())
        assert parse_case_config(render_case_config(plan)) == plan

    def test_render_is_byte_stable(self):
        plan = parse_case_config(doc_text())
        text = render_case_config(plan)
        assert render_case_config(parse_case_config(text)) == text

    @pytest.mark.parametrize("kind", ["flat-plate", "indicial"])
    def test_other_plants_round_trip(self, kind):
        doc = base_doc()
        if kind == "flat-plate":
            doc["plant"] = {"kind": kind, "pitch_axis": 0.25, "kernel": "theodorsen"}
        else:
            doc["plant"] = {"kind": kind, "pitch_axis": -0.3, "CD0": 0.01,
                            "CD_alpha": 0.0, "CD_q": 0.0, "induced_drag_factor": None}
        plan = parse_case_config(doc_text(doc))
        assert parse_case_config(render_case_config(plan)) == plan

    @given(
        mean_deg=st.floats(-20, 20, allow_nan=False),
        amp_deg=st.floats(0.01, 30, allow_nan=False),
        k=st.floats(0.001, 1.0, allow_nan=False),
        speed=st.floats(1.0, 300.0, allow_nan=False),
        slope=st.floats(-20, 20, allow_nan=False),
    )
    @settings(max_examples=60, deadline=None)
    def test_round_trip_identity_property(self, mean_deg, amp_deg, k, speed, slope):
        doc = base_doc()
        doc["condition"]["speed_m_s"] = speed
        doc["oscillation"]["mean_incidence_deg"] = mean_deg
        doc["oscillation"]["amplitude_deg"] = amp_deg
        doc["oscillation"]["reduced_frequency"] = k
        doc["plant"]["CL_alpha"] = slope
        plan = parse_case_config(doc_text(doc))
        assert parse_case_config(render_case_config(plan)) == plan

    def test_rendered_plan_runs(self, condition):
        # a rendered config is a complete, runnable case description
        plan = parse_case_config(render_case_config(parse_case_config(doc_text())))
        report = run_sweep(plan)
        assert len(report.results) == 3


class TestShippedSchema:
    @pytest.fixture
    def schema(self):
        jsonschema = pytest.importorskip("jsonschema")
        from importlib import resources

        with resources.files("dynderiv").joinpath("schema/case_config.schema.json").open() as fh:
            return jsonschema, json.load(fh)

    def test_rendered_config_satisfies_schema(self, schema):
        jsonschema, doc_schema = schema
        plan = parse_case_config(doc_text())
        jsonschema.validate(json.loads(render_case_config(plan)), doc_schema)

    def test_schema_rejects_negative_chord(self, schema):
        jsonschema, doc_schema = schema
        doc = base_doc()
        doc["condition"]["chord_m"] = -1.0
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(doc, doc_schema)

    def test_schema_rejects_unknown_keys(self, schema):
        jsonschema, doc_schema = schema
        doc = base_doc()
        doc["condition"]["color"] = "red"
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(doc, doc_schema)
