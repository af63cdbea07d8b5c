"""Full eVTOL transition sweep: hover, mid-transition, and wing-borne end.

Runs the stock three-scenario transition matrix.  Hover has no freestream
to nondimensionalize against, so it honestly reports static trim values
only; the two flying scenarios get the full identification, including the
rate separation.  With compressibility scaling on, the lift slope grows
with forward speed.
"""

from dynderiv import (
    FlightCondition,
    OscillationMode,
    QuasiSteadyCoefficients,
    QuasiSteadyPlant,
    SweepPlan,
    agard_ct2_preset,
    builtin_scenarios,
    run_sweep,
    trend_table,
    write_report,
)

condition = FlightCondition(
    freestream_speed=66.0,    # template value; each scenario substitutes its own
    density=1.225,
    ref_chord=0.2299,
    ref_span=0.6096,
    ref_area=0.1238,
    sound_speed=340.0,
)

plant = QuasiSteadyPlant(
    coefficients=QuasiSteadyCoefficients(
        CL0=0.2, CL_alpha=5.0, CL_q=4.0, CL_alphadot=1.5,
        CD0=0.02, CD_alpha=0.3, CD_q=0.05,
        Cm0=-0.05, Cm_alpha=-1.2, Cm_q=-3.0, Cm_alphadot=-1.0,
        mach_scaling=True,
    )
)

spec, _ = agard_ct2_preset(mode=OscillationMode.ALPHA)
plan = SweepPlan(
    scenarios=tuple(builtin_scenarios()),
    oscillation=spec,
    condition=condition,
    plant=plant,
)

report = run_sweep(plan)
machine, human = write_report(report)
print(human)

print("trend across forward speed (compressibility scaling on):")
table = trend_table(report)
for row in table.rows:
    if row.quantity in ("CL_alpha", "Cm_q", "Cm_damping"):
        cells = ", ".join(
            f"{v:+.4f} @ {s:g} m/s" for v, s in zip(row.values, row.speeds)
        )
        print(f"  {row.quantity:12} {cells}   -> {row.annotation}")

print("\nmachine-readable rows (report.csv format):")
for line in machine.splitlines()[:5]:
    print(" ", line)
print("  ...")
