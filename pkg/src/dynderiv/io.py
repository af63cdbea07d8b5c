"""Text interchange: monitor-table ingestion, series and report emission.

Series files are delimited text with header ``t,CL,CD,CM`` (absent
channels omitted) and values written in fixed decimal notation with 17
significant digits, so a parse/write round trip is bit-exact and the
files are diffable.  Monitor ingestion is deliberately tolerant about
naming (solver exports vary) and strict about values.

Nothing here embeds timestamps or other run-dependent state: identical
inputs give byte-identical outputs.
"""

from __future__ import annotations

import math
import os
import tempfile
from typing import Mapping

import numpy as np

from .errors import (
    MissingTimeColumn,
    NoCoefficientColumn,
    NonFiniteValue,
    NonMonotonicTime,
)
from .identify import validate_fit
from .scenarios import SweepReport, SweepStatus
from .series import CHANNELS, CoefficientSeries, SeriesMeta

# Case-insensitive header aliases for solver monitor exports.
TIME_ALIASES = ("t", "time", "flow-time", "flowtime")
CHANNEL_ALIASES: Mapping[str, tuple[str, ...]] = {
    "CL": ("cl", "c_l", "lift-coeff", "lift_coeff", "liftcoeff", "cl-coefficient"),
    "CD": ("cd", "c_d", "drag-coeff", "drag_coeff", "dragcoeff", "cd-coefficient"),
    "Cm": ("cm", "c_m", "pitch-mom-coeff", "pitch_mom_coeff", "cm-coefficient",
           "pitching-moment-coeff"),
}

_FILE_LABELS = {"CL": "CL", "CD": "CD", "Cm": "CM"}   # canonical header names


def format_value(x: float) -> str:
    """Fixed decimal notation, 17 significant digits: parses back bit-exactly."""
    return np.format_float_positional(x, precision=17, unique=False, fractional=False)


def _split_row(line: str) -> list[str]:
    line = line.strip()
    if "," in line:
        return [cell.strip() for cell in line.split(",")]
    return line.split()


def _match_channel(header: str, extra_aliases: Mapping[str, str] | None) -> str | None:
    token = header.strip().lower()
    if extra_aliases and token in extra_aliases:
        return extra_aliases[token]
    if token in TIME_ALIASES:
        return "time"
    for channel, aliases in CHANNEL_ALIASES.items():
        if token == channel.lower() or token in aliases:
            return channel
    return None


def parse_monitor_table(
    text: str,
    source: str = "monitor",
    extra_aliases: Mapping[str, str] | None = None,
) -> CoefficientSeries:
    """Parse a delimited coefficient-monitor export.

    The first non-comment line is the header; '#' starts a comment.  A
    time column plus at least one of the lift/drag/moment columns must be
    recognizable (``extra_aliases`` maps additional lowercase header names
    onto 'time', 'CL', 'CD' or 'Cm').  Unrecognized columns are ignored.
    Non-uniform time stamps are accepted and flagged in the metadata.
    """
    if extra_aliases:
        extra_aliases = {k.lower(): v for k, v in extra_aliases.items()}
        for target in extra_aliases.values():
            if target not in ("time",) + CHANNELS:
                raise ValueError(f"alias target must be 'time' or one of {CHANNELS}, got {target!r}")

    lines = [
        (i, line) for i, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise MissingTimeColumn("empty document: no header line found")

    header_no, header_line = lines[0]
    headers = _split_row(header_line)
    roles = [_match_channel(h, extra_aliases) for h in headers]
    if "time" not in roles:
        raise MissingTimeColumn(
            f"no time column among {headers!r} (line {header_no})"
        )
    time_idx = roles.index("time")
    channel_cols = {role: i for i, role in enumerate(roles) if role in CHANNELS}
    if not channel_cols:
        raise NoCoefficientColumn(
            f"no lift/drag/moment column among {headers!r} (line {header_no})"
        )

    times: list[float] = []
    data: dict[str, list[float]] = {ch: [] for ch in channel_cols}
    for line_no, line in lines[1:]:
        cells = _split_row(line)
        if len(cells) != len(headers):
            raise NonFiniteValue(
                f"row at line {line_no} has {len(cells)} cells, header has {len(headers)}"
            )
        def cell_value(idx: int, label: str) -> float:
            try:
                value = float(cells[idx])
            except ValueError as exc:
                raise NonFiniteValue(
                    f"column '{headers[idx]}' at line {line_no}: {cells[idx]!r} is not a number"
                ) from exc
            if not math.isfinite(value):
                raise NonFiniteValue(
                    f"column '{headers[idx]}' at line {line_no}: non-finite value {value}"
                )
            return value

        t = cell_value(time_idx, "time")
        if times and t <= times[-1]:
            raise NonMonotonicTime(
                f"time must be strictly increasing; row at line {line_no} "
                f"has t={t!r} after t={times[-1]!r}"
            )
        times.append(t)
        for channel, idx in channel_cols.items():
            data[channel].append(cell_value(idx, channel))

    if not times:
        raise NonFiniteValue("no data rows after the header")

    t = np.asarray(times)
    uniform = True
    notes: tuple[str, ...] = ()
    if len(t) > 2:
        # loose threshold: print-precision jitter in exported stamps is not
        # irregular sampling
        dt = np.diff(t)
        uniform = bool(np.max(np.abs(dt - dt[0])) <= 1e-4 * max(abs(float(dt[0])), 1e-30))
        if not uniform:
            notes = ("non-uniform time stamps",)
    meta = SeriesMeta(source=source, uniform_grid=uniform, notes=notes)
    arrays = {ch: np.asarray(v) for ch, v in data.items()}
    return CoefficientSeries(
        times=t,
        CL=arrays.get("CL"),
        CD=arrays.get("CD"),
        Cm=arrays.get("Cm"),
        meta=meta,
    )


def write_series(series: CoefficientSeries) -> str:
    """Canonical series text; parse_monitor_table inverts it bit-exactly."""
    channels = series.channels()
    header = ",".join(["t"] + [_FILE_LABELS[name] for name in channels])
    rows = [header]
    columns = [series.times] + list(channels.values())
    for i in range(len(series)):
        rows.append(",".join(format_value(float(col[i])) for col in columns))
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# Sweep reports
# ---------------------------------------------------------------------------

REPORT_COLUMNS = (
    "scenario", "channel", "V", "k",
    "C_alpha", "C_q", "C_alphadot", "damping_sum", "trim", "loop_area", "status",
)


def _fmt(value: float | None) -> str:
    """Empty cell for absent values; absence is not zero."""
    return "" if value is None else format_value(value)


def _report_rows(report: SweepReport) -> list[dict[str, str]]:
    k = report.plan.oscillation.reduced_frequency
    rows = []
    for result in report.results:
        if result.status is SweepStatus.FAILED:
            reason = (result.failure_reason or "").replace("\n", " ").replace(",", ";")
            status = f"FAILED({reason})"
        else:
            status = result.status.value
        speed = result.condition.freestream_speed if result.condition else None
        for channel in CHANNELS:
            ch = None
            if result.derivatives is not None:
                ch = result.derivatives.channels.get(channel)
            loop = result.loops.get(channel) if result.loops else None
            dynamic = result.status is SweepStatus.OK
            rows.append({
                "scenario": result.scenario.name,
                "channel": channel,
                "V": _fmt(speed if speed is not None else result.scenario.forward_velocity),
                "k": _fmt(k) if dynamic else "",
                "C_alpha": _fmt(ch.static_slope) if ch else "",
                "C_q": _fmt(ch.rate_derivative) if ch else "",
                "C_alphadot": _fmt(ch.aoa_rate_derivative) if ch else "",
                "damping_sum": _fmt(ch.damping_sum) if ch else "",
                "trim": _fmt(ch.trim_value) if ch else "",
                "loop_area": _fmt(loop.signed_area) if loop else "",
                "status": status,
            })
    return rows


def write_report(report: SweepReport) -> tuple[str, str]:
    """Render a sweep as (machine CSV, human-readable summary)."""
    rows = _report_rows(report)
    csv_lines = [",".join(REPORT_COLUMNS)]
    for row in rows:
        csv_lines.append(",".join(row[col] for col in REPORT_COLUMNS))
    machine = "\n".join(csv_lines) + "\n"

    human_lines = [
        "Forced-oscillation sweep report",
        f"reduced frequency k = {report.plan.oscillation.reduced_frequency:g}, "
        f"modes = {'+'.join(m.value for m in report.plan.modes)}, "
        f"plant = {report.plan.plant.name}",
        "derivatives are per radian; empty cells mean 'not identifiable', never zero",
        "",
    ]
    for result in report.results:
        human_lines.append(f"[{result.status.value}] {result.scenario.name}")
        s = result.scenario
        human_lines.append(
            f"  altitude {s.altitude:g} m (assumed meters), climb {s.vertical_velocity:g} m/s, "
            f"forward {s.forward_velocity:g} m/s"
        )
        if result.status is SweepStatus.FAILED:
            human_lines.append(f"  reason: {result.failure_reason}")
            human_lines.append("")
            continue
        if result.status is SweepStatus.STATIC_ONLY:
            human_lines.append("  hover: rate scales undefined, static trim values only")
        labels = ("trim", "C_alpha", "C_q", "C_alphadot", "damping", "loop_area")
        human_lines.append("  " + " ".join(["ch  "] + [f"{n:>12}" for n in labels] + ["flags"]))
        for channel in CHANNELS:
            ch = result.derivatives.channels.get(channel) if result.derivatives else None
            if ch is None:
                continue
            loop = result.loops.get(channel) if result.loops else None

            def cell(v: float | None) -> str:
                return f"{v:12.6g}" if v is not None else f"{'-':>12}"

            flags = ""
            if ch.fit is not None and result.derivatives.spec is not None:
                flags = ",".join(validate_fit(ch.fit, result.derivatives.spec)) or "-"
            cells = [
                cell(ch.trim_value), cell(ch.static_slope), cell(ch.rate_derivative),
                cell(ch.aoa_rate_derivative), cell(ch.damping_sum),
                cell(loop.signed_area if loop else None),
            ]
            human_lines.append("  " + " ".join([f"{channel:<4}"] + cells + [flags]))
        human_lines.append("")
    return machine, "\n".join(human_lines) + "\n"


def write_loop_table(incidence, series: CoefficientSeries) -> str:
    """Loop plot data: incidence (deg) against every coefficient channel.

    One row per sample; plotting any coefficient column against the first
    column reproduces the hysteresis loops.  Degrees, like every external
    surface.
    """
    incidence = np.asarray(incidence, dtype=float)
    if incidence.shape != series.times.shape:
        raise ValueError("incidence history and series must share one length")
    channels = series.channels()
    header = ",".join(["alpha_deg"] + [_FILE_LABELS[name] for name in channels])
    rows = [header]
    alpha_deg = np.degrees(incidence)
    columns = [alpha_deg] + list(channels.values())
    for i in range(len(series)):
        rows.append(",".join(format_value(float(col[i])) for col in columns))
    return "\n".join(rows) + "\n"


def write_derivative_table(dset) -> str:
    """Small CSV for a single identified derivative set (CLI identify)."""
    lines = ["channel,trim,C_alpha,C_q,C_alphadot,damping_sum,contamination"]
    for channel in CHANNELS:
        ch = dset.channels.get(channel)
        if ch is None:
            continue
        lines.append(",".join([
            channel,
            _fmt(ch.trim_value),
            _fmt(ch.static_slope),
            _fmt(ch.rate_derivative),
            _fmt(ch.aoa_rate_derivative),
            _fmt(ch.damping_sum),
            _fmt(ch.contamination),
        ]))
    return "\n".join(lines) + "\n"


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write text to path atomically (temp file + rename, same directory)."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise
