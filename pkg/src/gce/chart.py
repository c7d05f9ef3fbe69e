"""3D radar chart data model.

A chart is a vertical time axis with one radial axis per data variable.
Every operation here is a pure function from one (frozen) chart value to a
new one; the interaction engine composes them and owns nothing about how
they are triggered.

Geometry conventions: the visible time window maps linearly onto
``[0, length_m]`` with both endpoints inclusive, so the first and last
visible events sit at the physical ends of the chart and the spacing
between adjacent events is ``length_m / (hi - lo)``.  Radial axes are
spaced evenly over the full circle in arrangement-list order; slot ``i``
of ``k`` active variables sits at the chart-local angle ``2*pi*i/k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum


class ChartError(Exception):
    """Base class for chart operation errors."""


class OutOfWindow(ChartError):
    pass


class InactiveChart(ChartError):
    pass


class DegenerateRange(ChartError):
    pass


class NoRangeSelected(ChartError):
    pass


class NoHistory(ChartError):
    pass


class WrongMode(ChartError):
    pass


class UnknownVariable(ChartError):
    pass


class LastVariable(ChartError):
    pass


class Mode(Enum):
    INACTIVE = "inactive"
    ACTIVE_ROTATE = "active_rotate"
    RECONFIGURE_FILTER = "reconfigure_filter"


MODE_CYCLE = {
    Mode.INACTIVE: Mode.ACTIVE_ROTATE,
    Mode.ACTIVE_ROTATE: Mode.RECONFIGURE_FILTER,
    Mode.RECONFIGURE_FILTER: Mode.INACTIVE,
}


@dataclass(frozen=True)
class Entity:
    """One data entity: a named floor position plus V time series."""

    id: str
    name: str
    position: tuple[float, float]
    series: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        for s in self.series:
            for v in s:
                if not math.isfinite(v):
                    raise ValueError(f"non-finite value in series of entity {self.id!r}")


@dataclass(frozen=True)
class Dataset:
    """A collection of entities sharing variable names and timestamps."""

    entities: tuple[Entity, ...]
    variable_names: tuple[str, ...]
    timestamps: tuple[str, ...]

    def __post_init__(self):
        v, t = len(self.variable_names), len(self.timestamps)
        if t < 2:
            raise ValueError("dataset needs at least 2 time events")
        if v < 1:
            raise ValueError("dataset needs at least 1 variable")
        seen = set()
        for e in self.entities:
            if e.id in seen:
                raise ValueError(f"duplicate entity id {e.id!r}")
            seen.add(e.id)
            if len(e.series) != v:
                raise ValueError(f"entity {e.id!r} has {len(e.series)} series, expected {v}")
            for s in e.series:
                if len(s) != t:
                    raise ValueError(f"entity {e.id!r} series length {len(s)}, expected {t}")

    def entity(self, entity_id: str) -> Entity:
        for e in self.entities:
            if e.id == entity_id:
                return e
        raise KeyError(entity_id)

    @property
    def event_count(self) -> int:
        return len(self.timestamps)


@dataclass(frozen=True)
class ChartConfig:
    """Physical chart dimensions in meters."""

    length_m: float = 1.0
    radius_m: float = 0.3


@dataclass(frozen=True)
class ChartInstance:
    """Interaction state of one chart.

    ``visible_window`` is an inclusive (lo, hi) pair of event indices,
    ``arrangement`` the active variable indices in radial order, and
    ``zoom_stack`` the strictly nested history of windows pushed by
    zoom-in operations (outermost first).
    """

    entity_id: str
    event_count: int
    variable_count: int
    length_m: float = 1.0
    radius_m: float = 0.3
    mode: Mode = Mode.INACTIVE
    yaw_rad: float = 0.0
    arrangement: tuple[int, ...] = field(default=())
    visible_window: tuple[int, int] = (0, 1)
    selected_range: tuple[int, int] | None = None
    slice_index: int = 0
    zoom_stack: tuple[tuple[int, int], ...] = ()

    def clamp_to_window(self, index: int) -> int:
        lo, hi = self.visible_window
        return max(lo, min(hi, index))

    def slot_angle(self, slot: int) -> float:
        """Chart-local angle of an arrangement slot."""
        return 2.0 * math.pi * slot / len(self.arrangement)


@dataclass(frozen=True)
class InfoPanel:
    """Details-on-demand panel contents for the current time slice."""

    timestamp_label: str
    values: tuple[tuple[str, float], ...]
    radar_polygon: tuple[tuple[float, float], ...]


def new_chart(entity: Entity, config: ChartConfig = ChartConfig()) -> ChartInstance:
    """Pristine chart: identity arrangement, full window, slice at 0."""
    v = len(entity.series)
    t = len(entity.series[0])
    return ChartInstance(
        entity_id=entity.id,
        event_count=t,
        variable_count=v,
        length_m=config.length_m,
        radius_m=config.radius_m,
        arrangement=tuple(range(v)),
        visible_window=(0, t - 1),
    )


def event_to_height(chart: ChartInstance, index: int) -> float:
    """Height in meters of an event in the visible window."""
    lo, hi = chart.visible_window
    if index < lo or index > hi:
        raise OutOfWindow(f"event {index} outside visible window ({lo}, {hi})")
    return chart.length_m * (index - lo) / (hi - lo)


def event_gap_m(chart: ChartInstance) -> float:
    """Vertical spacing between adjacent visible events."""
    lo, hi = chart.visible_window
    return chart.length_m / (hi - lo)


def height_to_event(chart: ChartInstance, h: float) -> int:
    """Nearest visible event to a height; ties round half away from zero."""
    lo, hi = chart.visible_window
    h = max(0.0, min(chart.length_m, h))
    steps = h * (hi - lo) / chart.length_m
    return lo + int(math.floor(steps + 0.5))


def normalize_value(series: tuple[float, ...], v: float) -> float:
    """Min-max position of v over the full series, clamped to [0, 1].

    The full series is used (never the visible window) so zooming does not
    rescale the radar shape; a constant series maps everything to 0.5.
    """
    lo, hi = min(series), max(series)
    if lo == hi:
        return 0.5
    return max(0.0, min(1.0, (v - lo) / (hi - lo)))


def _require_active(chart: ChartInstance) -> None:
    if chart.mode is Mode.INACTIVE:
        raise InactiveChart(f"chart {chart.entity_id!r} is inactive")


def select_time_event(chart: ChartInstance, index: int) -> ChartInstance:
    _require_active(chart)
    return replace(chart, slice_index=chart.clamp_to_window(index))


def select_time_range(chart: ChartInstance, a: int, b: int) -> ChartInstance:
    _require_active(chart)
    a = chart.clamp_to_window(a)
    b = chart.clamp_to_window(b)
    if a == b:
        raise DegenerateRange(f"range collapses to single event {a}")
    return replace(chart, selected_range=(min(a, b), max(a, b)))


def zoom_in(chart: ChartInstance) -> ChartInstance:
    _require_active(chart)
    if chart.selected_range is None:
        raise NoRangeSelected("no time range selected")
    if chart.selected_range == chart.visible_window:
        # selection spans the whole window: nothing to stretch
        raise NoRangeSelected("selected range already fills the window")
    new_window = chart.selected_range
    return replace(
        chart,
        zoom_stack=chart.zoom_stack + (chart.visible_window,),
        visible_window=new_window,
        selected_range=None,
        slice_index=max(new_window[0], min(new_window[1], chart.slice_index)),
    )


def zoom_out(chart: ChartInstance) -> ChartInstance:
    _require_active(chart)
    if not chart.zoom_stack:
        raise NoHistory("zoom history is empty")
    window = chart.zoom_stack[-1]
    return replace(
        chart,
        zoom_stack=chart.zoom_stack[:-1],
        visible_window=window,
        selected_range=None,
        slice_index=max(window[0], min(window[1], chart.slice_index)),
    )


def arrangement_slot_for_angle(chart: ChartInstance, angle: float) -> int:
    """Arrangement slot whose even-spacing interval contains an angle."""
    k = len(chart.arrangement)
    step = 2.0 * math.pi / k
    return int(math.floor(angle / step + 0.5)) % k


def apply_arrangement(chart: ChartInstance, variable: int, insert_angle: float) -> ChartInstance:
    """Move a variable to the slot nearest a chart-local angle."""
    if chart.mode is not Mode.RECONFIGURE_FILTER:
        raise WrongMode(f"sort requires reconfigure/filter mode, chart is {chart.mode.value}")
    if variable not in chart.arrangement:
        raise UnknownVariable(f"variable {variable} not in arrangement")
    slot = arrangement_slot_for_angle(chart, insert_angle)
    remaining = [v for v in chart.arrangement if v != variable]
    remaining.insert(slot, variable)
    return replace(chart, arrangement=tuple(remaining))


def filter_variable(chart: ChartInstance, variable: int) -> ChartInstance:
    """Remove a variable's axis; survivors redistribute evenly."""
    if chart.mode is not Mode.RECONFIGURE_FILTER:
        raise WrongMode(f"filter requires reconfigure/filter mode, chart is {chart.mode.value}")
    if variable not in chart.arrangement:
        raise UnknownVariable(f"variable {variable} not in arrangement")
    if len(chart.arrangement) <= 1:
        raise LastVariable("cannot remove the final axis")
    return replace(chart, arrangement=tuple(v for v in chart.arrangement if v != variable))


def reset_chart(chart: ChartInstance) -> ChartInstance:
    """Back to full window and identity arrangement; slice and yaw kept."""
    _require_active(chart)
    window = (0, chart.event_count - 1)
    return replace(
        chart,
        arrangement=tuple(range(chart.variable_count)),
        visible_window=window,
        zoom_stack=(),
        selected_range=None,
        slice_index=max(window[0], min(window[1], chart.slice_index)),
    )


def cycle_mode(chart: ChartInstance) -> ChartInstance:
    return replace(chart, mode=MODE_CYCLE[chart.mode])


def info_panel(chart: ChartInstance, dataset: Dataset) -> InfoPanel:
    _require_active(chart)
    entity = dataset.entity(chart.entity_id)
    values = []
    polygon = []
    for slot, var in enumerate(chart.arrangement):
        raw = entity.series[var][chart.slice_index]
        values.append((dataset.variable_names[var], raw))
        polygon.append((chart.slot_angle(slot), normalize_value(entity.series[var], raw)))
    return InfoPanel(
        timestamp_label=dataset.timestamps[chart.slice_index],
        values=tuple(values),
        radar_polygon=tuple(polygon),
    )
