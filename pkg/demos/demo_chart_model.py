"""Walk through the chart data model: windows, zoom history, sort, filter.

Run:  python demos/demo_chart_model.py
"""

from gce import GenParams, generate_dataset
from gce.chart import (
    Mode,
    cycle_mode,
    event_gap_m,
    event_to_height,
    filter_variable,
    height_to_event,
    info_panel,
    new_chart,
    reset_chart,
    select_time_event,
    select_time_range,
    zoom_in,
    zoom_out,
)

dataset = generate_dataset(GenParams(seed=7))
entity = dataset.entities[0]
chart = new_chart(entity)

print(f"chart for {entity.id}: {chart.event_count} events, "
      f"{chart.variable_count} variables, {chart.length_m} m tall")
print(f"inter-event gap: {event_gap_m(chart) * 100:.2f} cm")
print(f"event 120 sits at {event_to_height(chart, 120):.3f} m; "
      f"the event nearest 0.5 m is {height_to_event(chart, 0.5)}")

# activate, pick a day, select a range, zoom twice, then back out
chart = cycle_mode(chart)
assert chart.mode is Mode.ACTIVE_ROTATE
chart = select_time_event(chart, 120)
chart = select_time_range(chart, 30, 85)
chart = zoom_in(chart)
print(f"\nzoomed to {chart.visible_window}, history {chart.zoom_stack}")
chart = zoom_in(select_time_range(chart, 45, 70))
print(f"zoomed to {chart.visible_window}, history {chart.zoom_stack}")
chart = zoom_out(chart)
print(f"back out to {chart.visible_window}")

# reconfigure: drop a variable, inspect the slice panel
chart = cycle_mode(chart)
chart = filter_variable(chart, 2)
panel = info_panel(chart, dataset)
print(f"\nat {panel.timestamp_label} with variable 2 filtered out:")
for (name, value), (angle, radius) in zip(panel.values, panel.radar_polygon):
    print(f"  {name:>6} = {value:6.2f}   axis at {angle:.2f} rad, radius {radius:.2f}")

chart = reset_chart(chart)
print(f"\nafter reset: window {chart.visible_window}, "
      f"arrangement {chart.arrangement}, slice kept at {chart.slice_index}")
