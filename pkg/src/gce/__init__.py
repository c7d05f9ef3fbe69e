"""Deterministic hand-gesture interaction engine for 3D radar charts.

Layers, bottom to top:

* :mod:`gce.chart` - pure chart data model and geometry
* :mod:`gce.hands` - hand frames and posture classification
* :mod:`gce.sensor` - simulated head-mounted hand tracker
* :mod:`gce.engine` - the interaction state machine
* :mod:`gce.session` - dataset/trace/log formats, replay, stats
* :mod:`gce.scripting` - synthesized gesture traces
* :mod:`gce.service` - wire-protocol session service
* :mod:`gce.cli` - command-line front door
"""

from .chart import (
    ChartConfig,
    ChartInstance,
    Dataset,
    Entity,
    Mode,
    new_chart,
)
from .engine import (
    EngineConfig,
    EngineState,
    EventKind,
    InputSample,
    InteractionEvent,
    TaskTag,
    Viewpoint,
    initial_state,
    step,
)
from .hands import HandFrame, Posture, PostureConfig, PostureState, Side
from .sensor import DropReason, HeadPose, ObservedHand, SensorModel, TrackerState, observe
from .session import (
    GenParams,
    LogRecord,
    ReplayConfig,
    SessionStats,
    TraceRecord,
    analyze_log,
    generate_dataset,
    load_dataset,
    replay,
    replay_session,
)

__version__ = "0.1.0"

__all__ = [
    "ChartConfig",
    "ChartInstance",
    "Dataset",
    "DropReason",
    "Entity",
    "EngineConfig",
    "EngineState",
    "EventKind",
    "GenParams",
    "HandFrame",
    "HeadPose",
    "InputSample",
    "InteractionEvent",
    "LogRecord",
    "Mode",
    "ObservedHand",
    "Posture",
    "PostureConfig",
    "PostureState",
    "ReplayConfig",
    "SensorModel",
    "SessionStats",
    "Side",
    "TaskTag",
    "TraceRecord",
    "TrackerState",
    "Viewpoint",
    "analyze_log",
    "generate_dataset",
    "initial_state",
    "load_dataset",
    "new_chart",
    "observe",
    "replay",
    "replay_session",
    "step",
]
