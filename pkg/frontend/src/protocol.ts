// Wire protocol types, mirroring the session service message schema.
// One JSON object per websocket text frame.

export type Vec3 = [number, number, number];
export type Quat = [number, number, number, number]; // w, x, y, z

export interface FingerWire {
  tip: number[];
  curl: number;
}

export interface HandFrameWire {
  side: "left" | "right";
  palm_pos: number[];
  palm_normal: number[];
  palm_dir: number[];
  fingers: FingerWire[];
  t_ms: number;
}

export interface HeadWire {
  pos: number[];
  quat: number[];
}

export interface TraceRecordWire {
  t_ms: number;
  head: HeadWire;
  left: HandFrameWire | null;
  right: HandFrameWire | null;
}

export interface LogRecordWire {
  session_id: string;
  seq: number;
  t_ms: number;
  event: string;
  task_tag: string;
  chart_id: string | null;
  payload: Record<string, unknown>;
}

export interface EntityDoc {
  id: string;
  name: string;
  x: number;
  y: number;
  series: number[][];
}

export interface DatasetDoc {
  variables: string[];
  timestamps: string[];
  entities: EntityDoc[];
}

export interface ChartGeometry {
  length_m: number;
  radius_m: number;
}

export interface EngineConstants {
  gaze_dwell_ms: number;
  faraway_min_m: number;
  transit_ms: number;
  standoff_m: number;
  widget_r_m: number;
  widget_above_m: number;
  handle_offset_m: number;
  handle_height_frac: number;
  grasp_capture_m: number;
  zoom_stretch_m: number;
  zoom_clap_m: number;
  reset_arm_ms: number;
  act_radius_m: number;
  filter_snap: number;
  pause_hold_ms: number;
}

export interface ChartProjection {
  mode: "inactive" | "active_rotate" | "reconfigure_filter";
  visible_window: [number, number];
  slice_index: number;
  arrangement: number[];
  yaw_rad: number;
  selected_range: [number, number] | null;
  zoom_depth: number;
  outline: boolean;
  preview_range: [number, number] | null;
  detached_variable: number | null;
}

export interface HandHint {
  tracked: boolean;
  semitransparent: boolean;
}

export interface ViewpointWire {
  pos: number[];
  yaw: number;
}

export interface WelcomeMsg {
  type: "welcome";
  session_id: string;
  protocol_version: number;
  dataset: DatasetDoc;
  config: { chart: ChartGeometry; engine: EngineConstants };
}

export interface SnapshotMsg {
  type: "snapshot";
  t_ms: number;
  paused: boolean;
  viewpoint: ViewpointWire;
  hands: { left: HandHint; right: HandHint };
  charts: Record<string, ChartProjection>;
}

export interface StateDeltaMsg {
  type: "state_delta";
  t_ms: number;
  paused?: boolean;
  viewpoint?: ViewpointWire;
  hands?: { left: HandHint; right: HandHint };
  charts?: Record<string, ChartProjection>;
}

export interface EventMsg {
  type: "event";
  record: LogRecordWire;
}

export interface ErrorMsg {
  type: "error";
  code: string;
  message: string;
}

export type ServerMsg = WelcomeMsg | SnapshotMsg | StateDeltaMsg | EventMsg | ErrorMsg;

export type ClientMsg =
  | { type: "hello"; protocol_version: number }
  | { type: "load_dataset"; name?: string; inline?: DatasetDoc }
  | { type: "input"; record: TraceRecordWire }
  | { type: "snapshot_request" };

export const PROTOCOL_VERSION = 1;
