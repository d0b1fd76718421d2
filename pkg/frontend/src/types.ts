export type Tool = 'freeform' | 'line' | 'eraser' | 'mask';

export interface Stroke {
  tool: Tool;
  points: [number, number][];
  width: number;
}

/** Ordered strokes plus the canvas camera; rasterization is deterministic. */
export interface StrokeDocument {
  strokes: Stroke[];
  size: number;
}

export interface CanvasCamera {
  azimuthDeg: number;
  elevationDeg: number;
  locked: boolean;
}

export interface CameraParams {
  azimuth_deg: number;
  elevation_deg: number;
}

export interface ViewResponse {
  mesh_uri: string;
  points_preview: number[][];
}

export interface SessionInfo {
  session_id: string;
  shadow_guide_uri: string;
}
