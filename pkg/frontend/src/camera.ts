// Canvas-space viewpoint control. The method itself accepts any elevation;
// drawing ergonomics clamp the canvas camera to [-15, 45] degrees, azimuth
// wraps over the full circle, and the lock flag freezes the viewpoint.

import type { CanvasCamera } from './types';

export const ELEVATION_MIN = -15;
export const ELEVATION_MAX = 45;

export function clampElevation(deg: number): number {
  return Math.min(Math.max(deg, ELEVATION_MIN), ELEVATION_MAX);
}

export function wrapAzimuth(deg: number): number {
  return ((deg % 360) + 360) % 360;
}

export function orbitCanvas(
  cam: CanvasCamera,
  deltaAzimuth: number,
  deltaElevation: number,
): CanvasCamera {
  if (cam.locked) return cam;
  return {
    azimuthDeg: wrapAzimuth(cam.azimuthDeg + deltaAzimuth),
    elevationDeg: clampElevation(cam.elevationDeg + deltaElevation),
    locked: cam.locked,
  };
}

export function setLocked(cam: CanvasCamera, locked: boolean): CanvasCamera {
  return { ...cam, locked };
}

export function defaultCanvasCamera(): CanvasCamera {
  return { azimuthDeg: 45, elevationDeg: 15, locked: false };
}
