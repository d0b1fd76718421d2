// Stroke-document rasterization. This mirrors the server's reference
// rasterizer stroke for stroke: polylines stamped as filled discs at
// unit-spaced samples, drawn in document order; the eraser clears ink and
// mask strokes accumulate on their own channel. Keeping the arithmetic
// identical on both sides is what the 1 px round-trip tolerance relies on.

import type { Stroke, StrokeDocument } from './types';

export const CANVAS_SIZE = 256;

function stamp(
  raster: Uint8Array,
  size: number,
  cx: number,
  cy: number,
  radius: number,
  value: number,
): void {
  const r = Math.max(radius, 0.5);
  const x0 = Math.max(Math.floor(cx - r), 0);
  const x1 = Math.min(Math.ceil(cx + r), size - 1);
  const y0 = Math.max(Math.floor(cy - r), 0);
  const y1 = Math.min(Math.ceil(cy + r), size - 1);
  for (let y = y0; y <= y1; y++) {
    for (let x = x0; x <= x1; x++) {
      const dx = x - cx;
      const dy = y - cy;
      if (dx * dx + dy * dy <= r * r) raster[y * size + x] = value;
    }
  }
}

function strokePoints(stroke: Stroke): [number, number][] {
  if (stroke.tool === 'line' && stroke.points.length >= 2) {
    return [stroke.points[0], stroke.points[stroke.points.length - 1]];
  }
  return stroke.points;
}

export interface RasterPair {
  sketch: Uint8Array;
  mask: Uint8Array;
  size: number;
}

export function rasterizeStrokes(doc: StrokeDocument): RasterPair {
  const size = doc.size || CANVAS_SIZE;
  const sketch = new Uint8Array(size * size);
  const mask = new Uint8Array(size * size);
  for (const stroke of doc.strokes) {
    const pts = strokePoints(stroke);
    if (pts.length === 0) continue;
    const radius = stroke.width / 2;
    let target = sketch;
    let value = 1;
    if (stroke.tool === 'mask') {
      target = mask;
    } else if (stroke.tool === 'eraser') {
      value = 0;
    }
    let [px, py] = pts[0];
    stamp(target, size, px, py, radius, value);
    for (let i = 1; i < pts.length; i++) {
      const [cx, cy] = pts[i];
      const dist = Math.hypot(cx - px, cy - py);
      const steps = Math.max(Math.ceil(dist), 1);
      for (let s = 1; s <= steps; s++) {
        const t = s / steps;
        stamp(target, size, px + (cx - px) * t, py + (cy - py) * t, radius, value);
      }
      px = cx;
      py = cy;
    }
  }
  return { sketch, mask, size };
}

export function hasInk(raster: Uint8Array): boolean {
  return raster.some((v) => v > 0);
}

/** Raster -> PNG bytes via a canvas; browser-only (tests use pngjs instead). */
export async function rasterToPngBlob(raster: Uint8Array, size: number): Promise<Blob> {
  const canvas = document.createElement('canvas');
  canvas.width = size;
  canvas.height = size;
  const ctx = canvas.getContext('2d');
  if (!ctx) throw new Error('2D canvas unsupported');
  const img = ctx.createImageData(size, size);
  for (let i = 0; i < raster.length; i++) {
    const v = raster[i] ? 255 : 0;
    img.data[i * 4] = v;
    img.data[i * 4 + 1] = v;
    img.data[i * 4 + 2] = v;
    img.data[i * 4 + 3] = 255;
  }
  ctx.putImageData(img, 0, 0);
  return new Promise((resolve, reject) =>
    canvas.toBlob((b) => (b ? resolve(b) : reject(new Error('toBlob failed'))), 'image/png'),
  );
}
