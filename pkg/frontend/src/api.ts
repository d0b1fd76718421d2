// REST client for the modeling session API. All session mutations go
// through these endpoints; the UI never touches session state directly.

import type { CameraParams, SessionInfo, ViewResponse } from './types';

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

async function jsonOrThrow(resp: Response): Promise<any> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = await resp.json();
      detail = body.detail ?? detail;
    } catch {
      /* keep statusText */
    }
    throw new ApiError(resp.status, String(detail));
  }
  return resp.json();
}

export class StudioClient {
  constructor(private baseUrl: string) {}

  url(path: string): string {
    return this.baseUrl.replace(/\/$/, '') + path;
  }

  async createSession(category: string): Promise<SessionInfo> {
    const resp = await fetch(this.url('/sessions'), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ category }),
    });
    return jsonOrThrow(resp);
  }

  async submitView(
    sessionId: string,
    sketchPngB64: string,
    camera: CameraParams,
    mode: 'generate' | 'refine',
  ): Promise<ViewResponse> {
    const resp = await fetch(this.url(`/sessions/${sessionId}/view`), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ sketch_png: sketchPngB64, camera, mode }),
    });
    return jsonOrThrow(resp);
  }

  async submitEdit(
    sessionId: string,
    sketchPngB64: string,
    maskPngB64: string,
    camera: CameraParams,
  ): Promise<ViewResponse> {
    const resp = await fetch(this.url(`/sessions/${sessionId}/edit`), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ sketch_png: sketchPngB64, mask_png: maskPngB64, camera }),
    });
    return jsonOrThrow(resp);
  }

  async submitScale(sessionId: string, factor: number): Promise<ViewResponse> {
    const resp = await fetch(this.url(`/sessions/${sessionId}/scale`), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ factor }),
    });
    return jsonOrThrow(resp);
  }

  async fetchMesh(meshUri: string): Promise<string> {
    const resp = await fetch(this.url(meshUri));
    if (!resp.ok) throw new ApiError(resp.status, 'mesh fetch failed');
    return resp.text();
  }

  async fetchReferenceSketch(sessionId: string, camera: CameraParams): Promise<Blob> {
    const params = new URLSearchParams({
      azimuth_deg: String(camera.azimuth_deg),
      elevation_deg: String(camera.elevation_deg),
    });
    const resp = await fetch(this.url(`/sessions/${sessionId}/reference?${params}`));
    if (!resp.ok) throw new ApiError(resp.status, 'reference fetch failed');
    return resp.blob();
  }

  async fetchShadowGuide(uri: string, camera: CameraParams): Promise<Blob> {
    const params = new URLSearchParams({
      azimuth_deg: String(camera.azimuth_deg),
      elevation_deg: String(camera.elevation_deg),
    });
    const resp = await fetch(this.url(`${uri}?${params}`));
    if (!resp.ok) throw new ApiError(resp.status, 'shadow fetch failed');
    return resp.blob();
  }
}

/** Parse OBJ text (v/f records) into flat position + index arrays. */
export function parseObj(text: string): { positions: Float32Array; indices: Uint32Array } {
  const positions: number[] = [];
  const indices: number[] = [];
  for (const line of text.split('\n')) {
    const parts = line.trim().split(/\s+/);
    if (parts[0] === 'v') {
      positions.push(Number(parts[1]), Number(parts[2]), Number(parts[3]));
    } else if (parts[0] === 'f') {
      const idx = parts.slice(1).map((p) => Number(p.split('/')[0]) - 1);
      for (let i = 1; i + 1 < idx.length; i++) {
        indices.push(idx[0], idx[i], idx[i + 1]);
      }
    }
  }
  return { positions: new Float32Array(positions), indices: new Uint32Array(indices) };
}
