// Studio wiring: dual workspace (drawing canvas + shape viewer), toolbar,
// shadow guidance, viewpoint orbit with elevation clamp, and the workflow
// buttons driving the session API.

import { StudioClient } from './api';
import {
  defaultCanvasCamera,
  orbitCanvas,
  setLocked,
} from './camera';
import { CANVAS_SIZE, hasInk, rasterizeStrokes, rasterToPngBlob } from './stroke';
import type { CameraParams, CanvasCamera, Stroke, StrokeDocument, Tool } from './types';
import { ShapeViewer } from './viewer';

const API_BASE = (import.meta as any).env?.VITE_API_BASE ?? '';

type Mode = 'idle' | 'drawing';

class Studio {
  client = new StudioClient(API_BASE);
  doc: StrokeDocument = { strokes: [], size: CANVAS_SIZE };
  camera: CanvasCamera = defaultCanvasCamera();
  tool: Tool = 'freeform';
  brushWidth = 3;
  maskWidth = 14;
  sessionId: string | null = null;
  shadowUri: string | null = null;
  generated = false;
  pendingStroke: Stroke | null = null;
  mode: Mode = 'idle';
  busy = false;
  referenceLayer: ImageBitmap | null = null;
  shadowLayer: ImageBitmap | null = null;
  scaleAccum = 1.0;
  scaleTimer: number | undefined;
  viewer!: ShapeViewer;

  private canvas!: HTMLCanvasElement;
  private ctx!: CanvasRenderingContext2D;

  async start(): Promise<void> {
    this.canvas = document.getElementById('draw-canvas') as HTMLCanvasElement;
    const ctx = this.canvas.getContext('2d');
    if (!ctx) throw new Error('canvas 2D unsupported');
    this.ctx = ctx;
    this.viewer = new ShapeViewer(document.getElementById('viewer')!);
    this.bindToolbar();
    this.bindCanvas();
    this.bindViewpoint();
    await this.newSession((document.getElementById('category') as HTMLSelectElement).value);
    this.redraw();
  }

  status(msg: string): void {
    document.getElementById('status')!.textContent = msg;
  }

  setBusy(b: boolean): void {
    this.busy = b;
    document
      .querySelectorAll<HTMLButtonElement>('button[data-workflow]')
      .forEach((btn) => (btn.disabled = b));
    this.status(b ? 'working…' : 'ready');
  }

  cameraParams(): CameraParams {
    return { azimuth_deg: this.camera.azimuthDeg, elevation_deg: this.camera.elevationDeg };
  }

  async newSession(category: string): Promise<void> {
    const info = await this.client.createSession(category);
    this.sessionId = info.session_id;
    this.shadowUri = info.shadow_guide_uri;
    this.generated = false;
    this.doc = { strokes: [], size: CANVAS_SIZE };
    this.referenceLayer = null;
    await this.loadShadow();
    this.status(`session ${info.session_id.slice(0, 8)} (${category})`);
    this.redraw();
  }

  async loadShadow(): Promise<void> {
    if (!this.shadowUri) return;
    try {
      const blob = await this.client.fetchShadowGuide(this.shadowUri, this.cameraParams());
      this.shadowLayer = await createImageBitmap(blob);
    } catch {
      this.shadowLayer = null;
    }
    this.redraw();
  }

  bindToolbar(): void {
    document.querySelectorAll<HTMLButtonElement>('button[data-tool]').forEach((btn) => {
      btn.onclick = () => {
        this.tool = btn.dataset.tool as Tool;
        document
          .querySelectorAll('button[data-tool]')
          .forEach((b) => b.classList.toggle('active', b === btn));
      };
    });
    (document.getElementById('brush-size') as HTMLInputElement).oninput = (e) => {
      this.brushWidth = Number((e.target as HTMLInputElement).value);
    };
    (document.getElementById('mask-size') as HTMLInputElement).oninput = (e) => {
      this.maskWidth = Number((e.target as HTMLInputElement).value);
    };
    (document.getElementById('shadow-az') as HTMLInputElement).oninput = () => this.loadShadow();
    (document.getElementById('shadow-el') as HTMLInputElement).oninput = () => this.loadShadow();

    (document.getElementById('category') as HTMLSelectElement).onchange = (e) =>
      this.newSession((e.target as HTMLSelectElement).value);

    (document.getElementById('btn-clear') as HTMLButtonElement).onclick = () => {
      this.doc = { strokes: [], size: CANVAS_SIZE };
      this.redraw();
    };
    (document.getElementById('btn-lock') as HTMLButtonElement).onclick = (e) => {
      this.camera = setLocked(this.camera, !this.camera.locked);
      (e.target as HTMLButtonElement).classList.toggle('active', this.camera.locked);
    };
    (document.getElementById('btn-generate') as HTMLButtonElement).onclick = () =>
      this.submitView();
    (document.getElementById('btn-edit') as HTMLButtonElement).onclick = () => this.submitEdit();
    (document.getElementById('btn-reference') as HTMLButtonElement).onclick = () =>
      this.loadReference();
    (document.getElementById('btn-points') as HTMLInputElement).onchange = (e) =>
      this.viewer.setPointsVisible((e.target as HTMLInputElement).checked);
  }

  bindCanvas(): void {
    const pos = (ev: PointerEvent): [number, number] => {
      const rect = this.canvas.getBoundingClientRect();
      return [
        ((ev.clientX - rect.left) / rect.width) * CANVAS_SIZE,
        ((ev.clientY - rect.top) / rect.height) * CANVAS_SIZE,
      ];
    };
    this.canvas.onpointerdown = (ev) => {
      this.canvas.setPointerCapture(ev.pointerId);
      const width = this.tool === 'mask' ? this.maskWidth : this.brushWidth;
      this.pendingStroke = { tool: this.tool, points: [pos(ev)], width };
      this.mode = 'drawing';
    };
    this.canvas.onpointermove = (ev) => {
      if (this.mode !== 'drawing' || !this.pendingStroke) return;
      this.pendingStroke.points.push(pos(ev));
      this.redraw();
    };
    const finish = () => {
      if (this.pendingStroke && this.pendingStroke.points.length > 0) {
        this.doc.strokes.push(this.pendingStroke);
      }
      this.pendingStroke = null;
      this.mode = 'idle';
      this.redraw();
    };
    this.canvas.onpointerup = finish;
    this.canvas.onpointercancel = finish;

    this.canvas.onwheel = (ev) => {
      ev.preventDefault();
      if (!this.generated) return;
      // accumulate wheel zoom, debounce into one scale call
      this.scaleAccum *= ev.deltaY < 0 ? 1.05 : 1 / 1.05;
      this.scaleAccum = Math.min(Math.max(this.scaleAccum, 0.5), 2.0);
      window.clearTimeout(this.scaleTimer);
      this.scaleTimer = window.setTimeout(() => this.submitScale(), 350);
    };
  }

  private refTimer: number | undefined;

  bindViewpoint(): void {
    const orbitTo = (az: number | null, el: number | null) => {
      if (this.camera.locked) return;
      this.camera = orbitCanvas(
        this.camera,
        az === null ? 0 : az - this.camera.azimuthDeg,
        el === null ? 0 : el - this.camera.elevationDeg,
      );
      this.updateViewpointLabel();
      // a new viewpoint gets a fresh auto-rendered reference sketch
      if (this.generated) {
        window.clearTimeout(this.refTimer);
        this.refTimer = window.setTimeout(() => this.loadReference(), 400);
      }
    };
    (document.getElementById('orbit-az') as HTMLInputElement).oninput = (e) =>
      orbitTo(Number((e.target as HTMLInputElement).value), null);
    (document.getElementById('orbit-el') as HTMLInputElement).oninput = (e) =>
      orbitTo(null, Number((e.target as HTMLInputElement).value));
    this.updateViewpointLabel();
  }

  updateViewpointLabel(): void {
    document.getElementById('viewpoint-label')!.textContent =
      `az ${this.camera.azimuthDeg.toFixed(0)}° el ${this.camera.elevationDeg.toFixed(0)}°`;
  }

  async rasterPngs(): Promise<{ sketchB64: string; maskB64: string }> {
    const { sketch, mask, size } = rasterizeStrokes(this.doc);
    const toB64 = async (r: Uint8Array) => {
      const blob = await rasterToPngBlob(r, size);
      const buf = new Uint8Array(await blob.arrayBuffer());
      let s = '';
      buf.forEach((b) => (s += String.fromCharCode(b)));
      return btoa(s);
    };
    return { sketchB64: await toB64(sketch), maskB64: await toB64(mask) };
  }

  async submitView(): Promise<void> {
    if (!this.sessionId || this.busy) return;
    const { sketch } = rasterizeStrokes(this.doc);
    if (!hasInk(sketch)) {
      this.status('draw something first — the canvas is empty');
      return;
    }
    this.setBusy(true);
    try {
      const { sketchB64 } = await this.rasterPngs();
      const mode = this.generated ? 'refine' : 'generate';
      const resp = await this.client.submitView(
        this.sessionId,
        sketchB64,
        this.cameraParams(),
        mode,
      );
      this.generated = true;
      await this.showResult(resp.mesh_uri, resp.points_preview);
      this.status(`${mode} done`);
    } catch (err) {
      this.status(String(err));
    } finally {
      this.setBusy(false);
    }
  }

  async submitEdit(): Promise<void> {
    if (!this.sessionId || this.busy || !this.generated) return;
    this.setBusy(true);
    try {
      const { sketchB64, maskB64 } = await this.rasterPngs();
      const resp = await this.client.submitEdit(
        this.sessionId,
        sketchB64,
        maskB64,
        this.cameraParams(),
      );
      await this.showResult(resp.mesh_uri, resp.points_preview);
      this.status('edit applied');
    } catch (err) {
      this.status(String(err));
    } finally {
      this.setBusy(false);
    }
  }

  async submitScale(): Promise<void> {
    if (!this.sessionId || this.busy || this.scaleAccum === 1.0) return;
    const factor = this.scaleAccum;
    this.scaleAccum = 1.0;
    this.setBusy(true);
    try {
      const resp = await this.client.submitScale(this.sessionId, factor);
      await this.showResult(resp.mesh_uri, resp.points_preview);
      this.status(`scaled by ${factor.toFixed(2)}`);
    } catch (err) {
      this.status(String(err));
    } finally {
      this.setBusy(false);
    }
  }

  async loadReference(): Promise<void> {
    if (!this.sessionId || !this.generated || this.busy) return;
    this.setBusy(true);
    try {
      const blob = await this.client.fetchReferenceSketch(this.sessionId, this.cameraParams());
      this.referenceLayer = await createImageBitmap(blob);
      this.doc = { strokes: [], size: CANVAS_SIZE };
      this.status('reference sketch loaded — modify and regenerate');
      this.redraw();
    } catch (err) {
      this.status(String(err));
    } finally {
      this.setBusy(false);
    }
  }

  async showResult(meshUri: string, preview: number[][]): Promise<void> {
    const obj = await this.client.fetchMesh(meshUri);
    this.viewer.showMeshFromObj(obj);
    this.viewer.showPointPreview(preview);
  }

  redraw(): void {
    const c = this.ctx;
    c.fillStyle = '#ffffff';
    c.fillRect(0, 0, CANVAS_SIZE, CANVAS_SIZE);
    if (this.shadowLayer) {
      c.globalAlpha = 0.3; // shadow guidance under the strokes
      c.drawImage(this.shadowLayer, 0, 0, CANVAS_SIZE, CANVAS_SIZE);
      c.globalAlpha = 1.0;
    }
    if (this.referenceLayer) {
      c.globalAlpha = 0.85;
      c.drawImage(this.referenceLayer, 0, 0, CANVAS_SIZE, CANVAS_SIZE);
      c.globalAlpha = 1.0;
    }
    const doc: StrokeDocument = this.pendingStroke
      ? { strokes: [...this.doc.strokes, this.pendingStroke], size: this.doc.size }
      : this.doc;
    const { sketch, mask, size } = rasterizeStrokes(doc);
    const img = c.getImageData(0, 0, size, size);
    for (let i = 0; i < sketch.length; i++) {
      if (sketch[i]) {
        img.data[i * 4] = 20;
        img.data[i * 4 + 1] = 20;
        img.data[i * 4 + 2] = 20;
      }
      if (mask[i]) {
        img.data[i * 4] = Math.min(img.data[i * 4] + 160, 255);
        img.data[i * 4 + 1] = img.data[i * 4 + 1] * 0.6;
        img.data[i * 4 + 2] = img.data[i * 4 + 2] * 0.6;
      }
    }
    c.putImageData(img, 0, 0);
  }
}

new Studio().start().catch((err) => {
  document.getElementById('status')!.textContent = `failed to start: ${err}`;
});
