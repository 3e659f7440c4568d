import { decodeColumn } from './events.js';
import type { ColumnPayload } from './types.js';

// Capture-state tint: green while only capturing, red while a sound is
// being recorded or recognized.
export const MONITOR_TINT: [number, number, number] = [0, 255, 0];
export const ACTIVE_TINT: [number, number, number] = [255, 0, 0];

export type Quality = 'high' | 'medium' | 'low';
export const QUALITY_COLUMN_RATES: Record<Quality, number> = {
  high: 23,
  medium: 12,
  low: 8,
};

/** The slice of CanvasRenderingContext2D the view draws with. */
export interface DrawingContext {
  fillStyle: string | CanvasGradient | CanvasPattern;
  fillRect(x: number, y: number, w: number, h: number): void;
  drawImage(
    image: CanvasImageSource,
    sx: number, sy: number, sw: number, sh: number,
    dx: number, dy: number, dw: number, dh: number,
  ): void;
  createImageData(w: number, h: number): ImageData;
  putImageData(data: ImageData, x: number, y: number): void;
}

/**
 * RGBA pixels for one display column, top row first: low frequencies at
 * the bottom, brightness from the 8-bit magnitude, tint from the
 * capture state.
 */
export function columnPixels(
  values: Uint8Array,
  state: 'monitor' | 'active',
  height: number,
): Uint8ClampedArray {
  const tint = state === 'active' ? ACTIVE_TINT : MONITOR_TINT;
  const pixels = new Uint8ClampedArray(height * 4);
  for (let y = 0; y < height; y++) {
    const start = Math.floor(((height - 1 - y) / height) * values.length);
    const end = Math.max(start + 1, Math.floor(((height - y) / height) * values.length));
    let sum = 0;
    for (let b = start; b < end; b++) sum += values[b];
    const v = sum / (end - start) / 255;
    const offset = y * 4;
    pixels[offset] = Math.round(tint[0] * v);
    pixels[offset + 1] = Math.round(tint[1] * v);
    pixels[offset + 2] = Math.round(tint[2] * v);
    pixels[offset + 3] = 255;
  }
  return pixels;
}

/**
 * Scrolling spectrogram: one pixel column per event, newest at the
 * right edge. Rendering must tolerate bursty delivery, so columns are
 * drawn immediately instead of on a timer.
 */
export class SpectrogramView {
  private ctx: DrawingContext;
  private columnStates: ('monitor' | 'active')[] = [];

  constructor(
    private canvas: HTMLCanvasElement,
    ctx?: DrawingContext,
  ) {
    const resolved = ctx ?? canvas.getContext('2d');
    if (!resolved) throw new Error('2D canvas context unavailable');
    this.ctx = resolved;
    this.clear();
  }

  clear(): void {
    this.ctx.fillStyle = '#000';
    this.ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);
    this.columnStates = [];
  }

  /** States of the currently visible columns, oldest first. */
  get visibleStates(): readonly ('monitor' | 'active')[] {
    return this.columnStates;
  }

  pushColumn(payload: ColumnPayload): void {
    const values = decodeColumn(payload.values_b64);
    const { width, height } = this.canvas;

    // scroll one pixel left
    this.ctx.drawImage(this.canvas, 1, 0, width - 1, height, 0, 0, width - 1, height);

    const column = this.ctx.createImageData(1, height);
    column.data.set(columnPixels(values, payload.state, height));
    this.ctx.putImageData(column, width - 1, 0);

    this.columnStates.push(payload.state);
    if (this.columnStates.length > width) this.columnStates.shift();
  }
}
