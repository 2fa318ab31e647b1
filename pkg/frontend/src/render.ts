/**
 * DOM-free rendering of field snapshots into RGBA pixel buffers.
 *
 * One pixel per grid cell, image row 0 at the top of the world (highest y);
 * main.ts blits the buffer into a canvas and scales it up with smoothing off.
 */

import type { FieldSnapshot } from "./api.js";
import { potentialColor } from "./colormap.js";

export interface FieldImage {
  width: number;
  height: number;
  pixels: Uint8ClampedArray; // RGBA, row-major from the top
}

export interface RenderOverlays {
  blocked?: [number, number][];
  path?: [number, number][];
  start?: [number, number];
  goal?: [number, number];
}

const OBSTACLE_RGB: [number, number, number] = [30, 30, 30];
const PATH_RGB: [number, number, number] = [255, 255, 255];
const START_RGB: [number, number, number] = [0, 220, 0];
const GOAL_RGB: [number, number, number] = [255, 0, 255];

export class RenderError extends Error {}

export function renderField(field: FieldSnapshot, overlays: RenderOverlays = {}): FieldImage {
  const { cols, rows, values } = field;
  if (cols <= 0 || rows <= 0) {
    throw new RenderError("field grid is empty");
  }
  if (values.length !== cols * rows) {
    throw new RenderError(
      `field dimension mismatch: ${cols}x${rows} grid but ${values.length} values`,
    );
  }
  const pixels = new Uint8ClampedArray(cols * rows * 4);
  for (let j = 0; j < rows; j++) {
    for (let i = 0; i < cols; i++) {
      putCell(pixels, cols, rows, i, j, potentialColor(values[j * cols + i] ?? 0));
    }
  }
  for (const [i, j] of overlays.blocked ?? []) {
    putCell(pixels, cols, rows, i, j, OBSTACLE_RGB);
  }
  for (const [i, j] of overlays.path ?? []) {
    putCell(pixels, cols, rows, i, j, PATH_RGB);
  }
  if (overlays.start) {
    putCell(pixels, cols, rows, overlays.start[0], overlays.start[1], START_RGB);
  }
  if (overlays.goal) {
    putCell(pixels, cols, rows, overlays.goal[0], overlays.goal[1], GOAL_RGB);
  }
  return { width: cols, height: rows, pixels };
}

export function pixelAt(image: FieldImage, i: number, j: number): [number, number, number] {
  const row = image.height - 1 - j;
  const offset = (row * image.width + i) * 4;
  return [image.pixels[offset] ?? 0, image.pixels[offset + 1] ?? 0, image.pixels[offset + 2] ?? 0];
}

function putCell(
  pixels: Uint8ClampedArray,
  cols: number,
  rows: number,
  i: number,
  j: number,
  rgb: [number, number, number],
): void {
  if (i < 0 || i >= cols || j < 0 || j >= rows) {
    return;
  }
  // Cell (i, j) with j counting up from the bottom lands on image row rows-1-j.
  const offset = ((rows - 1 - j) * cols + i) * 4;
  pixels[offset] = rgb[0];
  pixels[offset + 1] = rgb[1];
  pixels[offset + 2] = rgb[2];
  pixels[offset + 3] = 255;
}
