import { describe, expect, it } from "vitest";

import type { FieldSnapshot } from "../src/api.js";
import { HEAT_V_MAX, potentialColor } from "../src/colormap.js";
import { RenderError, pixelAt, renderField } from "../src/render.js";

function snapshot(cols: number, rows: number, values: number[]): FieldSnapshot {
  return { cols, rows, resolution_m: 0.1, values, version: 1 };
}

describe("potentialColor", () => {
  it("maps zero to pure blue", () => {
    expect(potentialColor(0)).toEqual([0, 0, 255]);
  });

  it("maps the scale top and beyond to pure red", () => {
    expect(potentialColor(HEAT_V_MAX)).toEqual([255, 0, 0]);
    expect(potentialColor(99)).toEqual([255, 0, 0]);
  });

  it("interpolates linearly in between", () => {
    const [r, g, b] = potentialColor(2.5);
    expect(g).toBe(0);
    expect(r).toBe(b);
  });

  it("never leaves byte range", () => {
    for (const v of [-3, 0, 0.01, 2.5, 4.99, 5, 50]) {
      for (const channel of potentialColor(v)) {
        expect(channel).toBeGreaterThanOrEqual(0);
        expect(channel).toBeLessThanOrEqual(255);
      }
    }
  });
});

describe("renderField", () => {
  it("renders an all-zero field as uniform blue", () => {
    const image = renderField(snapshot(4, 3, new Array(12).fill(0)));
    for (let i = 0; i < 4; i++) {
      for (let j = 0; j < 3; j++) {
        expect(pixelAt(image, i, j)).toEqual([0, 0, 255]);
      }
    }
  });

  it("renders value 5 cells pure red", () => {
    const values = new Array(12).fill(0);
    values[1 * 4 + 2] = 5.0; // cell (2, 1)
    const image = renderField(snapshot(4, 3, values));
    expect(pixelAt(image, 2, 1)).toEqual([255, 0, 0]);
  });

  it("draws obstacles opaque over the heat color", () => {
    const image = renderField(snapshot(4, 3, new Array(12).fill(5)), {
      blocked: [[0, 0]],
    });
    expect(pixelAt(image, 0, 0)).toEqual([30, 30, 30]);
  });

  it("overlays path, start, and goal markers", () => {
    const image = renderField(snapshot(4, 3, new Array(12).fill(0)), {
      path: [
        [1, 1],
        [2, 1],
      ],
      start: [0, 0],
      goal: [3, 2],
    });
    expect(pixelAt(image, 1, 1)).toEqual([255, 255, 255]);
    expect(pixelAt(image, 0, 0)).toEqual([0, 220, 0]);
    expect(pixelAt(image, 3, 2)).toEqual([255, 0, 255]);
  });

  it("puts the highest row of the world at the top of the image", () => {
    const values = new Array(12).fill(0);
    values[2 * 4 + 0] = 5.0; // cell (0, 2): top row of a 3-row grid
    const image = renderField(snapshot(4, 3, values));
    const offset = (0 * image.width + 0) * 4; // image row 0 = top
    expect(image.pixels[offset]).toBe(255);
  });

  it("rejects dimension mismatches", () => {
    expect(() => renderField(snapshot(4, 3, new Array(11).fill(0)))).toThrow(RenderError);
    expect(() => renderField(snapshot(0, 0, []))).toThrow(RenderError);
  });
});
