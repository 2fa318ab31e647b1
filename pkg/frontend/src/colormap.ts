/**
 * Linear blue-to-red heat colors, matching the service's PPM export:
 * 0 renders pure blue, HEAT_V_MAX and above render pure red.
 */

export const HEAT_V_MAX = 5.0;

export function potentialColor(value: number, vMax: number = HEAT_V_MAX): [number, number, number] {
  const t = Math.min(Math.max(value / vMax, 0), 1);
  return [Math.round(255 * t), 0, Math.round(255 * (1 - t))];
}
