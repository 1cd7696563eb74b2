/**
 * Linear scales, deterministic tick placement, and the standard frame
 * (box, ticks, numeric labels, axis titles) shared by all figures.
 */

import { BLACK, Canvas, Color, GRAY } from "./raster";

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export const MARGIN = { left: 64, right: 18, top: 20, bottom: 44 };

export function plotArea(canvas: Canvas): Rect {
  return {
    x: MARGIN.left,
    y: MARGIN.top,
    w: canvas.width - MARGIN.left - MARGIN.right,
    h: canvas.height - MARGIN.top - MARGIN.bottom,
  };
}

export class Scale {
  constructor(
    readonly domainMin: number,
    readonly domainMax: number,
    readonly rangeMin: number,
    readonly rangeMax: number,
  ) {}

  map(v: number): number {
    const span = this.domainMax - this.domainMin;
    const t = span === 0 ? 0.5 : (v - this.domainMin) / span;
    return this.rangeMin + t * (this.rangeMax - this.rangeMin);
  }
}

export function extent(values: number[], padFraction = 0.04): [number, number] {
  const finite = values.filter((v) => Number.isFinite(v));
  if (finite.length === 0) return [0, 1];
  let lo = Math.min(...finite);
  let hi = Math.max(...finite);
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const pad = (hi - lo) * padFraction;
  return [lo - pad, hi + pad];
}

export function ticks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo;
  if (!(span > 0)) return [lo];
  const step = niceStep(span / count);
  const first = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = first; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  if (norm <= 1) return mag;
  if (norm <= 2) return 2 * mag;
  if (norm <= 5) return 5 * mag;
  return 10 * mag;
}

export function formatTick(v: number): string {
  if (v === 0) return "0";
  const abs = Math.abs(v);
  if (abs >= 10000 || abs < 0.001) return v.toExponential(1).replace("e", "e");
  const s = v.toPrecision(4);
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}

export interface FrameOptions {
  xLabel: string;
  yLabel: string;
  title?: string;
}

export function drawFrame(
  canvas: Canvas,
  area: Rect,
  xs: Scale,
  ys: Scale,
  opts: FrameOptions,
): void {
  const frame: Color = BLACK;
  canvas.line(area.x, area.y, area.x + area.w, area.y, frame);
  canvas.line(area.x, area.y + area.h, area.x + area.w, area.y + area.h, frame);
  canvas.line(area.x, area.y, area.x, area.y + area.h, frame);
  canvas.line(area.x + area.w, area.y, area.x + area.w, area.y + area.h, frame);
  for (const t of ticks(xs.domainMin, xs.domainMax)) {
    const px = xs.map(t);
    canvas.line(px, area.y + area.h, px, area.y + area.h + 4, frame);
    canvas.textCentered(px, area.y + area.h + 7, formatTick(t), BLACK);
  }
  for (const t of ticks(ys.domainMin, ys.domainMax)) {
    const py = ys.map(t);
    canvas.line(area.x - 4, py, area.x, py, frame);
    const label = formatTick(t);
    canvas.text(area.x - 8 - canvas.textWidth(label), py - 3, label, BLACK);
  }
  canvas.textCentered(area.x + area.w / 2, canvas.height - 12, opts.xLabel, BLACK);
  drawYLabel(canvas, area, opts.yLabel);
  if (opts.title) {
    canvas.textCentered(area.x + area.w / 2, 6, opts.title, GRAY);
  }
}

/** Horizontal y-axis caption at the top-left (no rotated text). */
function drawYLabel(canvas: Canvas, area: Rect, label: string): void {
  canvas.text(4, Math.max(6, area.y - 14), label, BLACK);
}
