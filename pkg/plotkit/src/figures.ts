/**
 * The seven figure kinds. Every renderer validates its input schema
 * first, then draws into a fresh canvas; rendering is a pure function of
 * the input bytes and the requested size.
 */

import { basename } from "node:path";
import { column, readJson, readTable, SchemaError, Table } from "./csv";
import { drawFrame, extent, plotArea, Rect, Scale } from "./axes";
import { BLACK, Canvas, Color, GRAY, heatColor, LIGHT_GRAY, seriesColor } from "./raster";

export type FigureKind =
  | "trace"
  | "spectrum"
  | "colormap"
  | "kld_curve"
  | "heatmap"
  | "scaling_fit"
  | "pairing";

export const FIGURE_KINDS: FigureKind[] = [
  "trace",
  "spectrum",
  "colormap",
  "kld_curve",
  "heatmap",
  "scaling_fit",
  "pairing",
];

export interface PlotJob {
  kind: FigureKind;
  inputs: string[];
  width?: number;
  height?: number;
}

export function render(job: PlotJob): Canvas {
  if (job.inputs.length === 0) throw new SchemaError("no input files given");
  const width = job.width ?? 900;
  const height = job.height ?? 560;
  switch (job.kind) {
    case "trace":
      return renderTrace(job.inputs, width, height);
    case "spectrum":
      return renderSpectrum(job.inputs, width, height);
    case "colormap":
      return renderColormap(job.inputs, width, height);
    case "kld_curve":
      return renderKldCurve(job.inputs, width, height);
    case "heatmap":
      return renderHeatmap(job.inputs, width, height);
    case "scaling_fit":
      return renderScalingFit(job.inputs, width, height);
    case "pairing":
      return renderPairing(job.inputs, width, height);
  }
}

function scales(area: Rect, xd: [number, number], yd: [number, number]): [Scale, Scale] {
  return [
    new Scale(xd[0], xd[1], area.x, area.x + area.w),
    new Scale(yd[0], yd[1], area.y + area.h, area.y), // y grows upward
  ];
}

function legend(canvas: Canvas, area: Rect, entries: string[]): void {
  let y = area.y + 6;
  for (let i = 0; i < entries.length; i++) {
    const x = area.x + area.w - 10 - canvas.textWidth(entries[i]!) - 14;
    canvas.fillRect(x, y, 8, 8, seriesColor(i));
    canvas.text(x + 12, y, entries[i]!, BLACK);
    y += 12;
  }
}

function polyline(canvas: Canvas, xs: Scale, ys: Scale, x: number[], y: number[], color: Color): void {
  for (let i = 1; i < x.length; i++) {
    const xa = x[i - 1]!;
    const ya = y[i - 1]!;
    const xb = x[i]!;
    const yb = y[i]!;
    if (![xa, ya, xb, yb].every(Number.isFinite)) continue;
    canvas.line(xs.map(xa), ys.map(ya), xs.map(xb), ys.map(yb), color);
  }
}

function dashedPolyline(canvas: Canvas, xs: Scale, ys: Scale, x: number[], y: number[], color: Color): void {
  for (let i = 1; i < x.length; i++) {
    if (i % 2 === 0) continue; // draw every other segment
    const xa = x[i - 1]!;
    const ya = y[i - 1]!;
    const xb = x[i]!;
    const yb = y[i]!;
    if (![xa, ya, xb, yb].every(Number.isFinite)) continue;
    canvas.line(xs.map(xa), ys.map(ya), xs.map(xb), ys.map(yb), color);
  }
}

// -- trace -----------------------------------------------------------------

function renderTrace(inputs: string[], width: number, height: number): Canvas {
  const tables = inputs.map((p) => readTable(p, ["n", "mx"]));
  const canvas = new Canvas(width, height);
  const area = plotArea(canvas);
  const xd = extent(tables.flatMap((t) => column(t, "n")));
  const yd: [number, number] = [-1.05, 1.05];
  const [xs, ys] = scales(area, xd, yd);
  canvas.line(area.x, ys.map(0), area.x + area.w, ys.map(0), LIGHT_GRAY);
  tables.forEach((t, i) => {
    polyline(canvas, xs, ys, column(t, "n"), column(t, "mx"), seriesColor(i));
  });
  drawFrame(canvas, area, xs, ys, { xLabel: "n (periods)", yLabel: "mx" });
  if (tables.length > 1) legend(canvas, area, inputs.map((p) => basename(p)));
  return canvas;
}

// -- spectrum ----------------------------------------------------------------

function renderSpectrum(inputs: string[], width: number, height: number): Canvas {
  const tables = inputs.map((p) => readTable(p, ["omega_tau", "amplitude"]));
  const canvas = new Canvas(width, height);
  const area = plotArea(canvas);
  const xd = extent(tables.flatMap((t) => column(t, "omega_tau")), 0.01);
  const yd = extent(tables.flatMap((t) => column(t, "amplitude")), 0.05);
  const [xs, ys] = scales(area, xd, [0, yd[1]]);
  tables.forEach((t, i) => {
    const om = column(t, "omega_tau");
    const amp = column(t, "amplitude");
    const color = seriesColor(i);
    for (let k = 0; k < om.length; k++) {
      canvas.line(xs.map(om[k]!), ys.map(0), xs.map(om[k]!), ys.map(amp[k]!), color);
    }
  });
  drawFrame(canvas, area, xs, ys, { xLabel: "omega*tau", yLabel: "amplitude" });
  if (tables.length > 1) legend(canvas, area, inputs.map((p) => basename(p)));
  return canvas;
}

// -- colormap ----------------------------------------------------------------

function cellEdges(sorted: number[]): number[] {
  const edges: number[] = [];
  for (let i = 0; i <= sorted.length; i++) {
    if (i === 0) {
      const step = sorted.length > 1 ? sorted[1]! - sorted[0]! : 1;
      edges.push(sorted[0]! - step / 2);
    } else if (i === sorted.length) {
      const step = sorted.length > 1 ? sorted[i - 1]! - sorted[i - 2]! : 1;
      edges.push(sorted[i - 1]! + step / 2);
    } else {
      edges.push((sorted[i - 1]! + sorted[i]!) / 2);
    }
  }
  return edges;
}

function renderGrid(
  canvas: Canvas,
  area: Rect,
  xsVals: number[],
  ysVals: number[],
  value: Map<string, number>,
  labels: { x: string; y: string; title?: string },
): void {
  const xSorted = [...new Set(xsVals)].sort((a, b) => a - b);
  const ySorted = [...new Set(ysVals)].sort((a, b) => a - b);
  const xEdges = cellEdges(xSorted);
  const yEdges = cellEdges(ySorted);
  const xd: [number, number] = [xEdges[0]!, xEdges[xEdges.length - 1]!];
  const yd: [number, number] = [yEdges[0]!, yEdges[yEdges.length - 1]!];
  const [xs, ys] = scales(area, xd, yd);
  const finite = [...value.values()].filter(Number.isFinite);
  const lo = Math.min(...finite);
  const hi = Math.max(...finite);
  const span = hi > lo ? hi - lo : 1;
  for (let i = 0; i < xSorted.length; i++) {
    for (let j = 0; j < ySorted.length; j++) {
      const v = value.get(`${xSorted[i]}|${ySorted[j]}`);
      if (v === undefined || !Number.isFinite(v)) continue;
      const x0 = xs.map(xEdges[i]!);
      const x1 = xs.map(xEdges[i + 1]!);
      const y0 = ys.map(yEdges[j]!);
      const y1 = ys.map(yEdges[j + 1]!);
      canvas.fillRect(
        Math.min(x0, x1),
        Math.min(y0, y1),
        Math.abs(x1 - x0) + 1,
        Math.abs(y1 - y0) + 1,
        heatColor((v - lo) / span),
      );
    }
  }
  drawFrame(canvas, area, xs, ys, { xLabel: labels.x, yLabel: labels.y, title: labels.title });
  // color bar reference marks
  const barX = area.x + area.w + 4;
  for (let k = 0; k <= 40; k++) {
    canvas.fillRect(barX, area.y + area.h - (k * area.h) / 40, 6, area.h / 40 + 1, heatColor(k / 40));
  }
}

function renderColormap(inputs: string[], width: number, height: number): Canvas {
  const table = readTable(inputs[0]!, [
    "param",
    "omega_tau",
    "amplitude_raw",
    "amplitude_maxnorm",
  ]);
  const canvas = new Canvas(width, height);
  const area = plotArea(canvas);
  const params = column(table, "param");
  const omegas = column(table, "omega_tau");
  const norm = column(table, "amplitude_maxnorm");
  const value = new Map<string, number>();
  for (let r = 0; r < params.length; r++) {
    value.set(`${params[r]}|${omegas[r]}`, norm[r]!);
  }
  const paramName = table.comments.get("param") ?? "param";
  renderGrid(canvas, area, params, omegas, value, {
    x: paramName,
    y: "omega*tau",
    title: "spectrum amplitude (max-normalized)",
  });
  return canvas;
}

// -- kld curve ---------------------------------------------------------------

function renderKldCurve(inputs: string[], width: number, height: number): Canvas {
  const tables = inputs.map((p) => readTable(p, ["param", "kld"]));
  const canvas = new Canvas(width, height);
  const area = plotArea(canvas);
  const xd = extent(tables.flatMap((t) => column(t, "param")), 0.01);
  const yd = extent(tables.flatMap((t) => column(t, "kld")));
  const [xs, ys] = scales(area, xd, yd);
  tables.forEach((t, i) => {
    const x = column(t, "param");
    const y = column(t, "kld");
    polyline(canvas, xs, ys, x, y, seriesColor(i));
    for (let k = 0; k < x.length; k++) {
      if (Number.isFinite(y[k]!)) canvas.marker(xs.map(x[k]!), ys.map(y[k]!), seriesColor(i), 3);
    }
  });
  const paramName = tables[0]!.comments.get("param") ?? "param";
  drawFrame(canvas, area, xs, ys, { xLabel: paramName, yLabel: "KLD" });
  if (tables.length > 1) legend(canvas, area, inputs.map((p) => basename(p)));
  return canvas;
}

// -- heatmap -----------------------------------------------------------------

function renderHeatmap(inputs: string[], width: number, height: number): Canvas {
  const table = readTable(inputs[0]!, ["param_outer", "param", "kld"]);
  const canvas = new Canvas(width, height);
  const area = plotArea(canvas);
  const outer = column(table, "param_outer");
  const inner = column(table, "param");
  const kld = column(table, "kld");
  const value = new Map<string, number>();
  for (let r = 0; r < outer.length; r++) {
    value.set(`${inner[r]}|${outer[r]}`, kld[r]!);
  }
  renderGrid(canvas, area, inner, outer, value, {
    x: table.comments.get("param") ?? "param",
    y: table.comments.get("param_outer") ?? "param_outer",
    title: "KLD",
  });
  return canvas;
}

// -- scaling fit ---------------------------------------------------------------

interface FitJson {
  m_a: number;
  m_b: number;
  epsilon_star: number;
  per_n: { n_sites: number; a: number; b: number }[];
  points: { n_sites: number; epsilon: number; delta_omega: number; included: boolean }[];
}

function isFitJson(obj: unknown): obj is FitJson {
  const o = obj as FitJson;
  return (
    !!o &&
    typeof o.m_a === "number" &&
    typeof o.epsilon_star === "number" &&
    Array.isArray(o.per_n) &&
    Array.isArray(o.points)
  );
}

function renderScalingFit(inputs: string[], width: number, height: number): Canvas {
  const fit = readJson(inputs[0]!);
  if (!isFitJson(fit)) {
    throw new SchemaError(`${inputs[0]}: not a splitting-scaling fit file`);
  }
  const canvas = new Canvas(width, height);
  const area = plotArea(canvas);
  const included = fit.points.filter((p) => p.included && p.delta_omega > 0);
  if (included.length === 0) throw new SchemaError("fit file has no usable points");
  const lx = included.map((p) => Math.log(p.epsilon));
  const ly = included.map((p) => Math.log(p.delta_omega));
  const xd = extent(lx);
  const yd = extent(ly);
  const [xs, ys] = scales(area, xd, yd);
  const sizes = [...new Set(fit.per_n.map((r) => r.n_sites))].sort((a, b) => a - b);
  sizes.forEach((n, i) => {
    const color = seriesColor(i);
    const mine = included.filter((p) => p.n_sites === n);
    for (const p of mine) {
      canvas.marker(xs.map(Math.log(p.epsilon)), ys.map(Math.log(p.delta_omega)), color, 4);
    }
    const row = fit.per_n.find((r) => r.n_sites === n);
    if (row && mine.length > 1) {
      const x0 = Math.min(...mine.map((p) => Math.log(p.epsilon)));
      const x1 = Math.max(...mine.map((p) => Math.log(p.epsilon)));
      canvas.line(
        xs.map(x0),
        ys.map(row.b + row.a * x0),
        xs.map(x1),
        ys.map(row.b + row.a * x1),
        color,
      );
    }
  });
  drawFrame(canvas, area, xs, ys, { xLabel: "ln(epsilon)", yLabel: "ln(delta_omega)" });
  legend(canvas, area, sizes.map((n) => `N=${n}`));
  canvas.text(
    area.x + 8,
    area.y + 6,
    `m_a=${fit.m_a.toFixed(3)} eps*=${fit.epsilon_star.toFixed(3)}`,
    GRAY,
  );
  return canvas;
}

// -- pairing -------------------------------------------------------------------

function renderPairing(inputs: string[], width: number, height: number): Canvas {
  const table = readTable(inputs[0]!, [
    "epsilon",
    "n_sites",
    "mean_log_delta_0",
    "mean_log_delta_pi",
  ]);
  const canvas = new Canvas(width, height);
  const area = plotArea(canvas);
  const eps = column(table, "epsilon");
  const ns = column(table, "n_sites");
  const d0 = column(table, "mean_log_delta_0");
  const dpi = column(table, "mean_log_delta_pi");
  const xd = extent(eps, 0.02);
  const yd = extent([...d0, ...dpi]);
  const [xs, ys] = scales(area, xd, yd);
  const sizes = [...new Set(ns)].sort((a, b) => a - b);
  sizes.forEach((n, i) => {
    const rows = eps
      .map((e, r) => ({ e, r }))
      .filter(({ r }) => ns[r] === n)
      .sort((a, b) => a.e - b.e);
    const x = rows.map(({ e }) => e);
    const y0 = rows.map(({ r }) => d0[r]!);
    const ypi = rows.map(({ r }) => dpi[r]!);
    const color = seriesColor(i);
    polyline(canvas, xs, ys, x, y0, color);
    dashedPolyline(canvas, xs, ys, x, ypi, color);
    for (let k = 0; k < x.length; k++) {
      canvas.marker(xs.map(x[k]!), ys.map(y0[k]!), color, 4);
      canvas.marker(xs.map(x[k]!), ys.map(ypi[k]!), color, 2);
    }
  });
  drawFrame(canvas, area, xs, ys, {
    xLabel: "epsilon",
    yLabel: "<log gap>  (solid: adjacent, dashed: pi-shifted)",
  });
  legend(canvas, area, sizes.map((n) => `N=${n}`));
  return canvas;
}
