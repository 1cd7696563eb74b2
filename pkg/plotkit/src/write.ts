import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";
import { PlotJob, render } from "./figures";
import { encodePng } from "./png";

export function renderToPng(job: PlotJob): Buffer {
  const canvas = render(job);
  return encodePng(canvas.width, canvas.height, canvas.pixels);
}

export function writeFigure(job: PlotJob, outPath: string): void {
  const png = renderToPng(job);
  mkdirSync(dirname(outPath), { recursive: true });
  writeFileSync(outPath, png);
}
