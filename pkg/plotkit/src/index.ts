export { render, FIGURE_KINDS } from "./figures";
export type { FigureKind, PlotJob } from "./figures";
export { renderToPng, writeFigure } from "./write";
export { SchemaError } from "./csv";
export { Canvas } from "./raster";
export { encodePng } from "./png";
