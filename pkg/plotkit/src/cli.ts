#!/usr/bin/env node
/**
 * plotkit <kind> --in FILE [FILE ...] --out FILE.png [--width W] [--height H]
 *
 * Kinds: trace, spectrum, colormap, kld_curve, heatmap, scaling_fit, pairing.
 * Inputs are the simulator's documented CSV/JSON files and are only read.
 */

import { FIGURE_KINDS, FigureKind } from "./figures";
import { SchemaError } from "./csv";
import { writeFigure } from "./write";

interface Args {
  kind: FigureKind;
  inputs: string[];
  out: string;
  width?: number;
  height?: number;
}

function parseArgs(argv: string[]): Args {
  const [kind, ...rest] = argv;
  if (!kind || !(FIGURE_KINDS as string[]).includes(kind)) {
    throw new Error(`usage: plotkit <${FIGURE_KINDS.join("|")}> --in FILES --out PNG`);
  }
  const inputs: string[] = [];
  let out: string | undefined;
  let width: number | undefined;
  let height: number | undefined;
  let mode: "in" | "none" = "none";
  for (let i = 0; i < rest.length; i++) {
    const arg = rest[i]!;
    if (arg === "--in") {
      mode = "in";
    } else if (arg === "--out") {
      mode = "none";
      out = rest[++i];
    } else if (arg === "--width") {
      mode = "none";
      width = Number(rest[++i]);
    } else if (arg === "--height") {
      mode = "none";
      height = Number(rest[++i]);
    } else if (arg.startsWith("--")) {
      throw new Error(`unknown flag ${arg}`);
    } else if (mode === "in") {
      inputs.push(arg);
    } else {
      throw new Error(`unexpected argument ${arg}`);
    }
  }
  if (inputs.length === 0 || !out) {
    throw new Error("need --in FILES and --out PNG");
  }
  return { kind: kind as FigureKind, inputs, out, width, height };
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    writeFigure(
      { kind: args.kind, inputs: args.inputs, width: args.width, height: args.height },
      args.out,
    );
    return 0;
  } catch (err) {
    const kind = err instanceof SchemaError ? "schema" : "error";
    process.stderr.write(`${kind}: ${(err as Error).message}\n`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
