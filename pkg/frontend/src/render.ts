/**
 * File-level rendering: read metrics (and optionally samples), validate,
 * build every figure in memory, then write. A validation failure leaves
 * the output directory untouched; inputs are only ever read.
 */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { basename, dirname, join } from "node:path";

import { assertDecomposition } from "./decompose.js";
import {
  flipRateFigure,
  freeEnergyFigure,
  normsFigure,
  samplesFigure,
  temperatureFigure,
} from "./figures.js";
import { parseMetrics, parseSamples } from "./schema.js";

export interface RenderRequest {
  metricsPath: string;
  samplesPath?: string;
  outDir: string;
  /** filename prefix; defaults to the metrics file's parent directory name */
  prefix?: string;
}

export interface RenderResult {
  files: string[];
}

export function render(req: RenderRequest): RenderResult {
  const metricsText = readFileSync(req.metricsPath, "utf8");
  const metrics = parseMetrics(metricsText, req.metricsPath);
  assertDecomposition(metrics, req.metricsPath);

  const prefix = req.prefix ?? basename(dirname(req.metricsPath));
  const outputs: Array<[string, string]> = [
    [`${prefix}-flip-rate.svg`, flipRateFigure(metrics)],
    [`${prefix}-temperature.svg`, temperatureFigure(metrics)],
    [`${prefix}-norms.svg`, normsFigure(metrics)],
    [`${prefix}-free-energy.svg`, freeEnergyFigure(metrics)],
  ];
  if (req.samplesPath !== undefined) {
    const samples = parseSamples(readFileSync(req.samplesPath, "utf8"), req.samplesPath);
    outputs.push([`${prefix}-samples.svg`, samplesFigure(samples)]);
  }

  mkdirSync(req.outDir, { recursive: true });
  const files: string[] = [];
  for (const [name, svg] of outputs) {
    const path = join(req.outDir, name);
    writeFileSync(path, svg, "utf8");
    files.push(path);
  }
  return { files };
}
