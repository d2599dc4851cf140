#!/usr/bin/env node
/**
 * srtrbm-plots render <metrics.ndjson...> [--samples samples.json] --out DIR
 *
 * Renders the figure families for each metrics file. The optional samples
 * file is attached to the first metrics file's run.
 */

import { render } from "./render.js";

function usage(): never {
  console.error(
    "usage: srtrbm-plots render <metrics.ndjson...> [--samples samples.json] --out DIR",
  );
  process.exit(2);
}

export function main(argv: string[]): number {
  if (argv[0] !== "render") {
    usage();
  }
  const metricsPaths: string[] = [];
  let samplesPath: string | undefined;
  let outDir: string | undefined;
  for (let i = 1; i < argv.length; i++) {
    const arg = argv[i]!;
    if (arg === "--samples") {
      samplesPath = argv[++i] ?? usage();
    } else if (arg === "--out") {
      outDir = argv[++i] ?? usage();
    } else if (arg.startsWith("--")) {
      usage();
    } else {
      metricsPaths.push(arg);
    }
  }
  if (outDir === undefined || metricsPaths.length === 0) {
    usage();
  }
  for (const [i, metricsPath] of metricsPaths.entries()) {
    let result;
    try {
      result = render({
        metricsPath,
        samplesPath: i === 0 ? samplesPath : undefined,
        outDir,
      });
    } catch (e) {
      console.error(`srtrbm-plots: ${(e as Error).message}`);
      return 1;
    }
    for (const f of result.files) {
      console.log(f);
    }
  }
  return 0;
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
