/**
 * Micro-macro decomposition of the logged temperature trajectory.
 *
 * For an adaptive run the engine sets T = max(e^lam + kappa * cesaro_gap,
 * T_FLOOR) from the state entering each epoch, and logs lam, cesaro_gap,
 * and T together. The plotting layer re-derives the two components from
 * the logged fields only, and refuses to render a temperature figure
 * whose components do not recompose into the logged trajectory.
 */

import { Metrics, SchemaError } from "./schema.js";

export const T_FLOOR = 1e-3;
export const DECOMPOSITION_TOLERANCE = 1e-9;

export interface TemperatureDecomposition {
  epoch: number;
  micro: number; // e^lam, the fast controller component
  macro: number; // kappa * cesaro_gap, the slow free-energy component
  composed: number; // max(micro + macro, T_FLOOR)
  logged: number;
}

export function decompose(metrics: Metrics): TemperatureDecomposition[] {
  const kappa = metrics.header.config.kappa;
  return metrics.epochs.map((e) => {
    const micro = Math.exp(e.lam);
    const macro = kappa * e.cesaro_gap;
    return {
      epoch: e.epoch,
      micro,
      macro,
      composed: Math.max(micro + macro, T_FLOOR),
      logged: e.temperature,
    };
  });
}

/**
 * Largest |composed - logged| over the run. For adaptive runs this must
 * be below DECOMPOSITION_TOLERANCE; fixed-temperature runs do not use the
 * composition and are not checked.
 */
export function decompositionError(metrics: Metrics): number {
  let worst = 0;
  for (const d of decompose(metrics)) {
    worst = Math.max(worst, Math.abs(d.composed - d.logged));
  }
  return worst;
}

export function assertDecomposition(metrics: Metrics, source: string): void {
  if (metrics.header.config.mode !== "adaptive") {
    return;
  }
  const err = decompositionError(metrics);
  if (err > DECOMPOSITION_TOLERANCE) {
    throw new SchemaError(
      source,
      "temperature",
      `micro + macro components deviate from the logged trajectory by ${err}`,
    );
  }
}
