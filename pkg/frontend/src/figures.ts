/**
 * Figure families built from logged fields only. Each function returns a
 * complete SVG document string.
 */

import { decompose } from "./decompose.js";
import { Metrics, Samples } from "./schema.js";
import { figure, sampleGrid, Series } from "./svg.js";

function epochs(metrics: Metrics): number[] {
  return metrics.epochs.map((e) => e.epoch);
}

function series(metrics: Metrics, label: string, pick: (e: Metrics["epochs"][number]) => number): Series {
  return { label, x: epochs(metrics), y: metrics.epochs.map(pick) };
}

/** Flip rate per epoch together with the controller's moving reference. */
export function flipRateFigure(metrics: Metrics): string {
  return figure([
    {
      title: "Flip rate and adaptive reference",
      yLabel: "flips per unit per sweep",
      series: [
        series(metrics, "flip rate", (e) => e.flip_rate),
        { ...series(metrics, "reference", (e) => e.reference), dashed: true },
      ],
    },
  ]);
}

/**
 * Temperature trajectory with its micro and macro components. The two
 * component panels recompose into the logged trajectory; render() checks
 * this before any file is written.
 */
export function temperatureFigure(metrics: Metrics): string {
  const parts = decompose(metrics);
  const x = epochs(metrics);
  return figure([
    {
      title: "Sampling temperature",
      yLabel: "T",
      series: [series(metrics, "temperature", (e) => e.temperature)],
    },
    {
      title: "Micro component exp(lambda)",
      yLabel: "exp(lambda)",
      series: [{ label: "exp(lambda)", x, y: parts.map((d) => d.micro), color: "#d1495b" }],
    },
    {
      title: "Macro component kappa * mean free-energy gap",
      yLabel: "kappa * gap",
      series: [{ label: "kappa * cesaro gap", x, y: parts.map((d) => d.macro), color: "#3a9e63" }],
    },
  ]);
}

/** Parameter norm and the three inverse-temperature summaries. */
export function normsFigure(metrics: Metrics): string {
  return figure([
    {
      title: "Parameter norm",
      yLabel: "theta norm",
      series: [series(metrics, "theta norm", (e) => e.theta_norm)],
    },
    {
      title: "Effective inverse temperatures",
      yLabel: "beta",
      series: [
        series(metrics, "beta norm", (e) => e.beta_norm),
        series(metrics, "beta eff", (e) => e.beta_eff),
        series(metrics, "beta spectral", (e) => e.beta_spectral),
      ],
    },
  ]);
}

/** Instantaneous free-energy gap against its Cesaro mean. */
export function freeEnergyFigure(metrics: Metrics): string {
  return figure([
    {
      title: "Free-energy gap, data minus model",
      yLabel: "gap",
      series: [
        series(metrics, "per-epoch gap", (e) => e.gap),
        { ...series(metrics, "cesaro mean", (e) => e.cesaro_gap), dashed: true },
      ],
    },
    {
      title: "Reconstruction error",
      yLabel: "MSE",
      series: [series(metrics, "recon MSE", (e) => e.recon_mse)],
    },
  ]);
}

/** Grid of generated configurations from a samples.json dump. */
export function samplesFigure(samples: Samples): string {
  const title = `Samples at T = ${samples.temperature.toPrecision(5)}`;
  return sampleGrid(samples.samples, samples.shape, title);
}
