/**
 * Typed views of the engine's output files.
 *
 * metrics.ndjson: one header record, one record per epoch, one summary.
 * report.json and samples.json: single JSON documents. Parsers throw
 * SchemaError naming the offending field and source location; nothing is
 * coerced silently.
 */

export class SchemaError extends Error {
  constructor(
    readonly source: string,
    readonly field: string,
    detail: string,
  ) {
    super(`${source}: field "${field}": ${detail}`);
    this.name = "SchemaError";
  }
}

export interface ResolvedConfig {
  alpha: number;
  batch_size: number;
  epochs: number;
  eta: number;
  eta_lambda: number;
  k: number;
  kappa: number;
  mode: string;
  n_hidden: number;
  phi: number;
  psi_b: number;
  psi_w: number;
  seed: number;
  temperature: number | null;
}

export interface MetricsHeader {
  schema_version: number;
  build: string;
  seed: number;
  dataset: string;
  n_rows: number;
  n_v: number;
  config: ResolvedConfig;
}

export interface EpochRecord {
  epoch: number;
  flip_rate: number;
  temperature: number;
  lam: number;
  reference: number;
  gap: number;
  cesaro_gap: number;
  recon_mse: number;
  theta_norm: number;
  beta_norm: number;
  beta_eff: number;
  beta_spectral: number;
  mean_abs_de: number;
}

export interface Metrics {
  header: MetricsHeader;
  epochs: EpochRecord[];
}

export interface Report {
  mode: string;
  temperature: number;
  ais: { log_z: number; ess: number; n_chains: number; n_temps: number };
  test_log_likelihood: number;
  recon_mse: number;
}

export interface Samples {
  temperature: number;
  count: number;
  shape: [number, number];
  samples: number[][];
}

type Json = Record<string, unknown>;

function asObject(value: unknown, source: string): Json {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new SchemaError(source, "(root)", "expected a JSON object");
  }
  return value as Json;
}

function num(obj: Json, field: string, source: string): number {
  const v = obj[field];
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new SchemaError(source, field, `expected a finite number, got ${JSON.stringify(v)}`);
  }
  return v;
}

function str(obj: Json, field: string, source: string): string {
  const v = obj[field];
  if (typeof v !== "string") {
    throw new SchemaError(source, field, `expected a string, got ${JSON.stringify(v)}`);
  }
  return v;
}

function parseConfig(obj: Json, source: string): ResolvedConfig {
  const raw = obj["config"];
  const cfg = asObject(raw, source);
  const t = cfg["temperature"];
  if (t !== null && (typeof t !== "number" || !Number.isFinite(t))) {
    throw new SchemaError(source, "config.temperature", "expected a finite number or null");
  }
  return {
    alpha: num(cfg, "alpha", source),
    batch_size: num(cfg, "batch_size", source),
    epochs: num(cfg, "epochs", source),
    eta: num(cfg, "eta", source),
    eta_lambda: num(cfg, "eta_lambda", source),
    k: num(cfg, "k", source),
    kappa: num(cfg, "kappa", source),
    mode: str(cfg, "mode", source),
    n_hidden: num(cfg, "n_hidden", source),
    phi: num(cfg, "phi", source),
    psi_b: num(cfg, "psi_b", source),
    psi_w: num(cfg, "psi_w", source),
    seed: num(cfg, "seed", source),
    temperature: t as number | null,
  };
}

const EPOCH_FIELDS = [
  "epoch", "flip_rate", "temperature", "lam", "reference", "gap",
  "cesaro_gap", "recon_mse", "theta_norm", "beta_norm", "beta_eff",
  "beta_spectral", "mean_abs_de",
] as const;

function parseEpoch(obj: Json, source: string): EpochRecord {
  const rec = {} as Record<(typeof EPOCH_FIELDS)[number], number>;
  for (const field of EPOCH_FIELDS) {
    rec[field] = num(obj, field, source);
  }
  return rec;
}

/** Parse the full contents of a metrics.ndjson file. */
export function parseMetrics(text: string, source: string): Metrics {
  const lines = text.split("\n").filter((l) => l.trim().length > 0);
  if (lines.length === 0) {
    throw new SchemaError(source, "(file)", "empty metrics file");
  }
  let header: MetricsHeader | null = null;
  const epochs: EpochRecord[] = [];
  lines.forEach((line, i) => {
    const where = `${source}:${i + 1}`;
    let parsed: unknown;
    try {
      parsed = JSON.parse(line);
    } catch (e) {
      throw new SchemaError(where, "(line)", `invalid JSON: ${(e as Error).message}`);
    }
    const obj = asObject(parsed, where);
    const type = str(obj, "type", where);
    if (type === "header") {
      if (str(obj, "kind", where) !== "train-metrics") {
        throw new SchemaError(where, "kind", "expected \"train-metrics\"");
      }
      header = {
        schema_version: num(obj, "schema_version", where),
        build: str(obj, "build", where),
        seed: num(obj, "seed", where),
        dataset: str(obj, "dataset", where),
        n_rows: num(obj, "n_rows", where),
        n_v: num(obj, "n_v", where),
        config: parseConfig(obj, where),
      };
    } else if (type === "epoch") {
      if (header === null) {
        throw new SchemaError(where, "type", "epoch record before header");
      }
      epochs.push(parseEpoch(obj, where));
    } else if (type !== "summary") {
      throw new SchemaError(where, "type", `unknown record type ${JSON.stringify(type)}`);
    }
  });
  if (header === null) {
    throw new SchemaError(source, "(file)", "no header record");
  }
  if (epochs.length === 0) {
    throw new SchemaError(source, "(file)", "no epoch records");
  }
  epochs.forEach((e, i) => {
    if (e.epoch !== i + 1) {
      throw new SchemaError(source, "epoch", `expected epoch ${i + 1}, got ${e.epoch}`);
    }
  });
  return { header, epochs };
}

/** Parse an evaluation report.json. */
export function parseReport(text: string, source: string): Report {
  const obj = asObject(JSON.parse(text), source);
  if (str(obj, "kind", source) !== "evaluation") {
    throw new SchemaError(source, "kind", "expected \"evaluation\"");
  }
  const ais = asObject(obj["ais"], source);
  return {
    mode: str(obj, "mode", source),
    temperature: num(obj, "temperature", source),
    ais: {
      log_z: num(ais, "log_z", source),
      ess: num(ais, "ess", source),
      n_chains: num(ais, "n_chains", source),
      n_temps: num(ais, "n_temps", source),
    },
    test_log_likelihood: num(obj, "test_log_likelihood", source),
    recon_mse: num(obj, "recon_mse", source),
  };
}

/** Parse a samples.json dump. */
export function parseSamples(text: string, source: string): Samples {
  const obj = asObject(JSON.parse(text), source);
  if (str(obj, "kind", source) !== "samples") {
    throw new SchemaError(source, "kind", "expected \"samples\"");
  }
  const count = num(obj, "count", source);
  const shapeRaw = obj["shape"];
  if (!Array.isArray(shapeRaw) || shapeRaw.length !== 2) {
    throw new SchemaError(source, "shape", "expected [rows, cols]");
  }
  const shape: [number, number] = [Number(shapeRaw[0]), Number(shapeRaw[1])];
  const samplesRaw = obj["samples"];
  if (!Array.isArray(samplesRaw) || samplesRaw.length !== count) {
    throw new SchemaError(source, "samples", `expected ${count} rows`);
  }
  const cells = shape[0] * shape[1];
  const samples = samplesRaw.map((row, i) => {
    if (!Array.isArray(row) || row.length !== cells) {
      throw new SchemaError(source, "samples", `row ${i}: expected ${cells} cells`);
    }
    return row.map((x, j) => {
      if (x !== 0 && x !== 1) {
        throw new SchemaError(source, "samples", `row ${i} cell ${j}: expected 0 or 1`);
      }
      return x as number;
    });
  });
  return { temperature: num(obj, "temperature", source), count, shape, samples };
}
