export {
  EpochRecord,
  Metrics,
  MetricsHeader,
  Report,
  ResolvedConfig,
  Samples,
  SchemaError,
  parseMetrics,
  parseReport,
  parseSamples,
} from "./schema.js";
export {
  DECOMPOSITION_TOLERANCE,
  T_FLOOR,
  TemperatureDecomposition,
  assertDecomposition,
  decompose,
  decompositionError,
} from "./decompose.js";
export {
  flipRateFigure,
  freeEnergyFigure,
  normsFigure,
  samplesFigure,
  temperatureFigure,
} from "./figures.js";
export { RenderRequest, RenderResult, render } from "./render.js";
export { figure, fmt, sampleGrid } from "./svg.js";
