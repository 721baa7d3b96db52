export { parseTable, requireColumns, num, str, SchemaError } from "./csv.js";
export type { Table } from "./csv.js";
export { renderChart, PALETTE } from "./svg.js";
export type { ChartSpec, Series, Point, ErrorBar, Guide } from "./svg.js";
export { renderFigure, FIGURES } from "./figures.js";
