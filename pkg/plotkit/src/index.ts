export { CsvSchemaError, parseCurveCsv } from "./csv.js";
export type { CurveData, CurvePointData } from "./csv.js";
export { render } from "./figure.js";
export type { FigureInput, FigureKind, FigureSpec, RenderInfo } from "./figure.js";
export { encodePng } from "./png.js";
export { Raster } from "./raster.js";
