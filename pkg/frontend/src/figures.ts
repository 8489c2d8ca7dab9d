export const FIGURE_KINDS = [
  "spectrum",
  "f_zeros",
  "shifted_spectrum",
  "phase",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface AxisRanges {
  xMin?: number;
  xMax?: number;
  yMin?: number;
  yMax?: number;
}

export interface FigureSpec {
  kind: FigureKind;
  /** CSV inputs; spectrum kinds take [spectrum, exceptional?]. */
  inputs: string[];
  /** Output SVG path. */
  output: string;
  axes?: AxisRanges;
  title?: string;
}

export class SpecError extends Error {}

export function validateSpec(raw: unknown): FigureSpec {
  if (typeof raw !== "object" || raw === null) {
    throw new SpecError("figure spec must be an object");
  }
  const spec = raw as Record<string, unknown>;
  if (!FIGURE_KINDS.includes(spec.kind as FigureKind)) {
    throw new SpecError(
      `kind must be one of ${FIGURE_KINDS.join(", ")}, got ${JSON.stringify(spec.kind)}`,
    );
  }
  if (
    !Array.isArray(spec.inputs) ||
    spec.inputs.length === 0 ||
    !spec.inputs.every((p) => typeof p === "string")
  ) {
    throw new SpecError("inputs must be a non-empty array of paths");
  }
  if (typeof spec.output !== "string" || spec.output.length === 0) {
    throw new SpecError("output must be a path");
  }
  const axes = spec.axes as AxisRanges | undefined;
  if (axes !== undefined) {
    for (const key of ["xMin", "xMax", "yMin", "yMax"] as const) {
      const v = axes[key];
      if (v !== undefined && typeof v !== "number") {
        throw new SpecError(`axes.${key} must be a number`);
      }
    }
  }
  return {
    kind: spec.kind as FigureKind,
    inputs: spec.inputs as string[],
    output: spec.output,
    axes,
    title: typeof spec.title === "string" ? spec.title : undefined,
  };
}
