import { formatMinutes, formatProbability, formatZ } from "./format.js";
import type { CurveDoc } from "./types.js";

const WIDTH = 480;
const HEIGHT = 200;
const MARGIN = 24;

function xScale(z: number, zMin: number, zMax: number): number {
  return MARGIN + ((z - zMin) / (zMax - zMin)) * (WIDTH - 2 * MARGIN);
}

function yScale(phi: number): number {
  return HEIGHT - MARGIN - phi * (HEIGHT - 2 * MARGIN);
}

/** SVG of the cumulative normal curve with the on-time region shaded. */
export function renderCurve(curve: CurveDoc): string {
  const probability = formatProbability(curve.probability);
  const duration = formatMinutes(curve.project_duration);
  const deadline = formatMinutes(curve.deadline);

  if (curve.degenerate) {
    const met = curve.probability >= 0.5;
    return `<figure class="curve degenerate">
      <figcaption>
        All estimates are certain (zero variance): the plan takes exactly
        ${duration} min against a ${deadline} min deadline, so the on-time
        probability is a step — <strong data-field="probability">${probability}</strong>
        (deadline ${met ? "met" : "missed"}).
      </figcaption>
    </figure>`;
  }

  const zMin = curve.points[0].z;
  const zMax = curve.points[curve.points.length - 1].z;
  const path = curve.points
    .map(
      (p, i) =>
        `${i === 0 ? "M" : "L"}${xScale(p.z, zMin, zMax).toFixed(1)},${yScale(p.phi).toFixed(1)}`,
    )
    .join(" ");

  const zValue = curve.z_value!;
  const shadedPoints = curve.points.filter((p) => p.z <= zValue);
  let shade = "";
  let marker = "";
  if (shadedPoints.length > 0) {
    const area = shadedPoints
      .map(
        (p, i) =>
          `${i === 0 ? "M" : "L"}${xScale(p.z, zMin, zMax).toFixed(1)},${yScale(p.phi).toFixed(1)}`,
      )
      .join(" ");
    const last = shadedPoints[shadedPoints.length - 1];
    const lastX = xScale(last.z, zMin, zMax).toFixed(1);
    const baseline = yScale(0).toFixed(1);
    const firstX = xScale(shadedPoints[0].z, zMin, zMax).toFixed(1);
    shade = `<path class="shade" d="${area} L${lastX},${baseline} L${firstX},${baseline} Z"/>`;
    marker = `<line class="z-marker" x1="${lastX}" y1="${MARGIN}" x2="${lastX}" y2="${baseline}"/>
      <text class="z-label" x="${lastX}" y="${MARGIN - 6}">z = ${formatZ(zValue)}</text>`;
  }

  return `<figure class="curve">
    <svg viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img" aria-label="completion probability curve">
      ${shade}
      <path class="phi" d="${path}" fill="none"/>
      ${marker}
    </svg>
    <figcaption>
      Expected duration ${duration} min, deadline ${deadline} min:
      on-time probability
      <strong data-field="probability">${probability}</strong>
      at z = <span data-field="z_value">${formatZ(zValue)}</span>.
    </figcaption>
  </figure>`;
}
