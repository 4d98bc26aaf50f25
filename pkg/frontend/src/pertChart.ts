import { escapeHtml, formatMinutes } from "./format.js";
import type { PlanDoc } from "./types.js";

const NODE_WIDTH = 96;
const NODE_HEIGHT = 48;
const GAP = 36;
const MARGIN = 16;

/** SVG activity chart: one node per scheduled slot, critical path highlighted. */
export function renderPertChart(plan: PlanDoc): string {
  if (plan.slots.length === 0) {
    return `<p class="pert-empty">Nothing scheduled.</p>`;
  }
  const critical = new Set(plan.critical_path);
  const width = MARGIN * 2 + plan.slots.length * (NODE_WIDTH + GAP) - GAP;
  const height = NODE_HEIGHT + 2 * MARGIN + 20;
  const midY = MARGIN + NODE_HEIGHT / 2;

  const parts: string[] = [];
  plan.slots.forEach((slot, i) => {
    const x = MARGIN + i * (NODE_WIDTH + GAP);
    const isCritical = critical.has(slot.category_id);
    const float = plan.total_float[slot.category_id];
    if (i > 0) {
      const prevCritical =
        isCritical && critical.has(plan.slots[i - 1].category_id);
      parts.push(
        `<line class="edge${prevCritical ? " critical" : ""}" x1="${x - GAP}" y1="${midY}" x2="${x}" y2="${midY}"/>`,
      );
    }
    parts.push(`<g class="node${isCritical ? " critical" : ""}" data-category="${escapeHtml(slot.category_id)}">
      <title>float ${formatMinutes(float)}</title>
      <rect x="${x}" y="${MARGIN}" width="${NODE_WIDTH}" height="${NODE_HEIGHT}" rx="6"/>
      <text class="node-id" x="${x + NODE_WIDTH / 2}" y="${MARGIN + 18}">${escapeHtml(slot.category_id)}</text>
      <text class="node-slot" x="${x + NODE_WIDTH / 2}" y="${MARGIN + 36}">${formatMinutes(slot.start)}–${formatMinutes(slot.end)}</text>
    </g>`);
  });

  return `<figure class="pert-chart">
    <svg viewBox="0 0 ${width} ${height}" role="img" aria-label="activity network">
      ${parts.join("\n      ")}
    </svg>
    <figcaption>
      Critical path ${plan.critical_path.map(escapeHtml).join(" → ")},
      total <strong data-field="project_duration">${formatMinutes(plan.project_duration)}</strong> min.
    </figcaption>
  </figure>`;
}
