import { escapeHtml, formatMinutes, formatProbability } from "./format.js";
import type {
  CategoryInfo,
  ItineraryDoc,
  PlanDoc,
  SessionDoc,
} from "./types.js";

export function renderWizardForm(
  categories: CategoryInfo[],
  defaultDeadline: number,
): string {
  const rows = categories
    .map(
      (c) => `<li class="category ${c.kind}">
        <span class="cat-id">${escapeHtml(c.id)}</span>
        <span class="cat-name">${escapeHtml(c.name)}</span>
        <span class="cat-kind">${c.kind === "fixed" ? "fixed order" : "reorderable"}</span>
      </li>`,
    )
    .join("\n");
  return `<form id="plan-form" class="wizard">
    <h2>Plan a tour</h2>
    <ul class="categories">${rows}</ul>
    <label>Deadline (minutes)
      <input name="deadline" type="number" min="1" value="${defaultDeadline}">
    </label>
    <label><input name="interactive" type="checkbox" checked> ask me on conflicts</label>
    <button type="submit">Plan</button>
  </form>`;
}

export function renderPlanCard(plan: PlanDoc): string {
  const services = plan.category_order
    .map((cat) => {
      const slot = plan.slots.find((s) => s.category_id === cat)!;
      const critical = plan.critical_path.includes(cat) ? " critical" : "";
      return `<tr class="slot${critical}">
        <td>${escapeHtml(cat)}</td>
        <td>${escapeHtml(plan.choices[cat])}</td>
        <td>${formatMinutes(slot.start)}–${formatMinutes(slot.end)}</td>
      </tr>`;
    })
    .join("\n");
  const probability =
    plan.probability === null ? "?" : formatProbability(plan.probability);
  return `<section class="plan-card">
    <h3>Selected plan</h3>
    <p class="duration">Total duration: <strong data-field="project_duration">${formatMinutes(plan.project_duration)}</strong> min</p>
    <p class="probability">On-time probability: <strong data-field="probability">${probability}</strong></p>
    <table class="slots"><thead><tr><th>Category</th><th>Service</th><th>Slot</th></tr></thead>
    <tbody>${services}</tbody></table>
  </section>`;
}

export function renderNegotiationDialog(session: SessionDoc): string {
  const prompt = session.prompt;
  if (!prompt) return "";
  const options = prompt.withdrawable
    .map(
      (cat) => `<label class="withdraw-option">
        <input type="checkbox" name="withdraw" value="${escapeHtml(cat)}"> ${escapeHtml(cat)}
      </label>`,
    )
    .join("\n");
  const diagnostics = prompt.diagnostics
    .map(
      ([cat, why]) =>
        `<li><strong>${escapeHtml(cat)}</strong>: ${escapeHtml(why)}</li>`,
    )
    .join("\n");
  return `<form id="negotiation-form" class="dialog negotiation">
    <h3>No feasible plan</h3>
    <ul class="diagnostics">${diagnostics}</ul>
    <p>Withdraw categories to continue:</p>
    ${options}
    <button type="submit">Withdraw selected</button>
    <button type="button" id="negotiation-decline">Give up</button>
  </form>`;
}

export function renderTieDialog(session: SessionDoc): string {
  const ties = session.outcome?.tie ?? [];
  const rows = ties
    .map((plan, index) => {
      const ids = plan.category_order.map((c) => plan.choices[c]).join(", ");
      const probability =
        plan.probability === null ? "?" : formatProbability(plan.probability);
      // The server's deterministic default is the first candidate.
      return `<label class="tie-option">
        <input type="radio" name="tie" value="${index}"${index === 0 ? " checked" : ""}>
        ${escapeHtml(ids)} — ${formatMinutes(plan.project_duration)} min, p=${probability}
      </label>`;
    })
    .join("\n");
  return `<form id="tie-form" class="dialog tie">
    <h3>${ties.length} equally good plans</h3>
    ${rows}
    <button type="submit">Choose</button>
  </form>`;
}

export function renderFailure(session: SessionDoc): string {
  const failure = session.outcome?.failure;
  const reasons = (failure?.reasons ?? [])
    .map(
      ([cat, why]) =>
        `<li><strong>${escapeHtml(cat)}</strong>: ${escapeHtml(why)}</li>`,
    )
    .join("\n");
  const tried = failure?.orders_tried.length ?? 0;
  return `<section class="failure">
    <h3>No plan found</h3>
    <p>${tried} category orders tried.</p>
    <ul class="reasons">${reasons}</ul>
  </section>`;
}

export function renderItinerary(itinerary: ItineraryDoc): string {
  const rows = itinerary.records
    .map(
      (r) => `<tr class="booking ${r.status}">
      <td>${escapeHtml(r.service_id)}</td>
      <td>${formatMinutes(r.slot.start)}–${formatMinutes(r.slot.end)}</td>
      <td>${r.status}</td>
      <td>${escapeHtml(r.confirmation)}</td>
    </tr>`,
    )
    .join("\n");
  const heading = itinerary.ok
    ? "Itinerary booked"
    : `Booking failed at ${escapeHtml(itinerary.failed_service_id ?? "?")}`;
  return `<section class="itinerary ${itinerary.ok ? "ok" : "failed"}">
    <h3>${heading}</h3>
    <table><tbody>${rows}</tbody></table>
  </section>`;
}

export function renderSession(session: SessionDoc): string {
  switch (session.state) {
    case "awaiting_negotiation":
      return renderNegotiationDialog(session);
    case "awaiting_tie_choice":
      return renderTieDialog(session);
    case "failed":
      return renderFailure(session);
    case "done":
      return session.outcome?.plan ? renderPlanCard(session.outcome.plan) : "";
    default:
      return `<p class="status">Planning…</p>`;
  }
}
