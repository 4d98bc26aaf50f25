import { ApiClient, ApiError } from "./api.js";
import { renderCurve } from "./curve.js";
import { renderPertChart } from "./pertChart.js";
import { renderItinerary, renderSession, renderWizardForm } from "./wizard.js";
import type { SessionDoc } from "./types.js";

const api = new ApiClient("");
let sessionId: string | null = null;

function byId(id: string): HTMLElement {
  return document.getElementById(id)!;
}

async function showSession(session: SessionDoc): Promise<void> {
  sessionId = session.session_id;
  byId("session").innerHTML = renderSession(session);
  const extras = byId("extras");
  if (session.state === "done" && session.outcome?.plan) {
    const curve = await api.getCurve(session.session_id);
    extras.innerHTML =
      renderPertChart(session.outcome.plan) + renderCurve(curve);
    byId("actions").innerHTML = `<button id="compose">Book it</button>`;
  } else {
    extras.innerHTML = "";
    byId("actions").innerHTML = "";
  }
}

function reportError(error: unknown): void {
  const message =
    error instanceof ApiError
      ? `${error.status}: ${error.message}`
      : String(error);
  byId("errors").textContent = message;
}

async function handle(action: () => Promise<SessionDoc>): Promise<void> {
  byId("errors").textContent = "";
  try {
    await showSession(await action());
  } catch (error) {
    reportError(error);
  }
}

document.addEventListener("submit", (event) => {
  const form = event.target as HTMLFormElement;
  event.preventDefault();
  if (form.id === "plan-form") {
    const data = new FormData(form);
    void handle(() =>
      api.createPlan({
        deadline: Number(data.get("deadline")),
        interactive: data.get("interactive") === "on",
      }),
    );
  } else if (form.id === "negotiation-form" && sessionId) {
    const withdrawn = Array.from(
      form.querySelectorAll<HTMLInputElement>("input[name=withdraw]:checked"),
    ).map((input) => input.value);
    void handle(() => api.postNegotiation(sessionId!, withdrawn));
  } else if (form.id === "tie-form" && sessionId) {
    const picked = form.querySelector<HTMLInputElement>(
      "input[name=tie]:checked",
    );
    void handle(() => api.postChoice(sessionId!, Number(picked?.value ?? 0)));
  }
});

document.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  if (target.id === "compose" && sessionId) {
    byId("errors").textContent = "";
    api
      .compose(sessionId)
      .then((itinerary) => {
        byId("actions").innerHTML = renderItinerary(itinerary);
      })
      .catch(reportError);
  } else if (target.id === "negotiation-decline" && sessionId) {
    void handle(() => api.postNegotiation(sessionId!, []));
  }
});

async function boot(): Promise<void> {
  try {
    const [categories, scenario] = await Promise.all([
      api.getCategories(),
      fetch("/scenario").then((r) => r.json()),
    ]);
    byId("form").innerHTML = renderWizardForm(categories, scenario.deadline);
  } catch (error) {
    reportError(error);
  }
}

void boot();
