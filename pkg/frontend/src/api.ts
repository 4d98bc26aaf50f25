import type {
  CategoryInfo,
  CurveDoc,
  ItineraryDoc,
  PlanRequestBody,
  SessionDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    const body = await response.json();
    if (!response.ok) {
      const detail =
        typeof body?.detail === "string" ? body.detail : JSON.stringify(body);
      throw new ApiError(response.status, detail);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  getCategories(): Promise<CategoryInfo[]> {
    return this.request("/categories");
  }

  createPlan(body: PlanRequestBody): Promise<SessionDoc> {
    return this.post("/plans", body);
  }

  getPlan(sessionId: string): Promise<SessionDoc> {
    return this.request(`/plans/${sessionId}`);
  }

  postNegotiation(
    sessionId: string,
    withdrawn: string[],
    allowFixed = false,
  ): Promise<SessionDoc> {
    return this.post(`/plans/${sessionId}/negotiation`, {
      withdrawn,
      allow_fixed: allowFixed,
    });
  }

  postChoice(sessionId: string, candidate: number): Promise<SessionDoc> {
    return this.post(`/plans/${sessionId}/choice`, { candidate });
  }

  compose(sessionId: string): Promise<ItineraryDoc> {
    return this.post(`/plans/${sessionId}/compose`, {});
  }

  getCurve(sessionId: string): Promise<CurveDoc> {
    return this.request(`/plans/${sessionId}/curve`);
  }
}
