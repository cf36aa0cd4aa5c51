import type {
  DesignSpaceResponse,
  ExplainResponse,
  PredictResponse,
  ResultPair,
  RoomConfigDraft,
} from "./types.js";

// Thin client over the four service endpoints.  The base URL defaults to the
// local service but can be overridden with ?service=http://host:port.

export class ServiceClient {
  constructor(readonly baseUrl: string) {}

  private async get<T>(path: string): Promise<T> {
    const resp = await fetch(`${this.baseUrl}${path}`);
    if (!resp.ok) {
      throw new Error(`${path} failed: HTTP ${resp.status}`);
    }
    return (await resp.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await fetch(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    const payload = await resp.json();
    if (!resp.ok) {
      const detail = payload.detail ?? payload.field ?? "";
      throw new Error(`${payload.error ?? `HTTP ${resp.status}`}${detail ? `: ${detail}` : ""}`);
    }
    return payload as T;
  }

  health(): Promise<{ status: string; model_digest: string }> {
    return this.get("/health");
  }

  designSpace(): Promise<DesignSpaceResponse> {
    return this.get("/design-space");
  }

  predict(draft: RoomConfigDraft): Promise<PredictResponse> {
    return this.post("/predict", draft);
  }

  explain(draft: RoomConfigDraft): Promise<ExplainResponse> {
    return this.post("/explain", draft);
  }

  /** The /predict + /explain pair a draft change dispatches. */
  async evaluate(draft: RoomConfigDraft): Promise<ResultPair> {
    const [prediction, explanation] = await Promise.all([
      this.predict(draft),
      this.explain(draft),
    ]);
    return { prediction, explanation };
  }
}

export function serviceBaseUrl(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("service") ?? "http://127.0.0.1:8080";
}
