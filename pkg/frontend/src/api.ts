/** Typed client for the kernel's /v1 JSON API. */

export interface StatementResult {
  statement: number;
  plain: string;
  latex: string;
  plot: string | null;
}

export interface EvalError {
  statement: number;
  message: string;
  type: string;
}

export interface EvalResponse {
  results: StatementResult[];
  transcript: string;
  plots: string[];
  error: EvalError | null;
}

export interface ServiceError {
  type: string;
  message: string;
}

export class ApiError extends Error {
  constructor(public readonly status: number, public readonly detail: ServiceError) {
    super(`${detail.type}: ${detail.message}`);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.base + path, init);
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, body.error ?? { type: "Unknown", message: "" });
    }
    return body as T;
  }

  async createSession(): Promise<string> {
    const body = await this.json<{ id: string }>("/v1/sessions", { method: "POST" });
    return body.id;
  }

  async dropSession(id: string): Promise<void> {
    await this.json(`/v1/sessions/${id}`, { method: "DELETE" });
  }

  evalSource(id: string, src: string, window?: string): Promise<EvalResponse> {
    return this.json<EvalResponse>(`/v1/sessions/${id}/eval`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ src, window: window ?? null },
      ),
    });
  }

  async putFile(id: string, name: string, content: string): Promise<void> {
    await this.json(`/v1/sessions/${id}/files/${encodeURIComponent(name)}`, {
      method: "PUT",
      headers: { "content-type": "text/plain" },
      body: content,
    });
  }

  async getFile(id: string, name: string): Promise<string> {
    const response = await this.fetchImpl(
      `${this.base}/v1/sessions/${id}/files/${encodeURIComponent(name)}`);
    if (!response.ok) {
      const body = await response.json();
      throw new ApiError(response.status, body.error);
    }
    return response.text();
  }

  async listFiles(id: string): Promise<string[]> {
    const body = await this.json<{ files: string[] }>(`/v1/sessions/${id}/files`);
    return body.files;
  }

  getPlot(ref: string): Promise<Record<string, unknown>> {
    return this.json<Record<string, unknown>>(`/v1/plots/${ref}`);
  }
}
