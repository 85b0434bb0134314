/** In-memory stand-in for the kernel service, driven through fetch. */

import { EvalResponse } from "../src/api.js";

export interface Call {
  method: string;
  path: string;
  body: string | null;
}

export type EvalHandler = (session: string, src: string) => EvalResponse;

export class FakeService {
  calls: Call[] = [];
  sessions = new Set<string>();
  files = new Map<string, Map<string, string>>();
  plots = new Map<string, Record<string, unknown>>();
  private counter = 0;

  constructor(public onEval: EvalHandler = () =>
    ({ results: [], transcript: "", plots: [], error: null })) {}

  readonly fetch = async (input: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    const body = typeof init?.body === "string" ? init.body : null;
    this.calls.push({ method, path: input, body });
    return this.route(method, input, body);
  };

  private json(payload: unknown, status = 200): Response {
    return new Response(JSON.stringify(payload), {
      status,
      headers: { "content-type": "application/json" },
    });
  }

  private error(status: number, type: string, message = ""): Response {
    return this.json({ error: { type, message } }, status);
  }

  private route(method: string, path: string, body: string | null): Response {
    if (method === "POST" && path === "/v1/sessions") {
      const id = `session-${++this.counter}`;
      this.sessions.add(id);
      this.files.set(id, new Map());
      return this.json({ id }, 201);
    }
    let m = path.match(/^\/v1\/sessions\/([^/]+)\/eval$/);
    if (m && method === "POST") {
      if (!this.sessions.has(m[1])) return this.error(404, "UnknownSession");
      const { src } = JSON.parse(body ?? "{}");
      return this.json(this.onEval(m[1], src));
    }
    m = path.match(/^\/v1\/sessions\/([^/]+)\/files\/([^/]+)$/);
    if (m) {
      const store = this.files.get(m[1]);
      if (!store) return this.error(404, "UnknownSession");
      if (method === "PUT") {
        store.set(decodeURIComponent(m[2]), body ?? "");
        return this.json({ ok: true });
      }
      const content = store.get(decodeURIComponent(m[2]));
      if (content === undefined) return this.error(404, "UnknownFile");
      return new Response(content, { status: 200 });
    }
    m = path.match(/^\/v1\/sessions\/([^/]+)\/files$/);
    if (m && method === "GET") {
      const store = this.files.get(m[1]);
      if (!store) return this.error(404, "UnknownSession");
      return this.json({ files: [...store.keys()].sort() });
    }
    m = path.match(/^\/v1\/sessions\/([^/]+)$/);
    if (m && method === "DELETE") {
      this.sessions.delete(m[1]);
      return this.json({ ok: true });
    }
    m = path.match(/^\/v1\/plots\/([^/]+)$/);
    if (m && method === "GET") {
      const doc = this.plots.get(m[1]);
      if (!doc) return this.error(404, "UnknownPlot");
      return this.json(doc);
    }
    return this.error(404, "NotFound", `${method} ${path}`);
  }
}
