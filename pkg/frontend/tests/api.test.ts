import { describe, expect, it } from "vitest";
import { ApiClient, ApiError } from "../src/api.js";
import { FakeService } from "./fake.js";

describe("ApiClient", () => {
  it("creates and drops sessions", async () => {
    const svc = new FakeService();
    const api = new ApiClient("", svc.fetch);
    const id = await api.createSession();
    expect(id).toBe("session-1");
    expect(svc.sessions.has(id)).toBe(true);
    await api.dropSession(id);
    expect(svc.sessions.has(id)).toBe(false);
  });

  it("posts eval bodies as JSON with the window tag", async () => {
    const svc = new FakeService((_, src) => ({
      results: [{ statement: 0, plain: `echo:${src}`, latex: "", plot: null }],
      transcript: "",
      plots: [],
      error: null,
    }));
    const api = new ApiClient("", svc.fetch);
    const id = await api.createSession();
    const res = await api.evalSource(id, "a = 1;", "w1");
    expect(res.results[0].plain).toBe("echo:a = 1;");
    const call = svc.calls.find((c) => c.path.endsWith("/eval"));
    expect(JSON.parse(call!.body!)).toEqual({ src: "a = 1;", window: "w1" });
  });

  it("maps service errors to ApiError with type and status", async () => {
    const svc = new FakeService();
    const api = new ApiClient("", svc.fetch);
    const err = await api.evalSource("session-missing", "a;").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(404);
    expect(err.detail.type).toBe("UnknownSession");
  });

  it("round-trips files and lists them", async () => {
    const svc = new FakeService();
    const api = new ApiClient("", svc.fetch);
    const id = await api.createSession();
    await api.putFile(id, "data.txt", "42;\n");
    expect(await api.getFile(id, "data.txt")).toBe("42;\n");
    expect(await api.listFiles(id)).toEqual(["data.txt"]);
  });

  it("fetches plot documents by reference", async () => {
    const svc = new FakeService();
    svc.plots.set("plot-1", { version: 1, kind: "text2d", text: "hi", at: [0, 0] });
    const api = new ApiClient("", svc.fetch);
    const doc = await api.getPlot("plot-1");
    expect(doc.kind).toBe("text2d");
  });
});
