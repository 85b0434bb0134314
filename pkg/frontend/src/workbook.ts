/** Window models over one shared kernel session. */

import { ApiClient, ApiError, EvalResponse } from "./api.js";

export type ViewMode = "source" | "rendered";

export interface WindowModel {
  id: number;
  source: string;
  response: EvalResponse | null;
  viewMode: ViewMode;
  busy: boolean;
  /** Set when the last submit failed at transport level; source is preserved. */
  networkError: string | null;
  /** Set when the session expired; the workbook offers to reconnect. */
  sessionLost: boolean;
}

export class Workbook {
  private windows: WindowModel[] = [];
  private nextId = 1;
  private sessionId: string | null = null;

  constructor(private readonly api: ApiClient) {}

  get session(): string | null {
    return this.sessionId;
  }

  get allWindows(): readonly WindowModel[] {
    return this.windows;
  }

  async connect(): Promise<string> {
    this.sessionId = await this.api.createSession();
    for (const w of this.windows) {
      w.sessionLost = false;
    }
    return this.sessionId;
  }

  newWindow(source = ""): WindowModel {
    const w: WindowModel = {
      id: this.nextId++,
      source,
      response: null,
      viewMode: "source",
      busy: false,
      networkError: null,
      sessionLost: false,
    };
    this.windows.push(w);
    return w;
  }

  /** Flips how the window is displayed without re-evaluating anything. */
  toggleView(w: WindowModel): void {
    w.viewMode = w.viewMode === "source" ? "rendered" : "source";
  }

  async submit(w: WindowModel): Promise<WindowModel> {
    if (w.busy) {
      return w; // one in-flight evaluation per window
    }
    if (this.sessionId === null) {
      await this.connect();
    }
    w.busy = true;
    w.networkError = null;
    try {
      w.response = await this.api.evalSource(this.sessionId!, w.source, String(w.id));
      w.sessionLost = false;
    } catch (err) {
      if (err instanceof ApiError && err.detail.type === "UnknownSession") {
        w.sessionLost = true; // source preserved; caller offers reconnect
      } else if (err instanceof ApiError) {
        w.response = {
          results: [],
          transcript: "",
          plots: [],
          error: { statement: 0, message: err.detail.message, type: err.detail.type },
        };
      } else {
        w.networkError = err instanceof Error ? err.message : String(err);
      }
    } finally {
      w.busy = false;
    }
    return w;
  }

  async uploadFile(name: string, content: string): Promise<string[]> {
    if (this.sessionId === null) {
      await this.connect();
    }
    await this.api.putFile(this.sessionId!, name, content);
    return this.api.listFiles(this.sessionId!);
  }

  async downloadFile(name: string): Promise<string> {
    if (this.sessionId === null) {
      throw new Error("no session");
    }
    return this.api.getFile(this.sessionId, name);
  }

  async fetchPlot(ref: string): Promise<Record<string, unknown>> {
    return this.api.getPlot(ref);
  }
}
