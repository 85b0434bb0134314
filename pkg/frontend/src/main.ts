/** Browser bootstrap: wires the workbook model to the DOM. */

import { ApiClient } from "./api.js";
import { Workbook, WindowModel } from "./workbook.js";
import { renderPlotDocument, UnsupportedPlotVersion } from "./plot.js";

const api = new ApiClient("");
const workbook = new Workbook(api);

const windowsHost = document.getElementById("windows") as HTMLElement;
const statusLine = document.getElementById("status") as HTMLElement;
const fileList = document.getElementById("file-list") as HTMLElement;

function setStatus(text: string): void {
  statusLine.textContent = text;
}

function resultBlock(w: WindowModel): HTMLElement {
  const out = document.createElement("div");
  out.className = "results";
  if (w.networkError) {
    out.appendChild(banner(`network error: ${w.networkError} — press Run to retry`));
    return out;
  }
  if (w.sessionLost) {
    const note = banner("session expired — reconnect to continue");
    const btn = document.createElement("button");
    btn.textContent = "Reconnect";
    btn.onclick = async () => {
      await workbook.connect();
      await workbook.submit(w);
      redraw();
    };
    note.appendChild(btn);
    out.appendChild(note);
    return out;
  }
  const r = w.response;
  if (!r) return out;
  for (const item of r.results) {
    const line = document.createElement("div");
    line.className = "result-line";
    // LaTeX view shows the markup itself; plain view shows the flat text
    line.textContent = w.viewMode === "rendered" ? item.latex : item.plain;
    out.appendChild(line);
    if (item.plot) attachPlot(out, item.plot);
  }
  if (r.error) {
    out.appendChild(banner(
      `${r.error.type} in statement ${r.error.statement + 1}: ${r.error.message}`));
  }
  return out;
}

function banner(text: string): HTMLElement {
  const el = document.createElement("div");
  el.className = "banner";
  el.textContent = text;
  return el;
}

function attachPlot(host: HTMLElement, ref: string): void {
  const slot = document.createElement("div");
  slot.className = "plot";
  host.appendChild(slot);
  workbook.fetchPlot(ref).then((doc) => {
    try {
      slot.innerHTML = renderPlotDocument(doc);
    } catch (err) {
      slot.textContent = err instanceof UnsupportedPlotVersion
        ? "This plot needs a newer workbook (upgrade required)."
        : String(err);
    }
  }, (err) => {
    slot.textContent = `plot ${ref} unavailable: ${String(err)}`;
  });
}

function windowCard(w: WindowModel): HTMLElement {
  const card = document.createElement("section");
  card.className = "window";

  const head = document.createElement("header");
  head.textContent = `Window ${w.id}`;
  card.appendChild(head);

  const editor = document.createElement("textarea");
  editor.value = w.source;
  editor.rows = 6;
  editor.oninput = () => { w.source = editor.value; };
  card.appendChild(editor);

  const run = document.createElement("button");
  run.textContent = w.busy ? "Running…" : "Run";
  run.disabled = w.busy;
  run.onclick = async () => {
    await workbook.submit(w);
    redraw();
  };
  card.appendChild(run);

  const toggle = document.createElement("button");
  toggle.textContent = w.viewMode === "source" ? "Show LaTeX" : "Show plain";
  toggle.onclick = () => { workbook.toggleView(w); redraw(); };
  card.appendChild(toggle);

  card.appendChild(resultBlock(w));
  return card;
}

function redraw(): void {
  windowsHost.replaceChildren(...workbook.allWindows.map(windowCard));
  setStatus(workbook.session ? `session ${workbook.session}` : "not connected");
}

function redrawFiles(names: string[]): void {
  fileList.replaceChildren(...names.map((name) => {
    const li = document.createElement("li");
    const link = document.createElement("a");
    link.textContent = name;
    link.href = "#";
    link.onclick = async (e) => {
      e.preventDefault();
      const content = await workbook.downloadFile(name);
      const blob = new Blob([content], { type: "text/plain" });
      const a = document.createElement("a");
      a.href = URL.createObjectURL(blob);
      a.download = name;
      a.click();
      URL.revokeObjectURL(a.href);
    };
    li.appendChild(link);
    return li;
  }));
}

function wireChrome(): void {
  (document.getElementById("new-window") as HTMLButtonElement).onclick = () => {
    workbook.newWindow();
    redraw();
  };
  const upload = document.getElementById("upload") as HTMLInputElement;
  upload.onchange = async () => {
    const file = upload.files?.[0];
    if (!file) return;
    const names = await workbook.uploadFile(file.name, await file.text());
    redrawFiles(names);
    upload.value = "";
  };
}

async function start(): Promise<void> {
  wireChrome();
  workbook.newWindow("SPACE = Z[x, y];\n");
  try {
    await workbook.connect();
  } catch {
    setStatus("kernel unreachable — start the service and reload");
  }
  redraw();
}

start();
