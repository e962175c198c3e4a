// The REPL surface: entries are append-only; each carries its own WAT
// state machine (idle -> loading -> clarifying -> explained, the single-
// candidate case skipping the clarifying list for a yes/no confirm).

import { ApiClient, ApiError, ExplainPayload, WatCandidate } from "./api.js";

type WatState =
  | { kind: "idle" }
  | { kind: "loading" }
  | { kind: "clarifying"; question: string; candidates: WatCandidate[] }
  | { kind: "explained"; expected: string; payload: ExplainPayload };

export class ReplEntry {
  readonly root: HTMLElement;
  state: WatState = { kind: "idle" };
  // Bumped on every action; in-flight responses for an older sequence are
  // dropped so a stale reply can never clobber newer state.
  private seq = 0;

  constructor(
    private readonly api: ApiClient,
    readonly source: string,
    private readonly doc: Document,
  ) {
    this.root = doc.createElement("li");
    this.root.className = "entry";
  }

  async evaluate(): Promise<void> {
    const mine = ++this.seq;
    this.renderSource();
    try {
      const payload = await this.api.evaluate(this.source);
      if (mine !== this.seq) return;
      this.renderResult(payload.display);
    } catch (err) {
      if (mine !== this.seq) return;
      if (err instanceof ApiError) {
        this.renderParseError(err);
      } else {
        this.renderFailure(err, () => this.evaluate());
      }
    }
  }

  private renderParseError(err: ApiError): void {
    // Deterministic rejection: show the message inline, with a caret when
    // the server reported an offset.
    const offset = /\(at offset (\d+)\)/.exec(err.message);
    let text = err.message;
    if (offset) {
      const column = Number(offset[1]);
      text += `\n${this.source}\n${" ".repeat(column)}^`;
    }
    const pre = this.doc.createElement("pre");
    pre.className = "error";
    pre.textContent = text;
    this.root.append(pre);
  }

  async wat(): Promise<void> {
    if (this.state.kind === "loading") return;
    const mine = ++this.seq;
    this.state = { kind: "loading" };
    try {
      const payload = await this.api.wat(this.source);
      if (mine !== this.seq) return;
      if (payload.candidates.length === 0 || payload.question === null) {
        this.state = { kind: "idle" };
        this.hideWatButton();
        return;
      }
      this.state = {
        kind: "clarifying",
        question: payload.question,
        candidates: payload.candidates,
      };
      this.renderClarification();
    } catch (err) {
      if (mine !== this.seq) return;
      this.state = { kind: "idle" };
      this.renderFailure(err, () => this.wat());
    }
  }

  async choose(expectedDisplay: string): Promise<void> {
    const mine = ++this.seq;
    try {
      const payload = await this.api.explain(this.source, expectedDisplay);
      if (mine !== this.seq) return;
      this.state = { kind: "explained", expected: expectedDisplay, payload };
      this.renderExplanation();
    } catch (err) {
      if (mine !== this.seq) return;
      this.renderFailure(err, () => this.choose(expectedDisplay));
    }
  }

  dismiss(): void {
    this.seq++;
    this.state = { kind: "idle" };
    this.panel().replaceChildren();
  }

  // -- rendering ----------------------------------------------------------

  private renderSource(): void {
    const src = this.doc.createElement("div");
    src.className = "source";
    src.textContent = this.source;
    this.root.replaceChildren(src);
  }

  private renderResult(display: string): void {
    const row = this.doc.createElement("div");
    row.className = "result-row";
    const result = this.doc.createElement("span");
    result.className = "result";
    result.textContent = display;
    const wat = this.doc.createElement("button");
    wat.className = "wat";
    wat.type = "button";
    wat.textContent = "WAT?";
    wat.addEventListener("click", () => void this.wat());
    row.append(result, wat);
    this.root.append(row, this.makePanel());
  }

  private renderFailure(err: unknown, retry: () => void): void {
    const panel = this.panel();
    panel.replaceChildren();
    const note = this.doc.createElement("span");
    note.className = "failure";
    note.textContent =
      err instanceof ApiError ? err.message : "network error, nothing sent";
    const button = this.doc.createElement("button");
    button.type = "button";
    button.className = "retry";
    button.textContent = "retry";
    button.addEventListener("click", retry);
    panel.replaceChildren(note, button);
  }

  private renderClarification(): void {
    if (this.state.kind !== "clarifying") return;
    const { question, candidates } = this.state;
    const panel = this.panel();
    panel.replaceChildren();
    const ask = this.doc.createElement("p");
    ask.className = "question";
    ask.textContent = question;
    panel.append(ask);
    if (candidates.length === 1) {
      // Single expectation: a direct confirm instead of a choice list.
      const yes = this.choiceButton(candidates[0].expected_display, "yes");
      const no = this.doc.createElement("button");
      no.type = "button";
      no.className = "choice-no";
      no.textContent = "no";
      no.addEventListener("click", () => this.dismiss());
      panel.append(yes, no);
      return;
    }
    const list = this.doc.createElement("div");
    list.className = "choices";
    for (const cand of candidates) {
      list.append(this.choiceButton(cand.expected_display));
    }
    panel.append(list);
  }

  private choiceButton(expected: string, label?: string): HTMLButtonElement {
    const button = this.doc.createElement("button");
    button.type = "button";
    button.className = "choice";
    button.dataset.expected = expected;
    button.textContent = label ?? expected;
    button.addEventListener("click", () => void this.choose(expected));
    return button;
  }

  private renderExplanation(): void {
    if (this.state.kind !== "explained") return;
    const { expected, payload } = this.state;
    const panel = this.panel();
    panel.replaceChildren();
    // Closed by default; the summary line invites the click.
    const details = this.doc.createElement("details");
    details.className = "explanation";
    const summary = this.doc.createElement("summary");
    summary.textContent = `you expected ${expected}`;
    details.append(summary);
    const lines = this.doc.createElement("ul");
    lines.className = "lines";
    for (const message of payload.messages) {
      lines.append(this.line("message", message));
    }
    for (const step of payload.steps) {
      lines.append(this.line("step", step));
    }
    lines.append(this.line("final", payload.final));
    details.append(lines);
    panel.append(details);
  }

  private line(kind: string, text: string): HTMLLIElement {
    const li = this.doc.createElement("li");
    li.className = kind;
    li.textContent = text;
    return li;
  }

  private makePanel(): HTMLElement {
    const panel = this.doc.createElement("div");
    panel.className = "wat-panel";
    return panel;
  }

  private panel(): HTMLElement {
    let panel = this.root.querySelector<HTMLElement>(".wat-panel");
    if (!panel) {
      panel = this.makePanel();
      this.root.append(panel);
    }
    return panel;
  }

  private hideWatButton(): void {
    this.root.querySelector(".wat")?.setAttribute("hidden", "hidden");
  }
}

export class ReplApp {
  readonly entries: ReplEntry[] = [];
  private readonly list: HTMLElement;
  private readonly input: HTMLInputElement;

  constructor(
    private readonly api: ApiClient,
    rootEl: HTMLElement,
    private readonly doc: Document,
  ) {
    this.list = doc.createElement("ol");
    this.list.className = "entries";
    const form = doc.createElement("form");
    form.className = "repl-form";
    const prompt = doc.createElement("span");
    prompt.className = "prompt";
    prompt.textContent = ">";
    this.input = doc.createElement("input");
    this.input.className = "repl-input";
    this.input.autofocus = true;
    this.input.spellcheck = false;
    form.append(prompt, this.input);
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void this.submit(this.input.value);
    });
    doc.addEventListener("keydown", (ev) => {
      const key = ev as KeyboardEvent;
      if (key.altKey && (key.key === "w" || key.key === "W")) {
        key.preventDefault();
        void this.watLast();
      }
    });
    rootEl.replaceChildren(this.list, form);
  }

  async submit(source: string): Promise<ReplEntry | null> {
    if (!source.trim()) return null;
    this.input.value = "";
    const entry = new ReplEntry(this.api, source, this.doc);
    this.entries.push(entry);
    this.list.append(entry.root);
    try {
      await entry.evaluate();
    } catch {
      // evaluate renders its own failures
    }
    return entry;
  }

  async watLast(): Promise<void> {
    const last = this.entries[this.entries.length - 1];
    if (last) await last.wat();
  }
}

export function mount(doc: Document, rootEl: HTMLElement, apiBase: string): ReplApp {
  return new ReplApp(new ApiClient(apiBase), rootEl, doc);
}
