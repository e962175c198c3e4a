// End-to-end REPL tests against the real HTTP service: a scripted DOM
// session submits programs, clicks WAT?, answers the clarification, and
// checks the explanation panel against the raw API payload.

import { spawn, ChildProcess } from "node:child_process";
import { createServer } from "node:net";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ReplApp, mount } from "../src/repl.js";

const C_LEX = "console.log( [3, 4, 11, 10].sort()[1] );";
const C_IDX = "console.log( [2, 7, 1, 8].sort()[1] );";
const ROW14_MESSAGE =
  "Array.prototype.sort() casts elements (including numbers) to string and" +
  " compares them lexicographically.";
const SORTED_STEP = "So [3, 4, 11, 10].sort() gives [10, 11, 3, 4].";

let proc: ChildProcess;
let base: string;

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const srv = createServer();
    srv.listen(0, "127.0.0.1", () => {
      const address = srv.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port"));
        return;
      }
      const port = address.port;
      srv.close(() => resolve(port));
    });
  });
}

async function until<T>(
  probe: () => T | null | undefined | false,
  what: string,
  timeoutMs = 20_000,
): Promise<T> {
  const start = Date.now();
  for (;;) {
    const got = probe();
    if (got) return got;
    if (Date.now() - start > timeoutMs) throw new Error(`timed out: ${what}`);
    await new Promise((r) => setTimeout(r, 25));
  }
}

beforeAll(async () => {
  const port = await freePort();
  base = `http://127.0.0.1:${port}/api/v1`;
  proc = spawn(
    "python3",
    ["-m", "watjs.cli", "--serve", "127.0.0.1", "--port", String(port)],
    { stdio: "ignore" },
  );
  const start = Date.now();
  for (;;) {
    try {
      const resp = await fetch(`${base}/misconceptions`);
      if (resp.ok) break;
    } catch {
      // not up yet
    }
    if (Date.now() - start > 60_000) throw new Error("service never came up");
    await new Promise((r) => setTimeout(r, 100));
  }
});

afterAll(() => {
  proc?.kill();
});

function freshApp(): ReplApp {
  const root = document.createElement("div");
  document.body.replaceChildren(root);
  return mount(document, root, base);
}

describe("REPL end to end", () => {
  it("drives the three-way clarification flow and renders the payload verbatim", async () => {
    const app = freshApp();
    const entry = await app.submit(C_LEX);
    expect(entry).not.toBeNull();
    expect(entry!.root.querySelector(".result")!.textContent).toBe("11");

    (entry!.root.querySelector(".wat") as HTMLButtonElement).click();
    const question = await until(
      () => entry!.root.querySelector(".question"),
      "clarification dialog",
    );
    expect(question.textContent).toBe("Did you expect 10, 3 or 4?");

    const choices = [...entry!.root.querySelectorAll<HTMLButtonElement>(".choice")];
    expect(choices.map((b) => b.textContent)).toEqual(["10", "3", "4"]);

    choices.find((b) => b.dataset.expected === "3")!.click();
    const lines = await until(() => {
      const got = [...entry!.root.querySelectorAll(".lines li")];
      return got.length ? got : null;
    }, "explanation panel");

    const payload = await new ApiClient(base).explain(C_LEX, "3");
    expect(lines.map((li) => li.textContent)).toEqual([
      ...payload.messages,
      ...payload.steps,
      payload.final,
    ]);
    expect(payload.messages).toContain(ROW14_MESSAGE);
    expect(payload.steps).toContain(SORTED_STEP);
    // Collapsed by default.
    const details = entry!.root.querySelector("details.explanation")!;
    expect(details.hasAttribute("open")).toBe(false);
  });

  it("confirms directly when only one expectation exists", async () => {
    const app = freshApp();
    const entry = await app.submit(C_IDX);
    (entry!.root.querySelector(".wat") as HTMLButtonElement).click();
    const question = await until(
      () => entry!.root.querySelector(".question"),
      "confirm dialog",
    );
    expect(question.textContent).toBe("Did you expect 1?");
    const yes = entry!.root.querySelector<HTMLButtonElement>(".choice")!;
    expect(yes.textContent).toBe("yes");
    expect(entry!.root.querySelector(".choice-no")).not.toBeNull();
    yes.click();
    const lines = await until(() => {
      const got = [...entry!.root.querySelectorAll(".lines li")];
      return got.length ? got : null;
    }, "explanation after confirm");
    expect(lines[0].textContent).toBe("JavaScript is 0-indexed, not 1-indexed.");
  });

  it("declining the confirm closes the panel", async () => {
    const app = freshApp();
    const entry = await app.submit(C_IDX);
    (entry!.root.querySelector(".wat") as HTMLButtonElement).click();
    await until(() => entry!.root.querySelector(".question"), "confirm dialog");
    entry!.root.querySelector<HTMLButtonElement>(".choice-no")!.click();
    expect(entry!.root.querySelector(".question")).toBeNull();
    expect(entry!.root.querySelectorAll(".lines li").length).toBe(0);
  });

  it("hides the WAT button when nothing diverges", async () => {
    const app = freshApp();
    const entry = await app.submit("true");
    const button = entry!.root.querySelector<HTMLButtonElement>(".wat")!;
    button.click();
    await until(() => button.hasAttribute("hidden"), "button hiding");
    expect(entry!.root.querySelector(".question")).toBeNull();
  });

  it("renders parse errors inline with a caret", async () => {
    const app = freshApp();
    const entry = await app.submit("1 * 2");
    const error = entry!.root.querySelector("pre.error")!;
    expect(error.textContent).toContain("unsupported construct: operator '*'");
    const caretLine = error.textContent!.split("\n").at(-1)!;
    expect(caretLine.indexOf("^")).toBe(2);
  });

  it("Alt+W triggers WAT on the last entry", async () => {
    const app = freshApp();
    const entry = await app.submit(C_IDX);
    document.dispatchEvent(
      new KeyboardEvent("keydown", { key: "w", altKey: true, bubbles: true }),
    );
    const question = await until(
      () => entry!.root.querySelector(".question"),
      "Alt+W dialog",
    );
    expect(question.textContent).toBe("Did you expect 1?");
  });

  it("keeps the API candidate order untouched", async () => {
    const app = freshApp();
    const source = 'console.log("Answers:" + [true, null] + [false]);';
    const entry = await app.submit(source);
    (entry!.root.querySelector(".wat") as HTMLButtonElement).click();
    await until(() => entry!.root.querySelector(".question"), "dialog");
    const rendered = [...entry!.root.querySelectorAll<HTMLButtonElement>(".choice")];
    const resp = await fetch(`${base}/wat`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ source }),
    });
    const body = (await resp.json()) as {
      payload: { candidates: { expected_display: string }[] };
    };
    expect(rendered.map((b) => b.dataset.expected)).toEqual(
      body.payload.candidates.map((c) => c.expected_display),
    );
  });
});

describe("failure handling", () => {
  it("offers a retry affordance on network failure", async () => {
    const app = freshApp();
    const entry = await app.submit(C_IDX);
    const realFetch = globalThis.fetch;
    globalThis.fetch = (() =>
      Promise.reject(new TypeError("connection refused"))) as typeof fetch;
    try {
      (entry!.root.querySelector(".wat") as HTMLButtonElement).click();
      const retry = await until(
        () => entry!.root.querySelector<HTMLButtonElement>(".retry"),
        "retry button",
      );
      globalThis.fetch = realFetch;
      retry.click();
      const question = await until(
        () => entry!.root.querySelector(".question"),
        "dialog after retry",
      );
      expect(question.textContent).toBe("Did you expect 1?");
    } finally {
      globalThis.fetch = realFetch;
    }
  });
});
