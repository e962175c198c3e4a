// Typed client for the explanation service. The UI never evaluates
// JavaScript itself; every value on screen came over this wire.

export type ValueJson =
  | { type: "undefined" }
  | { type: "null" }
  | { type: "boolean"; value: boolean }
  | { type: "number"; value: number | string }
  | { type: "string"; value: string }
  | { type: "array"; elements: ValueJson[] }
  | { type: "object"; properties: { key: string; value: ValueJson }[] }
  | { type: "error"; kind: string };

export type EvalPayload = {
  display: string;
  value_json: ValueJson;
};

export type WatCandidate = {
  expected_display: string;
  misconception_ids: number[];
  prior_rank: number;
};

export type WatPayload = {
  candidates: WatCandidate[];
  question: string | null;
};

export type ExplainPayload = {
  messages: string[];
  steps: string[];
  final: string;
  misconception_ids: number[];
};

export type ApiErrorBody = { code: string; message: string };

type Envelope<T> = { ok: true; payload: T } | { ok: false; error: ApiErrorBody };

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(readonly base: string) {}

  private async call<T>(path: string, body: unknown): Promise<T> {
    const resp = await fetch(`${this.base}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    const envelope = (await resp.json()) as Envelope<T>;
    if (!envelope.ok) {
      throw new ApiError(envelope.error.code, envelope.error.message);
    }
    return envelope.payload;
  }

  evaluate(source: string): Promise<EvalPayload> {
    return this.call<EvalPayload>("/eval", { source });
  }

  wat(source: string): Promise<WatPayload> {
    return this.call<WatPayload>("/wat", { source });
  }

  explain(source: string, expectedDisplay: string): Promise<ExplainPayload> {
    return this.call<ExplainPayload>("/explain", {
      source,
      expected_display: expectedDisplay,
    });
  }
}
