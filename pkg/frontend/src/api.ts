/**
 * Typed client for the carrierlab HTTP service.
 *
 * The UI talks to the server exclusively through this module; no other code
 * issues requests. Write outcomes are returned as a discriminated union so
 * callers must handle the conflict and validation branches explicitly.
 */

export interface NarrativeSummary {
  id: string;
  prompt_polarity: "positive" | "negative";
  token_count: number;
  annotated_by: string[];
}

export interface TokenRecord {
  index: number;
  surface: string;
  lower: string;
  char_start: number;
  char_end: number;
  is_punct: boolean;
  is_filler: boolean;
  lemma: string | null;
  pos: string | null;
}

export interface NarrativePayload {
  id: string;
  speaker_id: string;
  prompt_polarity: "positive" | "negative";
  raw_text: string;
  valence_pre: number | null;
  valence_post: number | null;
  arousal_pre: number | null;
  arousal_post: number | null;
  tokens: TokenRecord[];
}

export interface SpanRecord {
  start: number;
  end: number;
  surface?: string;
}

export interface AnnotationPayload {
  annotator_id: string;
  narrative_id: string;
  revision: number;
  spans: SpanRecord[];
}

export interface Violation {
  level: "ERROR" | "WARNING";
  code: string;
  message: string;
  span: { start: number; end: number } | null;
}

export type SaveResult =
  | { kind: "saved"; revision: number; warnings: Violation[] }
  | { kind: "conflict"; stored: number; expected: number }
  | { kind: "invalid"; violations: Violation[] }
  | { kind: "unauthorized" };

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message?: string,
  ) {
    super(message ?? `${code} (HTTP ${status})`);
    this.name = "ApiError";
  }
}

/** Minimal JSON body shape of service error responses. */
interface ErrorBody {
  error?: string;
  [key: string]: unknown;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly annotatorToken?: string,
    // injectable for tests; window.fetch loses its binding if passed bare
    private readonly fetchLike: FetchLike = (input, init) =>
      fetch(input, init),
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchLike(this.url(path));
    if (!response.ok) {
      const body = (await response.json().catch(() => ({}))) as ErrorBody;
      throw new ApiError(response.status, body.error ?? "RequestFailed");
    }
    return (await response.json()) as T;
  }

  listNarratives(): Promise<NarrativeSummary[]> {
    return this.getJson<NarrativeSummary[]>("/narratives");
  }

  getNarrative(narrativeId: string): Promise<NarrativePayload> {
    return this.getJson<NarrativePayload>(
      `/narratives/${encodeURIComponent(narrativeId)}`,
    );
  }

  /** Resolves null when the annotator has no saved set for this narrative. */
  async getAnnotation(
    annotatorId: string,
    narrativeId: string,
  ): Promise<AnnotationPayload | null> {
    const path = `/annotations/${encodeURIComponent(annotatorId)}/${encodeURIComponent(narrativeId)}`;
    const response = await this.fetchLike(this.url(path));
    if (response.status === 404) {
      const body = (await response.json().catch(() => ({}))) as ErrorBody;
      if (body.error === "NotFound") {
        return null;
      }
      throw new ApiError(404, body.error ?? "NotFound");
    }
    if (!response.ok) {
      const body = (await response.json().catch(() => ({}))) as ErrorBody;
      throw new ApiError(response.status, body.error ?? "RequestFailed");
    }
    return (await response.json()) as AnnotationPayload;
  }

  async putAnnotation(
    annotatorId: string,
    narrativeId: string,
    spans: { start: number; end: number }[],
    expectedRevision: number,
  ): Promise<SaveResult> {
    const headers: Record<string, string> = {
      "Content-Type": "application/json",
    };
    if (this.annotatorToken) {
      headers["X-Annotator-Token"] = this.annotatorToken;
    }
    const path = `/annotations/${encodeURIComponent(annotatorId)}/${encodeURIComponent(narrativeId)}`;
    const response = await this.fetchLike(this.url(path), {
      method: "PUT",
      headers,
      body: JSON.stringify({
        spans: spans.map((s) => ({ start: s.start, end: s.end })),
        expected_revision: expectedRevision,
      }),
    });
    if (response.status === 401) {
      return { kind: "unauthorized" };
    }
    const body = (await response.json()) as ErrorBody & {
      revision?: number;
      warnings?: Violation[];
      stored?: number;
      expected?: number;
      violations?: Violation[];
    };
    if (response.status === 409 && body.error === "StaleRevision") {
      return {
        kind: "conflict",
        stored: body.stored ?? 0,
        expected: body.expected ?? expectedRevision,
      };
    }
    if (response.status === 422) {
      return { kind: "invalid", violations: body.violations ?? [] };
    }
    if (!response.ok) {
      throw new ApiError(response.status, body.error ?? "RequestFailed");
    }
    return {
      kind: "saved",
      revision: body.revision ?? 0,
      warnings: body.warnings ?? [],
    };
  }
}
