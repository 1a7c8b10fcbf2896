/**
 * Test scaffolding: token builders and an in-memory stand-in for the
 * annotation service speaking the same JSON shapes and revision protocol,
 * exposed as a FetchLike so ApiClient runs unmodified.
 */

import type { FetchLike, TokenRecord } from "../src/api.js";

export function tokensOf(words: string[]): TokenRecord[] {
  let at = 0;
  return words.map((surface, index) => {
    const token: TokenRecord = {
      index,
      surface,
      lower: surface.toLowerCase(),
      char_start: at,
      char_end: at + surface.length,
      is_punct: [".", ",", "!", "?"].includes(surface),
      is_filler: surface.toLowerCase() === "ähm",
      lemma: surface.toLowerCase(),
      pos: "NOUN",
    };
    at += surface.length + 1;
    return token;
  });
}

interface StoredSet {
  revision: number;
  spans: { start: number; end: number }[];
}

export interface FakeService {
  fetchLike: FetchLike;
  /** Peek at the stored record, as a reload would see it. */
  stored(annotator: string, narrative: string): StoredSet | undefined;
}

function overlaps(
  a: { start: number; end: number },
  b: { start: number; end: number },
): boolean {
  return a.start < b.end && b.start < a.end;
}

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

/**
 * One narrative, many annotators. Implements: GET /narratives,
 * GET /narratives/{id}, GET/PUT /annotations/{annotator}/{id} with the
 * service's revision and validation semantics.
 */
export function fakeService(
  narrativeId: string,
  tokens: TokenRecord[],
): FakeService {
  const store = new Map<string, StoredSet>();

  const narrativePayload = {
    id: narrativeId,
    speaker_id: "s1",
    prompt_polarity: "positive",
    raw_text: tokens.map((t) => t.surface).join(" "),
    valence_pre: 5,
    valence_post: 6,
    arousal_pre: 4,
    arousal_post: 4,
    tokens,
  };

  const fetchLike: FetchLike = async (input, init) => {
    const url = new URL(input, "http://fake");
    const method = init?.method ?? "GET";
    const parts = url.pathname.split("/").filter(Boolean);

    if (method === "GET" && url.pathname === "/narratives") {
      return jsonResponse(200, [
        {
          id: narrativeId,
          prompt_polarity: "positive",
          token_count: tokens.length,
          annotated_by: [...store.keys()].sort(),
        },
      ]);
    }
    if (method === "GET" && parts[0] === "narratives" && parts.length === 2) {
      if (parts[1] !== narrativeId) {
        return jsonResponse(404, { error: "UnknownNarrativeId" });
      }
      return jsonResponse(200, narrativePayload);
    }
    if (parts[0] === "annotations" && parts.length === 3) {
      const annotator = decodeURIComponent(parts[1] ?? "");
      const nid = decodeURIComponent(parts[2] ?? "");
      if (nid !== narrativeId) {
        return jsonResponse(404, { error: "UnknownNarrativeId" });
      }
      if (method === "GET") {
        const saved = store.get(annotator);
        if (!saved) {
          return jsonResponse(404, { error: "NotFound" });
        }
        return jsonResponse(200, {
          annotator_id: annotator,
          narrative_id: nid,
          revision: saved.revision,
          spans: saved.spans.map((s) => ({
            ...s,
            surface: tokens
              .slice(s.start, s.end)
              .map((t) => t.surface)
              .join(" "),
          })),
        });
      }
      if (method === "PUT") {
        const body = JSON.parse(String(init?.body)) as {
          spans: { start: number; end: number }[];
          expected_revision: number;
        };
        const violations: unknown[] = [];
        for (const span of body.spans) {
          if (span.start < 0 || span.end > tokens.length || span.start >= span.end) {
            violations.push({
              level: "ERROR",
              code: "SpanOutOfBounds",
              message: `bad span [${span.start}, ${span.end})`,
              span,
            });
          }
        }
        for (let i = 0; i < body.spans.length; i++) {
          for (let j = i + 1; j < body.spans.length; j++) {
            const a = body.spans[i];
            const b = body.spans[j];
            if (a && b && overlaps(a, b)) {
              violations.push({
                level: "ERROR",
                code: "OverlappingSpans",
                message: "spans overlap",
                span: a,
              });
            }
          }
        }
        if (violations.length) {
          return jsonResponse(422, { error: "ValidationError", violations });
        }
        const current = store.get(annotator)?.revision ?? 0;
        if (current !== body.expected_revision) {
          return jsonResponse(409, {
            error: "StaleRevision",
            stored: current,
            expected: body.expected_revision,
          });
        }
        const revision = current + 1;
        store.set(annotator, { revision, spans: body.spans });
        const warnings =
          body.spans.length < 3
            ? [
                {
                  level: "WARNING",
                  code: "MinimumSpanCount",
                  message: `${body.spans.length} spans, guideline asks for at least 3`,
                  span: null,
                },
              ]
            : [];
        return jsonResponse(200, { revision, warnings });
      }
    }
    return jsonResponse(404, { error: "NotFound" });
  };

  return {
    fetchLike,
    stored: (annotator, narrative) =>
      narrative === narrativeId ? store.get(annotator) : undefined,
  };
}
