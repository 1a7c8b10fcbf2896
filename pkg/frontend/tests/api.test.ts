import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import type { FetchLike } from "../src/api.js";
import { fakeService, tokensOf } from "./helpers.js";

const TOKENS = tokensOf(["Die", "Prüfung", "war", "schwer", "."]);

function client(fetchLike: FetchLike, token?: string): ApiClient {
  return new ApiClient("http://fake", token, fetchLike);
}

/** Canned single-response fetch that records the request it saw. */
function canned(status: number, body: unknown) {
  const seen: { url?: string; init?: RequestInit } = {};
  const fetchLike: FetchLike = async (url, init) => {
    seen.url = url;
    seen.init = init;
    return new Response(JSON.stringify(body), { status });
  };
  return { fetchLike, seen };
}

describe("ApiClient reads", () => {
  it("lists narrative summaries", async () => {
    const service = fakeService("n1", TOKENS);
    const summaries = await client(service.fetchLike).listNarratives();
    expect(summaries).toEqual([
      {
        id: "n1",
        prompt_polarity: "positive",
        token_count: 5,
        annotated_by: [],
      },
    ]);
  });

  it("fetches a narrative with its token table", async () => {
    const service = fakeService("n1", TOKENS);
    const narrative = await client(service.fetchLike).getNarrative("n1");
    expect(narrative.id).toBe("n1");
    expect(narrative.tokens).toHaveLength(5);
    expect(narrative.tokens[1]?.surface).toBe("Prüfung");
  });

  it("raises ApiError with the service error code on failed reads", async () => {
    const service = fakeService("n1", TOKENS);
    await expect(client(service.fetchLike).getNarrative("nope")).rejects.toThrow(
      ApiError,
    );
    await expect(
      client(service.fetchLike).getNarrative("nope"),
    ).rejects.toMatchObject({ status: 404, code: "UnknownNarrativeId" });
  });

  it("resolves null for a missing annotation instead of throwing", async () => {
    const service = fakeService("n1", TOKENS);
    const got = await client(service.fetchLike).getAnnotation("ann1", "n1");
    expect(got).toBeNull();
  });

  it("strips a trailing slash from the base url", async () => {
    const { fetchLike, seen } = canned(200, []);
    await new ApiClient("http://fake/", undefined, fetchLike).listNarratives();
    expect(seen.url).toBe("http://fake/narratives");
  });
});

describe("ApiClient.putAnnotation", () => {
  it("sends rank-ordered spans and the expected revision", async () => {
    const { fetchLike, seen } = canned(200, { revision: 1, warnings: [] });
    await client(fetchLike).putAnnotation(
      "ann1",
      "n1",
      [
        { start: 3, end: 4 },
        { start: 0, end: 2 },
      ],
      0,
    );
    expect(seen.url).toBe("http://fake/annotations/ann1/n1");
    expect(seen.init?.method).toBe("PUT");
    expect(JSON.parse(String(seen.init?.body))).toEqual({
      spans: [
        { start: 3, end: 4 },
        { start: 0, end: 2 },
      ],
      expected_revision: 0,
    });
  });

  it("parses a successful save into revision and warnings", async () => {
    const service = fakeService("n1", TOKENS);
    const result = await client(service.fetchLike).putAnnotation(
      "ann1",
      "n1",
      [{ start: 1, end: 2 }],
      0,
    );
    expect(result.kind).toBe("saved");
    if (result.kind === "saved") {
      expect(result.revision).toBe(1);
      expect(result.warnings.map((w) => w.code)).toEqual(["MinimumSpanCount"]);
    }
  });

  it("maps a stale-revision 409 to a conflict result", async () => {
    const { fetchLike } = canned(409, {
      error: "StaleRevision",
      stored: 7,
      expected: 5,
    });
    const result = await client(fetchLike).putAnnotation("a", "n1", [], 5);
    expect(result).toEqual({ kind: "conflict", stored: 7, expected: 5 });
  });

  it("maps a validation 422 to an invalid result carrying the violations", async () => {
    const service = fakeService("n1", TOKENS);
    const result = await client(service.fetchLike).putAnnotation(
      "ann1",
      "n1",
      [
        { start: 0, end: 3 },
        { start: 2, end: 4 },
      ],
      0,
    );
    expect(result.kind).toBe("invalid");
    if (result.kind === "invalid") {
      expect(result.violations[0]?.code).toBe("OverlappingSpans");
    }
  });

  it("maps 401 to an unauthorized result", async () => {
    const { fetchLike } = canned(401, { error: "MissingToken" });
    const result = await client(fetchLike, "wrong").putAnnotation(
      "a",
      "n1",
      [],
      0,
    );
    expect(result).toEqual({ kind: "unauthorized" });
  });

  it("sends the annotator token header exactly when one is configured", async () => {
    const withToken = canned(200, { revision: 1, warnings: [] });
    await client(withToken.fetchLike, "s3cret").putAnnotation("a", "n1", [], 0);
    expect(
      (withToken.seen.init?.headers as Record<string, string>)[
        "X-Annotator-Token"
      ],
    ).toBe("s3cret");

    const bare = canned(200, { revision: 1, warnings: [] });
    await client(bare.fetchLike).putAnnotation("a", "n1", [], 0);
    expect(bare.seen.init?.headers).not.toHaveProperty("X-Annotator-Token");
  });

  it("throws ApiError on unexpected statuses", async () => {
    const { fetchLike } = canned(500, { error: "Boom" });
    await expect(
      client(fetchLike).putAnnotation("a", "n1", [], 0),
    ).rejects.toMatchObject({ status: 500, code: "Boom" });
  });
});
