import { describe, expect, it } from "vitest";

import {
  addDraggedSpan,
  applyConflict,
  applySaved,
  createSelection,
  dragSpan,
  removeSpan,
  reorderSpan,
  resolveKeepMine,
  resolveTakeTheirs,
  spanSurface,
  spansOverlap,
  submitBody,
} from "../src/selection.js";
import { tokensOf } from "./helpers.js";

const WORDS = [
  "Der",
  "Umzug",
  "war",
  "ähm",
  "wirklich",
  "sehr",
  "stressig",
  "für",
  "mich",
  ".",
];

function freshState() {
  return createSelection("n1", tokensOf(WORDS));
}

describe("dragSpan", () => {
  it("maps a forward drag over tokens i..j to the half-open span [i, j+1)", () => {
    expect(dragSpan(2, 6)).toEqual({ start: 2, end: 7 });
  });

  it("maps a right-to-left drag to the same span as the forward drag", () => {
    expect(dragSpan(6, 2)).toEqual(dragSpan(2, 6));
  });

  it("maps a single click to a one-token span", () => {
    expect(dragSpan(4, 4)).toEqual({ start: 4, end: 5 });
  });
});

describe("spanSurface", () => {
  it("joins token surfaces with single spaces, matching the server rendering", () => {
    expect(spanSurface(tokensOf(WORDS), 4, 7)).toBe("wirklich sehr stressig");
  });

  it("is the bare token surface for a width-one span", () => {
    expect(spanSurface(tokensOf(WORDS), 1, 2)).toBe("Umzug");
  });
});

describe("spansOverlap", () => {
  it("treats touching half-open spans as disjoint", () => {
    expect(spansOverlap({ start: 0, end: 3 }, { start: 3, end: 5 })).toBe(false);
  });

  it("detects one-token overlap", () => {
    expect(spansOverlap({ start: 0, end: 3 }, { start: 2, end: 5 })).toBe(true);
  });

  it("detects containment", () => {
    expect(spansOverlap({ start: 1, end: 6 }, { start: 2, end: 3 })).toBe(true);
  });
});

describe("addDraggedSpan", () => {
  it("appends the dragged span with its surface and marks the state dirty", () => {
    const state = addDraggedSpan(freshState(), 4, 6);
    expect(state.pending).toEqual([
      { start: 4, end: 7, surface: "wirklich sehr stressig" },
    ]);
    expect(state.dirty).toBe(true);
    expect(state.notice).toBeNull();
  });

  it("accepts a right-to-left drag identically to the forward drag", () => {
    const forward = addDraggedSpan(freshState(), 4, 6);
    const backward = addDraggedSpan(freshState(), 6, 4);
    expect(backward.pending).toEqual(forward.pending);
  });

  it("ranks spans in the order they were added", () => {
    let state = freshState();
    state = addDraggedSpan(state, 6, 6);
    state = addDraggedSpan(state, 1, 1);
    expect(state.pending.map((s) => s.surface)).toEqual(["stressig", "Umzug"]);
  });

  it("rejects a drag past the end of the narrative with a notice", () => {
    const before = freshState();
    const state = addDraggedSpan(before, 8, WORDS.length);
    expect(state.pending).toEqual([]);
    expect(state.dirty).toBe(false);
    expect(state.notice).toBe("selection is outside the narrative");
  });

  it("rejects an overlapping drag and names the clashing span", () => {
    let state = addDraggedSpan(freshState(), 4, 6);
    state = addDraggedSpan(state, 6, 8);
    expect(state.pending).toHaveLength(1);
    expect(state.notice).toBe('selection overlaps "wirklich sehr stressig"');
  });

  it("allows a span that merely touches an existing one", () => {
    let state = addDraggedSpan(freshState(), 4, 6);
    state = addDraggedSpan(state, 7, 8);
    expect(state.pending).toHaveLength(2);
    expect(state.notice).toBeNull();
  });

  it("does not mutate the input state", () => {
    const before = freshState();
    addDraggedSpan(before, 0, 2);
    expect(before.pending).toEqual([]);
    expect(before.dirty).toBe(false);
  });
});

describe("removeSpan", () => {
  it("drops the span at the given rank and keeps the rest in order", () => {
    let state = freshState();
    state = addDraggedSpan(state, 0, 1);
    state = addDraggedSpan(state, 4, 4);
    state = addDraggedSpan(state, 6, 6);
    state = removeSpan(state, 1);
    expect(state.pending.map((s) => s.surface)).toEqual([
      "Der Umzug",
      "stressig",
    ]);
    expect(state.dirty).toBe(true);
  });

  it("ignores an out-of-range rank", () => {
    const state = addDraggedSpan(freshState(), 0, 1);
    expect(removeSpan(state, 5)).toBe(state);
    expect(removeSpan(state, -1)).toBe(state);
  });
});

describe("reorderSpan", () => {
  function threeSpans() {
    let state = freshState();
    state = addDraggedSpan(state, 0, 1); // a
    state = addDraggedSpan(state, 4, 4); // b
    state = addDraggedSpan(state, 6, 6); // c
    return state;
  }

  it("moves a span to an earlier rank", () => {
    const state = reorderSpan(threeSpans(), 2, 0);
    expect(state.pending.map((s) => s.surface)).toEqual([
      "stressig",
      "Der Umzug",
      "wirklich",
    ]);
  });

  it("moves a span to a later rank", () => {
    const state = reorderSpan(threeSpans(), 0, 1);
    expect(state.pending.map((s) => s.surface)).toEqual([
      "wirklich",
      "Der Umzug",
      "stressig",
    ]);
  });

  it("is a no-op for same-position or out-of-range moves", () => {
    const state = threeSpans();
    expect(reorderSpan(state, 1, 1)).toBe(state);
    expect(reorderSpan(state, 3, 0)).toBe(state);
    expect(reorderSpan(state, 0, -1)).toBe(state);
  });
});

describe("submitBody", () => {
  it("serializes spans in rank order with the known revision", () => {
    let state = createSelection("n1", tokensOf(WORDS), {
      spans: [{ start: 0, end: 1 }],
      revision: 3,
    });
    state = addDraggedSpan(state, 6, 6);
    state = reorderSpan(state, 1, 0);
    expect(submitBody(state)).toEqual({
      spans: [
        { start: 6, end: 7 },
        { start: 0, end: 1 },
      ],
      expected_revision: 3,
    });
  });
});

describe("createSelection", () => {
  it("starts empty and clean without a saved set", () => {
    const state = freshState();
    expect(state.pending).toEqual([]);
    expect(state.revision).toBe(0);
    expect(state.dirty).toBe(false);
    expect(state.conflict).toBeNull();
  });

  it("recomputes surfaces from the narrative tokens when loading a saved set", () => {
    const state = createSelection("n1", tokensOf(WORDS), {
      spans: [
        { start: 4, end: 7 },
        { start: 1, end: 2 },
      ],
      revision: 2,
    });
    expect(state.pending).toEqual([
      { start: 4, end: 7, surface: "wirklich sehr stressig" },
      { start: 1, end: 2, surface: "Umzug" },
    ]);
    expect(state.revision).toBe(2);
    expect(state.dirty).toBe(false);
  });
});

describe("applySaved", () => {
  it("clears the dirty flag and adopts the new revision", () => {
    let state = addDraggedSpan(freshState(), 0, 1);
    state = applySaved(state, 1, []);
    expect(state.dirty).toBe(false);
    expect(state.revision).toBe(1);
    expect(state.notice).toBeNull();
  });

  it("surfaces guideline warnings as a notice without blocking", () => {
    let state = addDraggedSpan(freshState(), 0, 1);
    state = applySaved(state, 1, [
      {
        level: "WARNING",
        code: "MinimumSpanCount",
        message: "1 spans, guideline asks for at least 3",
        span: null,
      },
    ]);
    expect(state.dirty).toBe(false);
    expect(state.notice).toBe("1 spans, guideline asks for at least 3");
  });
});

describe("conflict flow", () => {
  function conflictedState() {
    let state = addDraggedSpan(freshState(), 0, 1);
    return applyConflict(state, 4, [{ start: 6, end: 7 }]);
  }

  it("records the server revision and the other writer's spans", () => {
    const state = conflictedState();
    expect(state.conflict).toEqual({
      stored: 4,
      theirs: [{ start: 6, end: 7, surface: "stressig" }],
    });
    expect(state.notice).toBe("someone else saved a newer version");
  });

  it("keep-mine retries against the server revision with local spans intact", () => {
    const state = resolveKeepMine(conflictedState());
    expect(state.conflict).toBeNull();
    expect(state.dirty).toBe(true);
    expect(state.pending.map((s) => s.surface)).toEqual(["Der Umzug"]);
    expect(submitBody(state).expected_revision).toBe(4);
  });

  it("take-theirs adopts the server spans and is no longer dirty", () => {
    const state = resolveTakeTheirs(conflictedState());
    expect(state.conflict).toBeNull();
    expect(state.dirty).toBe(false);
    expect(state.pending).toEqual([
      { start: 6, end: 7, surface: "stressig" },
    ]);
    expect(state.revision).toBe(4);
  });

  it("resolution helpers are no-ops outside a conflict", () => {
    const state = freshState();
    expect(resolveKeepMine(state)).toBe(state);
    expect(resolveTakeTheirs(state)).toBe(state);
  });
});
