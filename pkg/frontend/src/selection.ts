/**
 * Page-local annotation state: the pending ranked span list for one
 * narrative plus the revision protocol bookkeeping.
 *
 * Everything here is a pure function from state to state so the whole
 * editing flow is testable without a DOM. The list order IS the rank
 * order; the DOM layer renders it verbatim.
 */

import type { SpanRecord, TokenRecord, Violation } from "./api.js";

export interface PendingSpan {
  start: number;
  end: number; // exclusive
  surface: string;
}

export interface ConflictInfo {
  /** Revision the server actually holds. */
  stored: number;
  /** The other writer's spans, fetched for the merge view. */
  theirs: PendingSpan[];
}

export interface SelectionState {
  narrativeId: string;
  tokens: TokenRecord[];
  /** Ranked pending spans; index 0 is rank 1. */
  pending: PendingSpan[];
  /** Last revision this page knows the server holds for this annotator. */
  revision: number;
  /** True when pending differs from what was last loaded or saved. */
  dirty: boolean;
  /** Advisory message for the notice area; null when nothing to show. */
  notice: string | null;
  conflict: ConflictInfo | null;
}

/**
 * Surface of tokens [start, end), single-space joined. Must stay identical
 * to the server's rendering of the same indices, so saved spans round-trip
 * into the exact text the annotator selected.
 */
export function spanSurface(
  tokens: TokenRecord[],
  start: number,
  end: number,
): string {
  return tokens
    .slice(start, end)
    .map((t) => t.surface)
    .join(" ");
}

export function spansOverlap(
  a: { start: number; end: number },
  b: { start: number; end: number },
): boolean {
  return a.start < b.end && b.start < a.end;
}

/** Half-open span from a drag between two token indices, either direction. */
export function dragSpan(i: number, j: number): { start: number; end: number } {
  return { start: Math.min(i, j), end: Math.max(i, j) + 1 };
}

export function createSelection(
  narrativeId: string,
  tokens: TokenRecord[],
  saved?: { spans: SpanRecord[]; revision: number },
): SelectionState {
  const pending = (saved?.spans ?? []).map((s) => ({
    start: s.start,
    end: s.end,
    surface: spanSurface(tokens, s.start, s.end),
  }));
  return {
    narrativeId,
    tokens,
    pending,
    revision: saved?.revision ?? 0,
    dirty: false,
    notice: null,
    conflict: null,
  };
}

/**
 * Append the span dragged from token i to token j. Rejected with a notice
 * when it would overlap a pending span or leave the token range.
 */
export function addDraggedSpan(
  state: SelectionState,
  i: number,
  j: number,
): SelectionState {
  const span = dragSpan(i, j);
  if (span.start < 0 || span.end > state.tokens.length) {
    return { ...state, notice: "selection is outside the narrative" };
  }
  const clash = state.pending.find((p) => spansOverlap(p, span));
  if (clash) {
    return {
      ...state,
      notice: `selection overlaps "${clash.surface}"`,
    };
  }
  const surface = spanSurface(state.tokens, span.start, span.end);
  return {
    ...state,
    pending: [...state.pending, { ...span, surface }],
    dirty: true,
    notice: null,
  };
}

/** Remove the span at a rank position (pre-submit editing). */
export function removeSpan(state: SelectionState, rank: number): SelectionState {
  if (rank < 0 || rank >= state.pending.length) {
    return state;
  }
  const pending = state.pending.filter((_, i) => i !== rank);
  return { ...state, pending, dirty: true, notice: null };
}

/** Move the span at rank `from` so it sits at rank `to` (drag-and-drop). */
export function reorderSpan(
  state: SelectionState,
  from: number,
  to: number,
): SelectionState {
  const n = state.pending.length;
  if (from === to || from < 0 || to < 0 || from >= n || to >= n) {
    return state;
  }
  const pending = [...state.pending];
  const moved = pending.splice(from, 1)[0];
  if (moved === undefined) {
    return state;
  }
  pending.splice(to, 0, moved);
  return { ...state, pending, dirty: true, notice: null };
}

/** Request body for PUT /annotations, rank order preserved. */
export function submitBody(state: SelectionState): {
  spans: { start: number; end: number }[];
  expected_revision: number;
} {
  return {
    spans: state.pending.map((s) => ({ start: s.start, end: s.end })),
    expected_revision: state.revision,
  };
}

/** Fold a successful save back in; guideline warnings stay advisory. */
export function applySaved(
  state: SelectionState,
  revision: number,
  warnings: Violation[],
): SelectionState {
  return {
    ...state,
    revision,
    dirty: false,
    conflict: null,
    notice: warnings.length
      ? warnings.map((w) => w.message).join("; ")
      : null,
  };
}

/**
 * Enter the conflict flow after a stale save: remember the server revision
 * and the other writer's spans so the annotator can compare.
 */
export function applyConflict(
  state: SelectionState,
  stored: number,
  theirSpans: SpanRecord[],
): SelectionState {
  return {
    ...state,
    conflict: {
      stored,
      theirs: theirSpans.map((s) => ({
        start: s.start,
        end: s.end,
        surface: s.surface ?? spanSurface(state.tokens, s.start, s.end),
      })),
    },
    notice: "someone else saved a newer version",
  };
}

/** Resolve a conflict by keeping this page's spans; next save retries
 * against the server's revision. */
export function resolveKeepMine(state: SelectionState): SelectionState {
  if (!state.conflict) {
    return state;
  }
  return {
    ...state,
    revision: state.conflict.stored,
    conflict: null,
    dirty: true,
    notice: null,
  };
}

/** Resolve a conflict by adopting the server's version wholesale. */
export function resolveTakeTheirs(state: SelectionState): SelectionState {
  if (!state.conflict) {
    return state;
  }
  return {
    ...state,
    pending: state.conflict.theirs,
    revision: state.conflict.stored,
    conflict: null,
    dirty: false,
    notice: null,
  };
}
