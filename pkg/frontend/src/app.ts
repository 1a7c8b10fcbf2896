/**
 * DOM layer: wires the selection state machine to a token view, the ranked
 * side panel, and the save flow. All state transitions go through
 * selection.ts; this file only renders and forwards events.
 */

import { ApiClient, type NarrativePayload } from "./api.js";
import {
  addDraggedSpan,
  applyConflict,
  applySaved,
  createSelection,
  removeSpan,
  reorderSpan,
  resolveKeepMine,
  resolveTakeTheirs,
  submitBody,
  type SelectionState,
} from "./selection.js";

interface AppConfig {
  baseUrl: string;
  annotatorId: string;
  annotatorToken?: string;
}

function readConfig(): AppConfig {
  const params = new URLSearchParams(window.location.search);
  return {
    baseUrl: params.get("api") ?? "",
    annotatorId: params.get("annotator") ?? "anon",
    annotatorToken: params.get("token") ?? undefined,
  };
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

class AnnotationPage {
  private state: SelectionState | null = null;
  private narrative: NarrativePayload | null = null;
  private dragAnchor: number | null = null;
  private dragHover: number | null = null;
  private panelDragFrom: number | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly config: AppConfig,
    private readonly root: HTMLElement,
  ) {}

  async start(): Promise<void> {
    this.root.textContent = "";
    try {
      const summaries = await this.api.listNarratives();
      this.renderPicker(summaries.map((s) => s.id));
    } catch {
      this.renderRetry("could not load narratives", () => this.start());
    }
  }

  private renderRetry(message: string, retry: () => void): void {
    this.root.textContent = "";
    const box = el("div", "error-box", message + " ");
    const button = el("button", "retry", "retry");
    button.addEventListener("click", retry);
    box.appendChild(button);
    this.root.appendChild(box);
  }

  private renderPicker(ids: string[]): void {
    this.root.textContent = "";
    const bar = el("div", "picker");
    for (const id of ids) {
      const button = el("button", "narrative-pick", id);
      button.addEventListener("click", () => void this.open(id));
      bar.appendChild(button);
    }
    this.root.appendChild(bar);
    this.root.appendChild(el("div", "workspace"));
    if (ids.length > 0 && ids[0] !== undefined) {
      void this.open(ids[0]);
    }
  }

  private async open(narrativeId: string): Promise<void> {
    try {
      const narrative = await this.api.getNarrative(narrativeId);
      const saved = await this.api.getAnnotation(
        this.config.annotatorId,
        narrativeId,
      );
      this.narrative = narrative;
      this.state = createSelection(
        narrativeId,
        narrative.tokens,
        saved ? { spans: saved.spans, revision: saved.revision } : undefined,
      );
      this.render();
    } catch {
      this.renderRetry(`could not load ${narrativeId}`, () =>
        void this.open(narrativeId),
      );
    }
  }

  private update(next: SelectionState): void {
    this.state = next;
    this.render();
  }

  private render(): void {
    const workspace = this.root.querySelector(".workspace");
    if (!workspace || !this.state || !this.narrative) return;
    workspace.textContent = "";
    workspace.appendChild(this.renderHeader());
    workspace.appendChild(this.renderTokens());
    workspace.appendChild(this.renderPanel());
    if (this.state.conflict) {
      workspace.appendChild(this.renderConflict());
    }
    if (this.state.notice) {
      workspace.appendChild(el("div", "notice", this.state.notice));
    }
  }

  private renderHeader(): HTMLElement {
    const narrative = this.narrative!;
    const head = el("div", "narrative-head");
    head.appendChild(el("span", "narrative-id", narrative.id));
    head.appendChild(
      el("span", `polarity polarity-${narrative.prompt_polarity}`,
        narrative.prompt_polarity),
    );
    return head;
  }

  private coveredBy(index: number): boolean {
    return this.state!.pending.some((s) => s.start <= index && index < s.end);
  }

  private renderTokens(): HTMLElement {
    const view = el("div", "token-view");
    for (const token of this.narrative!.tokens) {
      const node = el("span", "token", token.surface);
      node.dataset.index = String(token.index);
      if (this.coveredBy(token.index)) node.classList.add("selected");
      if (token.is_filler) node.classList.add("filler");
      if (
        this.dragAnchor !== null &&
        this.dragHover !== null &&
        token.index >= Math.min(this.dragAnchor, this.dragHover) &&
        token.index <= Math.max(this.dragAnchor, this.dragHover)
      ) {
        node.classList.add("dragging");
      }
      node.addEventListener("mousedown", (event) => {
        event.preventDefault();
        this.dragAnchor = token.index;
        this.dragHover = token.index;
        this.render();
      });
      node.addEventListener("mouseover", () => {
        if (this.dragAnchor !== null) {
          this.dragHover = token.index;
          this.render();
        }
      });
      node.addEventListener("mouseup", () => {
        if (this.dragAnchor !== null) {
          const next = addDraggedSpan(
            this.state!,
            this.dragAnchor,
            token.index,
          );
          this.dragAnchor = null;
          this.dragHover = null;
          this.update(next);
        }
      });
      view.appendChild(node);
      view.appendChild(document.createTextNode(" "));
    }
    view.addEventListener("mouseleave", () => {
      this.dragAnchor = null;
      this.dragHover = null;
      this.render();
    });
    return view;
  }

  private renderPanel(): HTMLElement {
    const state = this.state!;
    const panel = el("div", "rank-panel");
    panel.appendChild(el("h2", undefined, "ranked spans"));
    const list = el("ol", "rank-list");
    state.pending.forEach((span, rank) => {
      const item = el("li", "rank-item");
      item.draggable = true;
      item.dataset.rank = String(rank);
      item.appendChild(el("span", "rank-surface", span.surface));
      const remove = el("button", "remove", "x");
      remove.addEventListener("click", () =>
        this.update(removeSpan(state, rank)),
      );
      item.appendChild(remove);
      item.addEventListener("dragstart", () => {
        this.panelDragFrom = rank;
      });
      item.addEventListener("dragover", (event) => event.preventDefault());
      item.addEventListener("drop", (event) => {
        event.preventDefault();
        if (this.panelDragFrom !== null) {
          this.update(reorderSpan(state, this.panelDragFrom, rank));
          this.panelDragFrom = null;
        }
      });
      list.appendChild(item);
    });
    panel.appendChild(list);

    const save = el("button", "save", state.dirty ? "save" : "saved");
    save.disabled = !state.dirty || state.pending.length === 0;
    save.addEventListener("click", () => void this.save());
    panel.appendChild(save);
    return panel;
  }

  private renderConflict(): HTMLElement {
    const state = this.state!;
    const conflict = state.conflict!;
    const box = el("div", "conflict-box");
    box.appendChild(
      el("p", undefined,
        `another save reached revision ${conflict.stored} first`),
    );
    const theirs = el("ul", "theirs");
    for (const span of conflict.theirs) {
      theirs.appendChild(el("li", undefined, span.surface));
    }
    box.appendChild(theirs);
    const keep = el("button", "keep-mine", "keep mine and retry");
    keep.addEventListener("click", () => this.update(resolveKeepMine(state)));
    const take = el("button", "take-theirs", "take theirs");
    take.addEventListener("click", () => this.update(resolveTakeTheirs(state)));
    box.appendChild(keep);
    box.appendChild(take);
    return box;
  }

  private async save(): Promise<void> {
    const state = this.state!;
    const body = submitBody(state);
    const result = await this.api.putAnnotation(
      this.config.annotatorId,
      state.narrativeId,
      body.spans,
      body.expected_revision,
    );
    if (result.kind === "saved") {
      this.update(applySaved(state, result.revision, result.warnings));
      return;
    }
    if (result.kind === "conflict") {
      // fetch what won so the annotator can compare before resolving
      const theirs = await this.api
        .getAnnotation(this.config.annotatorId, state.narrativeId)
        .catch(() => null);
      this.update(applyConflict(state, result.stored, theirs?.spans ?? []));
      return;
    }
    if (result.kind === "invalid") {
      this.update({
        ...state,
        notice: result.violations.map((v) => v.message).join("; "),
      });
      return;
    }
    this.update({ ...state, notice: "not authorized to save as this annotator" });
  }
}

export function mount(root: HTMLElement): void {
  const config = readConfig();
  const api = new ApiClient(config.baseUrl, config.annotatorToken);
  void new AnnotationPage(api, config, root).start();
}

const rootElement = document.getElementById("app");
if (rootElement) {
  mount(rootElement);
}
