/**
 * DOM rendering. Pure construction from SessionState: every call rebuilds
 * the app container, so the view after any server round-trip is exactly the
 * state the controller holds, never a stale partial update.
 */

import { annotatorScore, SessionState, Banner } from "./state.js";
import type { MeetingSummary, SentenceRow } from "./types.js";

// Ten distinguishable pairing colors; reused modulo for longer reports.
export const PALETTE_SIZE = 10;

export interface Handlers {
  onSelect: (tSeg: number) => void;
  onAssign: (rSeg: number) => void;
  onToggleIrrelevant: (tSeg: number) => void;
  onSubmit: () => void;
  onDismiss: () => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function pairClass(rSeg: number): string {
  return `pair-${rSeg % PALETTE_SIZE}`;
}

function bannerNode(banner: Banner, handlers: Handlers): HTMLElement {
  const box = el("div", `banner banner-${banner.kind}`);
  const label =
    banner.kind === "violation"
      ? "Order violation: "
      : banner.kind === "stale"
        ? "Out of date: "
        : "Error: ";
  box.append(el("strong", undefined, label), el("span", undefined, banner.message));
  const dismiss = el("button", "dismiss", "dismiss");
  dismiss.addEventListener("click", handlers.onDismiss);
  box.append(dismiss);
  return box;
}

function transcriptionPane(state: SessionState, handlers: Handlers): HTMLElement {
  const pane = el("section", "pane pane-transcription");
  pane.append(el("h2", undefined, "Transcription"));
  const byId = new Map<number, SentenceRow>(state.transcription.sentences.map((s) => [s.id, s]));
  const violation = state.banner?.kind === "violation" ? state.banner : null;
  for (const segment of state.transcription.segments) {
    const entry = state.entries[segment.id];
    const card = el("article", `segment ${pairClass(entry.r_seg)}`);
    card.dataset.tSeg = String(segment.id);
    if (segment.id === state.selected) {
      card.classList.add("selected");
    }
    if (entry.irrelevant) {
      card.classList.add("irrelevant");
    }
    if (violation && (segment.id === violation.tSeg || segment.id === violation.neighborTSeg)) {
      card.classList.add("violating");
    }
    const head = el("header");
    head.append(el("span", "seg-id", `T${segment.id}`));
    head.append(el("span", "link-badge", entry.irrelevant ? "no target" : `-> R${entry.r_seg}`));
    const toggle = el("button", "irrelevant-toggle", entry.irrelevant ? "restore" : "irrelevant");
    toggle.addEventListener("click", (event) => {
      event.stopPropagation();
      handlers.onToggleIrrelevant(segment.id);
    });
    head.append(toggle);
    card.append(head);
    const body = el("p", "text");
    body.textContent = segment.sentence_ids.map((id) => byId.get(id)?.text ?? "").join(" ");
    card.append(body);
    card.addEventListener("click", () => handlers.onSelect(segment.id));
    pane.append(card);
  }
  return pane;
}

function reportPane(state: SessionState, handlers: Handlers): HTMLElement {
  const pane = el("section", "pane pane-report");
  pane.append(el("h2", undefined, "Report"));
  const selectedEntry = state.entries[state.selected];
  for (const segment of state.report.segments) {
    const card = el("article", `segment ${pairClass(segment.id)}`);
    card.dataset.rSeg = String(segment.id);
    if (!selectedEntry.irrelevant && segment.id === selectedEntry.r_seg) {
      card.classList.add("selected");
    }
    const head = el("header");
    head.append(el("span", "seg-id", `R${segment.id}`));
    if (segment.speaker) {
      head.append(el("span", "speaker", segment.speaker));
    }
    card.append(head);
    card.append(el("p", "text", segment.sentences.join(" ")));
    // Clicking a report segment reassigns the selected transcription segment.
    card.addEventListener("click", () => handlers.onAssign(segment.id));
    pane.append(card);
  }
  return pane;
}

export function renderSession(root: HTMLElement, state: SessionState, handlers: Handlers): void {
  root.replaceChildren();
  const bar = el("header", "topbar");
  bar.append(el("h1", undefined, state.meetingId));
  bar.append(el("span", `status status-${state.status}`, state.status));
  bar.append(el("span", "revision", `rev ${state.revision}`));
  bar.append(
    el("span", "score", `untouched ${(100 * annotatorScore(state)).toFixed(0)}%`),
  );
  const submit = el("button", "submit", "submit");
  submit.disabled = state.status !== "open";
  submit.addEventListener("click", handlers.onSubmit);
  bar.append(submit);
  root.append(bar);
  if (state.banner) {
    root.append(bannerNode(state.banner, handlers));
  }
  const panes = el("main", "panes");
  panes.append(transcriptionPane(state, handlers), reportPane(state, handlers));
  root.append(panes);
  root.append(
    el(
      "footer",
      "help",
      "up/down select a segment, left/right move its target, i marks irrelevant, click a report segment to assign",
    ),
  );
}

export function renderMeetingList(
  root: HTMLElement,
  meetings: MeetingSummary[],
  onOpen: (meetingId: string) => void,
): void {
  root.replaceChildren();
  root.append(el("h1", undefined, "Meetings"));
  const list = el("ul", "meeting-list");
  for (const meeting of meetings) {
    const item = el("li", `meeting status-${meeting.status}`);
    const link = el("a", undefined, meeting.meeting_id);
    link.href = `#${encodeURIComponent(meeting.meeting_id)}`;
    link.addEventListener("click", (event) => {
      event.preventDefault();
      onOpen(meeting.meeting_id);
    });
    item.append(link, el("span", "status", ` ${meeting.status} (rev ${meeting.revision})`));
    list.append(item);
  }
  root.append(list);
}

export function renderFatal(root: HTMLElement, message: string): void {
  root.replaceChildren();
  root.append(el("div", "banner banner-error", message));
}
