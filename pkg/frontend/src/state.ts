/**
 * Client session state and the controller that mutates it.
 *
 * All state transitions are pure copies so rollbacks are trivial; the
 * controller applies an edit optimistically, sends the PUT carrying the
 * revision the edit was based on, and reconciles with the server outcome:
 * success keeps the optimistic state (bumping the revision), a validation
 * rejection rolls back and surfaces the violation, a revision conflict
 * rolls back and reloads so the annotator re-confirms on fresh state.
 */

import { ApiClient, ApiError } from "./api.js";
import type { AlignmentEntry, MeetingView, ReportDoc, TranscriptionDoc } from "./types.js";

export type Banner =
  | { kind: "violation"; message: string; tSeg: number; neighborTSeg: number }
  | { kind: "stale"; message: string }
  | { kind: "error"; message: string };

export interface SessionState {
  meetingId: string;
  status: string;
  revision: number;
  transcription: TranscriptionDoc;
  report: ReportDoc;
  pre: AlignmentEntry[];
  entries: AlignmentEntry[];
  selected: number;
  pending: boolean;
  banner: Banner | null;
}

export function fromView(view: MeetingView, selected = 0): SessionState {
  const entries = view.working_alignment.map.map((e) => ({ ...e }));
  return {
    meetingId: view.meeting_id,
    status: view.status,
    revision: view.revision,
    transcription: view.transcription,
    report: view.report,
    pre: view.pre_alignment.map.map((e) => ({ ...e })),
    entries,
    selected: clampIndex(selected, entries.length),
    pending: false,
    banner: null,
  };
}

function clampIndex(index: number, length: number): number {
  return Math.max(0, Math.min(index, length - 1));
}

export function entriesEqual(a: AlignmentEntry[], b: AlignmentEntry[]): boolean {
  return (
    a.length === b.length &&
    a.every(
      (e, k) =>
        e.t_seg === b[k].t_seg && e.r_seg === b[k].r_seg && e.irrelevant === b[k].irrelevant,
    )
  );
}

/** Fraction of pre-aligned segments still untouched (mapping and flag). */
export function annotatorScore(state: SessionState): number {
  if (state.pre.length === 0) {
    return 1;
  }
  let same = 0;
  for (let k = 0; k < state.pre.length; k += 1) {
    const pre = state.pre[k];
    const now = state.entries[k];
    if (pre.r_seg === now.r_seg && pre.irrelevant === now.irrelevant) {
      same += 1;
    }
  }
  return same / state.pre.length;
}

/**
 * Mirror of the server's order check: a segment may not map before its left
 * neighbor nor past its right one. Returns the violated neighbor, if any.
 */
export function checkMonotone(
  entries: AlignmentEntry[],
  tSeg: number,
  rSeg: number,
): { neighborTSeg: number; neighborRSeg: number } | null {
  if (tSeg > 0 && rSeg < entries[tSeg - 1].r_seg) {
    return { neighborTSeg: tSeg - 1, neighborRSeg: entries[tSeg - 1].r_seg };
  }
  if (tSeg + 1 < entries.length && rSeg > entries[tSeg + 1].r_seg) {
    return { neighborTSeg: tSeg + 1, neighborRSeg: entries[tSeg + 1].r_seg };
  }
  return null;
}

function withEntry(state: SessionState, tSeg: number, entry: AlignmentEntry): SessionState {
  const entries = state.entries.map((e, k) => (k === tSeg ? entry : e));
  return { ...state, entries };
}

export class SessionController {
  state: SessionState | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: (state: SessionState) => void = () => {},
  ) {}

  private setState(state: SessionState): void {
    this.state = state;
    this.onChange(state);
  }

  async load(meetingId: string): Promise<void> {
    const view = await this.api.getMeeting(meetingId);
    this.setState(fromView(view, this.state?.selected ?? 0));
  }

  select(delta: number): void {
    const state = this.mustState();
    this.setState({
      ...state,
      selected: clampIndex(state.selected + delta, state.entries.length),
      banner: null,
    });
  }

  dismissBanner(): void {
    const state = this.mustState();
    this.setState({ ...state, banner: null });
  }

  /** Move the selected segment's target left or right by one report segment. */
  retarget(delta: number): Promise<void> {
    const state = this.mustState();
    const entry = state.entries[state.selected];
    const target = entry.r_seg + delta;
    if (target < 0 || target >= state.report.segments.length) {
      return Promise.resolve();
    }
    return this.reassign(state.selected, target);
  }

  async reassign(tSeg: number, rSeg: number, irrelevant?: boolean): Promise<void> {
    const state = this.mustState();
    if (state.pending || state.status !== "open") {
      return;
    }
    const before = state.entries[tSeg];
    const entry: AlignmentEntry = {
      t_seg: tSeg,
      r_seg: rSeg,
      irrelevant: irrelevant ?? before.irrelevant,
    };
    // Optimistic: draw the new pairing immediately, reconcile below.
    const optimistic = withEntry(
      { ...state, pending: true, banner: null, selected: tSeg },
      tSeg,
      entry,
    );
    this.setState(optimistic);
    try {
      const result = await this.api.putEntry(state.meetingId, tSeg, {
        r_seg: entry.r_seg,
        irrelevant: entry.irrelevant,
        expected_revision: state.revision,
      });
      this.setState({ ...optimistic, revision: result.revision, pending: false });
    } catch (err) {
      await this.recover(err, state, tSeg);
    }
  }

  toggleIrrelevant(tSeg?: number): Promise<void> {
    const state = this.mustState();
    const target = tSeg ?? state.selected;
    const entry = state.entries[target];
    return this.reassign(target, entry.r_seg, !entry.irrelevant);
  }

  async submit(): Promise<number> {
    const state = this.mustState();
    const result = await this.api.submit(state.meetingId);
    this.setState({
      ...state,
      status: result.status,
      revision: result.revision,
      banner: null,
    });
    return result.annotator_score;
  }

  private async recover(err: unknown, previous: SessionState, tSeg: number): Promise<void> {
    if (!(err instanceof ApiError)) {
      this.setState({ ...previous, pending: false, banner: null });
      throw err;
    }
    if (err.isConflict) {
      // Someone else won the revision race: replay nothing, show fresh state.
      const view = await this.api.getMeeting(previous.meetingId);
      const reloaded = fromView(view, previous.selected);
      this.setState({
        ...reloaded,
        banner: { kind: "stale", message: err.message },
      });
      return;
    }
    const banner: Banner = err.isValidation
      ? {
          kind: "violation",
          message: err.message,
          tSeg,
          neighborTSeg: Number(err.details["neighbor_t_seg"] ?? -1),
        }
      : { kind: "error", message: err.message };
    this.setState({ ...previous, pending: false, banner });
  }

  private mustState(): SessionState {
    if (this.state === null) {
      throw new Error("no meeting loaded");
    }
    return this.state;
  }
}
