/**
 * Wire types for the annotation service API.
 *
 * Field names are the server's JSON keys verbatim (snake_case); everything
 * in this file describes data on the wire, not client state.
 */

export interface SentenceRow {
  id: number;
  text: string;
}

export interface TranscriptionSegmentRow {
  id: number;
  sentence_ids: number[];
}

export interface TranscriptionDoc {
  sentences: SentenceRow[];
  segments: TranscriptionSegmentRow[];
}

export interface ReportSegmentRow {
  id: number;
  speaker: string | null;
  sentences: string[];
}

export interface ReportDoc {
  segments: ReportSegmentRow[];
}

export interface AlignmentEntry {
  t_seg: number;
  r_seg: number;
  irrelevant: boolean;
}

export interface AlignmentDoc {
  meeting_id: string;
  source: string;
  revision: number;
  config: unknown;
  map: AlignmentEntry[];
}

export interface MeetingSummary {
  meeting_id: string;
  status: string;
  revision: number;
}

export interface MeetingView {
  meeting_id: string;
  status: string;
  revision: number;
  transcription: TranscriptionDoc;
  report: ReportDoc;
  pre_alignment: AlignmentDoc;
  working_alignment: AlignmentDoc;
}

export interface EntryUpdate {
  r_seg: number;
  irrelevant: boolean;
  expected_revision: number;
}

export interface EntryUpdateResult {
  meeting_id: string;
  revision: number;
}

export interface SubmitResult {
  meeting_id: string;
  status: string;
  annotator_score: number;
  revision: number;
}

export interface ProgressRow {
  meeting_id: string;
  annotator_score: number;
  status: string;
}

export interface ProgressReport {
  per_meeting: ProgressRow[];
  mean: number | null;
  median: number | null;
}

/** Error body shared by every non-2xx response. */
export interface ApiErrorBody {
  code: string;
  message: string;
  details: Record<string, unknown>;
}
