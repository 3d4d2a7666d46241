/**
 * Typed client for the annotation service.
 *
 * Every method maps to one endpoint and either resolves with the parsed
 * response body or rejects with an ApiError carrying the server's
 * {code, message, details} payload and the HTTP status.
 */

import type {
  ApiErrorBody,
  EntryUpdate,
  EntryUpdateResult,
  MeetingSummary,
  MeetingView,
  ProgressReport,
  SubmitResult,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly details: Record<string, unknown>;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.name = "ApiError";
    this.status = status;
    this.code = body.code;
    this.details = body.details;
  }

  /** Another writer advanced the revision; reload before retrying. */
  get isConflict(): boolean {
    return this.status === 409;
  }

  /** The request was understood but rejected (e.g. monotonicity). */
  get isValidation(): boolean {
    return this.status === 400;
  }

  get isNotFound(): boolean {
    return this.status === 404;
  }
}

async function errorBody(response: Response): Promise<ApiErrorBody> {
  try {
    const data: unknown = await response.json();
    if (data && typeof data === "object" && "code" in data && "message" in data) {
      const body = data as Partial<ApiErrorBody>;
      return {
        code: String(body.code),
        message: String(body.message),
        details: body.details ?? {},
      };
    }
  } catch {
    // not JSON; fall through to the generic shape
  }
  return { code: `http_${response.status}`, message: response.statusText, details: {} };
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  listMeetings(): Promise<MeetingSummary[]> {
    return this.request<MeetingSummary[]>("GET", "/api/meetings");
  }

  getMeeting(meetingId: string): Promise<MeetingView> {
    return this.request<MeetingView>("GET", `/api/meetings/${encodeURIComponent(meetingId)}`);
  }

  putEntry(meetingId: string, tSeg: number, update: EntryUpdate): Promise<EntryUpdateResult> {
    return this.request<EntryUpdateResult>(
      "PUT",
      `/api/meetings/${encodeURIComponent(meetingId)}/entries/${tSeg}`,
      update,
    );
  }

  submit(meetingId: string): Promise<SubmitResult> {
    return this.request<SubmitResult>(
      "POST",
      `/api/meetings/${encodeURIComponent(meetingId)}/submit`,
    );
  }

  progress(): Promise<ProgressReport> {
    return this.request<ProgressReport>("GET", "/api/progress");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      throw new ApiError(response.status, await errorBody(response));
    }
    return (await response.json()) as T;
  }
}
