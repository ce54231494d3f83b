/** Thin fetch client for /api/v1; every error becomes a typed ApiError. */

import type {
  CriteriaDoc,
  HistoryDoc,
  MetaDoc,
  Payload,
  ProfileDoc,
  SessionCreated,
  SubmitResult,
  Topic,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly details: unknown = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface LoginResult {
  token: string;
  username: string;
  role: string;
}

export interface SessionRequest {
  criteria: CriteriaDoc;
  education_level?: number;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class Api {
  token: string | null = null;
  /** Observer for every parsed response document; tests use it to audit disclosure. */
  onDocument: ((path: string, doc: unknown) => void) | null = null;

  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  async login(username: string, password: string): Promise<LoginResult> {
    const result = await this.request<LoginResult>("POST", "/login", { username, password });
    this.token = result.token;
    return result;
  }

  logout(): void {
    this.token = null;
  }

  health(): Promise<{ status: string; bank_version: number; questions: number }> {
    return this.request("GET", "/health");
  }

  meta(): Promise<MetaDoc> {
    return this.request("GET", "/meta");
  }

  topics(): Promise<{ topics: Topic[] }> {
    return this.request("GET", "/topics");
  }

  createSession(body: SessionRequest): Promise<SessionCreated> {
    return this.request("POST", "/sessions", body);
  }

  getSession(sessionId: string): Promise<SessionCreated & { answered: string[] }> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}`);
  }

  postAnswers(
    sessionId: string,
    answers: Record<string, Payload | null>,
  ): Promise<{ session_id: string; state: string; answered: string[] }> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/answers`, { answers });
  }

  submit(sessionId: string): Promise<SubmitResult> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/submit`);
  }

  profile(): Promise<ProfileDoc> {
    return this.request("GET", "/profile");
  }

  history(): Promise<HistoryDoc> {
    return this.request("GET", "/history");
  }

  addTopic(topic: { id: string; name: string; parent?: string }): Promise<unknown> {
    return this.request("POST", "/topics", topic);
  }

  addQuestion(doc: Record<string, unknown>): Promise<unknown> {
    return this.request("POST", "/questions", doc);
  }

  listQuestions(): Promise<{ questions: Record<string, unknown>[]; bank_version: number }> {
    return this.request("GET", "/questions");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["content-type"] = "application/json";
    if (this.token) headers["authorization"] = `Bearer ${this.token}`;

    const response = await this.fetchImpl(`${this.baseUrl}/api/v1${path}`, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });

    let doc: unknown = null;
    try {
      doc = await response.json();
    } catch {
      throw new ApiError(response.status, "bad_response", "response was not JSON");
    }
    this.onDocument?.(path, doc);

    if (!response.ok) {
      const err = doc as { code?: string; message?: string; details?: unknown };
      throw new ApiError(
        response.status,
        err.code ?? "error",
        err.message ?? `request failed with ${response.status}`,
        err.details ?? null,
      );
    }
    return doc as T;
  }
}
