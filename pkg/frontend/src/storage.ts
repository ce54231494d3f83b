/** Persists in-flight quiz answers so a reload resumes instead of restarting.

Only the session id and the learner's own draft payloads are stored; nothing
from the server's grading side ever lands here.
*/

import type { Payload } from "./types.js";

const KEY = "selfassess.quiz";

export interface DraftSession {
  sessionId: string;
  answers: Record<string, Payload>;
}

export function loadDraft(storage: Storage): DraftSession | null {
  const raw = storage.getItem(KEY);
  if (raw === null) return null;
  try {
    const doc = JSON.parse(raw) as DraftSession;
    if (typeof doc.sessionId !== "string" || typeof doc.answers !== "object") return null;
    return doc;
  } catch {
    return null;
  }
}

export function saveDraft(storage: Storage, draft: DraftSession): void {
  storage.setItem(KEY, JSON.stringify(draft));
}

export function saveAnswer(storage: Storage, sessionId: string, questionId: string, payload: Payload): void {
  const draft = loadDraft(storage);
  const answers = draft && draft.sessionId === sessionId ? draft.answers : {};
  answers[questionId] = payload;
  saveDraft(storage, { sessionId, answers });
}

export function clearDraft(storage: Storage): void {
  storage.removeItem(KEY);
}
