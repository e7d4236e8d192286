/** User-facing copy for every error code the engine can emit.
 * A test checks this map against GET /meta/error-codes, so a new engine
 * code without copy here fails the suite instead of rendering "unknown". */

import { ApiError } from "./api.js";
import type { ErrorBody } from "./types.js";

export const ERROR_MESSAGES: Record<string, string> = {
  "bad-branch-point": "That point in the history can't be branched from.",
  "corrupt-log": "This session's file is damaged and can't be replayed.",
  "duplicate-definition": "That definition already exists for this criterion.",
  "duplicate-label": "A criterion with that name already exists.",
  "empty-decision-text": "Describe the decision first; that field can't be empty.",
  "empty-text": "Write something first; empty entries aren't saved.",
  "invalid-config": "The session settings are invalid.",
  "invalid-payload": "The app sent something the server didn't understand.",
  "io-error": "The server couldn't read or write the session file.",
  "malformed-response": "The generator replied with something unusable. Try again.",
  "no-active-criteria": "Keep at least one criterion before continuing.",
  "provider-failure": "The generator is unreachable right now. Try again.",
  "seq-gap": "This session's history has a gap and can't be replayed.",
  "too-many-criteria": "That's more criteria than a round allows.",
  "unassigned-tiers": "Every criterion needs a tier before you continue.",
  "unknown-criterion": "That criterion no longer exists.",
  "unknown-definition": "That definition no longer exists.",
  "unknown-option": "That option card no longer exists.",
  "unknown-session": "That session doesn't exist on this server.",
  "unsupported-version": "This session file was written by an incompatible version.",
  "wrong-count": "The generated batch had the wrong number of items.",
  "wrong-keep-count": "Keep exactly the target number of options to continue.",
  "wrong-phase": "That action isn't available at this step.",
};

/** Human message for an error; keeps count details when the server sent them. */
export function messageFor(error: unknown): string {
  if (error instanceof ApiError) {
    const copy = ERROR_MESSAGES[error.code];
    if (copy === undefined) {
      return `${error.message} [${error.code}]`;
    }
    if (error.code === "wrong-keep-count") {
      const body = error.body as Partial<ErrorBody> & { actual?: number; target?: number };
      if (typeof body.actual === "number" && typeof body.target === "number") {
        return `You kept ${body.actual}; keep exactly ${body.target} to continue.`;
      }
    }
    return copy;
  }
  if (error instanceof Error) {
    return error.message;
  }
  return String(error);
}
