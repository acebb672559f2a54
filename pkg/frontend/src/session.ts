const KEY = "fidelbot.user";

type StorageLike = Pick<Storage, "getItem" | "setItem">;

function randomId(): string {
  if (typeof crypto !== "undefined" && "randomUUID" in crypto) {
    return crypto.randomUUID();
  }
  return `u-${Date.now().toString(36)}-${Math.random().toString(36).slice(2, 10)}`;
}

/** Per-browser-session user id; the service keys conversation context on it. */
export function sessionUserId(storage: StorageLike): string {
  const existing = storage.getItem(KEY);
  if (existing) {
    return existing;
  }
  const fresh = randomId();
  storage.setItem(KEY, fresh);
  return fresh;
}
