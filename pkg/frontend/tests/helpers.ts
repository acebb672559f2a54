import type { ChatReply, ChatTransport, HealthInfo } from "../src/api.js";
import { ChatServiceError } from "../src/api.js";

export const PAGE_HTML = `
<header>
  <h1>ፊደልቦት</h1>
  <span id="health">…</span>
  <button id="debug-toggle" type="button">debug</button>
</header>
<main id="messages"></main>
<aside id="debug-panel" hidden>
  <dl>
    <dt>intent</dt><dd id="debug-headline">-</dd>
    <dt>context</dt><dd id="debug-context">-</dd>
    <dt>fallback</dt><dd id="debug-fallback">-</dd>
  </dl>
</aside>
<form id="composer">
  <input id="input" type="text">
  <button id="send" type="submit">ላክ</button>
</form>
`;

export function mountPage(): void {
  document.body.innerHTML = PAGE_HTML;
}

export function reply(overrides: Partial<ChatReply> = {}): ChatReply {
  return {
    reply: "ሰላም! እንዴት ልርዳዎት?",
    intent: "greet",
    confidence: 0.93,
    context: null,
    fallback: false,
    ...overrides,
  };
}

interface Pending {
  message: string;
  resolve: (r: ChatReply) => void;
  reject: (e: Error) => void;
}

/** Scripted transport: every chat() parks until the test releases it. */
export class FakeTransport implements ChatTransport {
  calls: string[] = [];
  pending: Pending[] = [];
  healthDoc: HealthInfo = { status: "ok", uptime_seconds: 1, active_users: 0, model_kind: "mnb" };

  chat(_userId: string, message: string): Promise<ChatReply> {
    this.calls.push(message);
    return new Promise<ChatReply>((resolve, reject) => {
      this.pending.push({ message, resolve, reject });
    });
  }

  health(): Promise<HealthInfo> {
    return Promise.resolve(this.healthDoc);
  }

  /** Release the oldest parked request. */
  answer(overrides: Partial<ChatReply> = {}): void {
    const p = this.pending.shift();
    if (!p) {
      throw new Error("no pending chat call");
    }
    p.resolve(reply({ reply: `re: ${p.message}`, ...overrides }));
  }

  fail(message = "boom"): void {
    const p = this.pending.shift();
    if (!p) {
      throw new Error("no pending chat call");
    }
    p.reject(new ChatServiceError(message));
  }
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

export function bubbles(): string[] {
  return Array.from(document.querySelectorAll("#messages .msg")).map(
    (el) => el.textContent ?? "",
  );
}
