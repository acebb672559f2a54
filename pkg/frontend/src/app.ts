import { ChatClient, type ChatTransport } from "./api.js";
import { describeReply } from "./debug.js";
import { botMessage, Transcript, userMessage } from "./messages.js";
import { sessionUserId } from "./session.js";
import { ChatUi } from "./ui.js";

/** Glues transcript, client and DOM together.
 *
 * Sends run through a promise chain, so even programmatic rapid calls hit
 * the service one at a time and replies land in request order. The input is
 * disabled while a request is in flight, matching the service's per-user
 * turn serialization.
 */
export class ChatApp {
  readonly transcript = new Transcript();
  private chain: Promise<void> = Promise.resolve();

  constructor(
    private ui: ChatUi,
    private client: ChatTransport,
    private userId: string,
  ) {}

  /** Entry point for the composer; empty input is ignored. */
  submit(raw: string): Promise<void> {
    const text = raw.trim();
    if (!text) {
      return this.chain;
    }
    return this.enqueue(text, true);
  }

  private enqueue(text: string, echoUser: boolean): Promise<void> {
    this.chain = this.chain.then(() => this.runTurn(text, echoUser));
    return this.chain;
  }

  private async runTurn(text: string, echoUser: boolean): Promise<void> {
    if (echoUser) {
      const mine = this.transcript.append(userMessage(text));
      this.ui.addMessage(mine);
    }
    this.ui.setBusy(true);
    try {
      const reply = await this.client.chat(this.userId, text);
      const answer = this.transcript.append(botMessage(reply));
      this.ui.addMessage(answer);
      this.ui.updateDebug(describeReply(answer));
    } catch (err) {
      // the user bubble stays; retry resends the same text without it
      const note = err instanceof Error ? err.message : String(err);
      this.ui.addError(note, () => void this.enqueue(text, false));
    } finally {
      this.ui.setBusy(false);
    }
  }
}

type StorageLike = Pick<Storage, "getItem" | "setItem">;

export interface InitOptions {
  baseUrl?: string;
  client?: ChatTransport;
  storage: StorageLike;
}

/** Wire the page. Returns the pieces so tests can drive and inspect them. */
export function initApp(doc: Document, options: InitOptions) {
  const client = options.client ?? new ChatClient(options.baseUrl ?? "");
  const ui = new ChatUi(doc);
  const userId = sessionUserId(options.storage);
  const app = new ChatApp(ui, client, userId);

  const form = doc.getElementById("composer") as HTMLFormElement;
  const input = doc.getElementById("input") as HTMLInputElement;
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value;
    input.value = "";
    void app.submit(text);
  });

  const toggle = doc.getElementById("debug-toggle");
  toggle?.addEventListener("click", () => ui.toggleDebug());

  client
    .health()
    .then((h) => ui.setHealth(`${h.status} · ${h.model_kind ?? "?"}`))
    .catch(() => ui.setHealth("offline"));

  return { app, ui, client, userId };
}
