import type { DebugView } from "./debug.js";
import type { ChatMessage } from "./messages.js";

interface Elements {
  messages: HTMLElement;
  input: HTMLInputElement;
  send: HTMLButtonElement;
  debugPanel: HTMLElement;
  debugHeadline: HTMLElement;
  debugContext: HTMLElement;
  debugFallback: HTMLElement;
  health: HTMLElement | null;
}

function grab(doc: Document, id: string): HTMLElement {
  const el = doc.getElementById(id);
  if (!el) {
    throw new Error(`missing #${id}`);
  }
  return el;
}

export class ChatUi {
  private doc: Document;
  private el: Elements;

  constructor(doc: Document) {
    this.doc = doc;
    this.el = {
      messages: grab(doc, "messages"),
      input: grab(doc, "input") as HTMLInputElement,
      send: grab(doc, "send") as HTMLButtonElement,
      debugPanel: grab(doc, "debug-panel"),
      debugHeadline: grab(doc, "debug-headline"),
      debugContext: grab(doc, "debug-context"),
      debugFallback: grab(doc, "debug-fallback"),
      health: doc.getElementById("health"),
    };
  }

  addMessage(message: ChatMessage): void {
    const bubble = this.doc.createElement("div");
    bubble.className = `msg ${message.sender}${message.fallback ? " fallback" : ""}`;
    bubble.textContent = message.text;
    this.el.messages.appendChild(bubble);
    this.el.messages.scrollTop = this.el.messages.scrollHeight;
  }

  /** Error bubble with a retry button; retrying removes the bubble. */
  addError(text: string, onRetry: () => void): void {
    const bubble = this.doc.createElement("div");
    bubble.className = "msg error";
    const label = this.doc.createElement("span");
    label.textContent = text;
    const retry = this.doc.createElement("button");
    retry.type = "button";
    retry.className = "retry";
    retry.textContent = "እንደገና ይሞክሩ";
    retry.addEventListener("click", () => {
      bubble.remove();
      onRetry();
    });
    bubble.append(label, retry);
    this.el.messages.appendChild(bubble);
    this.el.messages.scrollTop = this.el.messages.scrollHeight;
  }

  setBusy(busy: boolean): void {
    this.el.input.disabled = busy;
    this.el.send.disabled = busy;
    if (!busy) {
      this.el.input.focus();
    }
  }

  get busy(): boolean {
    return this.el.input.disabled;
  }

  updateDebug(view: DebugView): void {
    this.el.debugHeadline.textContent = view.headline;
    this.el.debugContext.textContent = view.context;
    this.el.debugFallback.textContent = view.fallback ? "yes" : "no";
  }

  toggleDebug(): void {
    this.el.debugPanel.hidden = !this.el.debugPanel.hidden;
  }

  get debugVisible(): boolean {
    return !this.el.debugPanel.hidden;
  }

  setHealth(text: string): void {
    if (this.el.health) {
      this.el.health.textContent = text;
    }
  }
}
