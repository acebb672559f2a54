import type { ChatReply } from "./api.js";

export type Sender = "user" | "bot";

export interface ChatMessage {
  sender: Sender;
  text: string;
  intent: string | null;
  confidence: number | null;
  context: string | null;
  fallback: boolean;
  timestamp: number;
}

export function userMessage(text: string, now = Date.now()): ChatMessage {
  return {
    sender: "user",
    text,
    intent: null,
    confidence: null, // user messages never carry one
    context: null,
    fallback: false,
    timestamp: now,
  };
}

export function botMessage(reply: ChatReply, now = Date.now()): ChatMessage {
  return {
    sender: "bot",
    text: reply.reply,
    intent: reply.intent,
    confidence: reply.confidence,
    context: reply.context,
    fallback: reply.fallback,
    timestamp: now,
  };
}

/** Append-only message log; the session transcript can never reorder. */
export class Transcript {
  private log: ChatMessage[] = [];

  append(message: ChatMessage): ChatMessage {
    this.log.push(message);
    return message;
  }

  get messages(): readonly ChatMessage[] {
    return this.log;
  }

  get length(): number {
    return this.log.length;
  }

  lastBot(): ChatMessage | null {
    for (let i = this.log.length - 1; i >= 0; i--) {
      const m = this.log[i];
      if (m && m.sender === "bot") {
        return m;
      }
    }
    return null;
  }
}
