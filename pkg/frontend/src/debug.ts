import type { ChatMessage } from "./messages.js";

export interface DebugView {
  headline: string;
  context: string;
  fallback: boolean;
}

/** Panel text for the most recent bot reply: tag and confidence to two
 * decimals, or a fallback marker with no tag. */
export function describeReply(message: ChatMessage): DebugView {
  const context = message.context ?? "-";
  if (message.fallback || message.intent === null) {
    return { headline: "fallback", context, fallback: true };
  }
  const confidence =
    message.confidence === null ? "?" : message.confidence.toFixed(2);
  return {
    headline: `${message.intent} / ${confidence}`,
    context,
    fallback: false,
  };
}
