// Thin typed client for the two service endpoints the UI is allowed to use.

export interface ChatReply {
  reply: string;
  intent: string | null;
  confidence: number;
  context: string | null;
  fallback: boolean;
}

export interface HealthInfo {
  status: string;
  uptime_seconds: number;
  active_users: number;
  model_kind?: string;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ChatServiceError extends Error {
  status: number | null;

  constructor(message: string, status: number | null = null) {
    super(message);
    this.name = "ChatServiceError";
    this.status = status;
  }
}

function asChatReply(doc: unknown): ChatReply {
  const d = doc as Record<string, unknown>;
  if (
    typeof d !== "object" || d === null ||
    typeof d.reply !== "string" ||
    typeof d.confidence !== "number" ||
    typeof d.fallback !== "boolean" ||
    (d.intent !== null && typeof d.intent !== "string") ||
    (d.context !== null && typeof d.context !== "string")
  ) {
    throw new ChatServiceError("malformed /chat response");
  }
  return {
    reply: d.reply,
    intent: d.intent as string | null,
    confidence: d.confidence,
    context: d.context as string | null,
    fallback: d.fallback,
  };
}

export interface ChatTransport {
  chat(userId: string, message: string): Promise<ChatReply>;
  health(): Promise<HealthInfo>;
}

export class ChatClient implements ChatTransport {
  private baseUrl: string;
  private fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    // bind the global so fetch does not lose its expected receiver
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  async chat(userId: string, message: string): Promise<ChatReply> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}/chat`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ user_id: userId, message }),
      });
    } catch (err) {
      throw new ChatServiceError(`service unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      throw new ChatServiceError(`chat failed (${response.status})`, response.status);
    }
    let doc: unknown;
    try {
      doc = await response.json();
    } catch {
      throw new ChatServiceError("chat response is not JSON", response.status);
    }
    return asChatReply(doc);
  }

  async health(): Promise<HealthInfo> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}/health`);
    } catch (err) {
      throw new ChatServiceError(`service unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      throw new ChatServiceError(`health failed (${response.status})`, response.status);
    }
    return (await response.json()) as HealthInfo;
  }
}
