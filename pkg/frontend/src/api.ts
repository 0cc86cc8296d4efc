/** Typed client for the play-service HTTP API (see docs/service-api.md). */

export type Seat = "N" | "E" | "S" | "W";
export type Team = "NS" | "EW";
export type Phase = "blind_choice" | "bid" | "play" | "done";

export interface TrickView {
  leader: Seat;
  plays: string[];
  winner?: Seat;
}

export interface View {
  session: string;
  seat: Seat;
  seq: number;
  phase: Phase;
  pending_seat: Seat | null;
  round: number;
  dealer: Seat;
  blind_offer: boolean;
  hand: string[];
  bids: Record<Seat, number | null>;
  blind: Record<Seat, boolean>;
  current_trick: TrickView | null;
  tricks: TrickView[];
  trick_counts: Record<Seat, number>;
  scores: Record<Team, number>;
  bags: Record<Team, number>;
  goals: { win: number; lose: number };
  legal: Array<number | string>;
  winner: Team | null;
}

export interface GameEvent {
  seq: number;
  type: string;
  [key: string]: unknown;
}

export interface ActionResult {
  view: View;
  events: GameEvent[];
}

export interface SessionOptions {
  human_seat?: Seat;
  bot_bidder?: string;
  bot_player?: string;
  win_goal?: number;
  lose_goal?: number;
  seed?: number;
  blind_nil?: boolean;
  bot_delay?: number;
}

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ServiceError";
  }
}

/** Subset of fetch the client needs; injectable for tests and stubs. */
export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ServiceClient {
  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const res = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const body = res.status === 204 ? null : await res.json();
    if (!res.ok) {
      const detail =
        body !== null && typeof body === "object" && "detail" in body
          ? String((body as { detail: unknown }).detail)
          : `HTTP ${res.status}`;
      throw new ServiceError(res.status, detail);
    }
    return body;
  }

  private post(path: string, payload: unknown): Promise<unknown> {
    return this.request(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  async createSession(
    options: SessionOptions = {},
  ): Promise<{ session: string; view: View }> {
    return (await this.post("/sessions", options)) as {
      session: string;
      view: View;
    };
  }

  async view(session: string): Promise<View> {
    return (await this.request(`/sessions/${session}/view`)) as View;
  }

  async bid(session: string, seq: number, bid: number): Promise<ActionResult> {
    return (await this.post(`/sessions/${session}/bid`, {
      seq,
      bid,
    })) as ActionResult;
  }

  async blindChoice(
    session: string,
    seq: number,
    action: "peek" | "blind",
  ): Promise<ActionResult> {
    return (await this.post(`/sessions/${session}/bid`, {
      seq,
      action,
    })) as ActionResult;
  }

  async card(
    session: string,
    seq: number,
    card: string,
  ): Promise<ActionResult> {
    return (await this.post(`/sessions/${session}/card`, {
      seq,
      card,
    })) as ActionResult;
  }

  async events(
    session: string,
    after = 0,
  ): Promise<{ events: GameEvent[]; seq: number }> {
    return (await this.request(
      `/sessions/${session}/events?after=${after}&stream=false`,
    )) as { events: GameEvent[]; seq: number };
  }

  async close(session: string): Promise<void> {
    await this.request(`/sessions/${session}`, { method: "DELETE" });
  }

  /**
   * Live server-sent events after `after`, in order. Ends normally when the
   * server closes the stream (after the final game event); throws on network
   * failure or abort, leaving reconnection to the caller.
   */
  async *eventStream(
    session: string,
    after = 0,
    signal?: AbortSignal,
  ): AsyncGenerator<GameEvent> {
    const res = await this.fetchImpl(
      `${this.baseUrl}/sessions/${session}/events?after=${after}&stream=true`,
      {
        headers: {
          accept: "text/event-stream",
          "last-event-id": String(after),
        },
        signal,
      },
    );
    if (!res.ok || !res.body) {
      throw new ServiceError(res.status, "event stream unavailable");
    }
    const reader = res.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    try {
      for (;;) {
        const { value, done } = await reader.read();
        if (done) {
          return;
        }
        buffer += decoder.decode(value, { stream: true });
        let cut: number;
        while ((cut = buffer.indexOf("\n\n")) >= 0) {
          const lines = buffer.slice(0, cut).split("\n");
          buffer = buffer.slice(cut + 2);
          const data = lines
            .filter((line) => line.startsWith("data:"))
            .map((line) => line.slice(5).trim())
            .join("\n");
          if (data) {
            yield JSON.parse(data) as GameEvent;
          }
        }
      }
    } finally {
      reader.releaseLock();
      await res.body.cancel().catch(() => undefined);
    }
  }
}
