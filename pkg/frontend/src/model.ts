/**
 * Client-side table state: the server's view plus UI-only fields, updated by
 * pure functions only. The server stays the sole authority on rules — the
 * model never computes legality itself, it only carries the server's `legal`
 * list and hides it when it is not the human's turn.
 */

import type { GameEvent, Seat, Team, TrickView, View } from "./api.js";

export type Connection = "connecting" | "live" | "reconnecting" | "closed";

export interface RoundSummary {
  round: number;
  bids: Record<Seat, number>;
  blind: Record<Seat, boolean>;
  takes: Record<Seat, number>;
  points: Record<Team, number>;
  scores: Record<Team, number>;
  bags: Record<Team, number>;
}

export interface TableViewModel {
  view: View;
  /** Card the human has picked but not yet submitted. */
  selectedCard: string | null;
  /** Completed tricks waiting for their sweep animation. */
  animationQueue: GameEvent[];
  connection: Connection;
  /** Inline message from the last rejected action, cleared on progress. */
  error: string | null;
  /** Most recent round-end breakdown, for the score panel. */
  lastRound: RoundSummary | null;
}

export type UIAction =
  | { kind: "bid"; bid: number }
  | { kind: "blind"; choice: "peek" | "blind" }
  | { kind: "card"; card: string };

export const SEATS: readonly Seat[] = ["N", "E", "S", "W"];

export function partnerOf(seat: Seat): Seat {
  return SEATS[SEATS.indexOf(seat) ^ 2];
}

export function nextSeat(seat: Seat): Seat {
  return SEATS[(SEATS.indexOf(seat) + 1) % 4];
}

export function freshModel(
  view: View,
  connection: Connection = "connecting",
): TableViewModel {
  return {
    view,
    selectedCard: null,
    animationQueue: [],
    connection,
    error: null,
    lastRound: null,
  };
}

/** True when the table is waiting on the human. */
export function isMyTurn(model: TableViewModel): boolean {
  const v = model.view;
  return v.phase !== "done" && v.pending_seat === v.seat && v.legal.length > 0;
}

/**
 * What the human may do right now — exactly the server's list when it is
 * their turn, empty otherwise.
 */
export function legalActions(model: TableViewModel): Array<number | string> {
  return isMyTurn(model) ? [...model.view.legal] : [];
}

/** Select a hand card; clicks outside the advertised legal set are ignored. */
export function selectCard(model: TableViewModel, card: string): TableViewModel {
  if (model.view.phase !== "play" || !legalActions(model).includes(card)) {
    return model;
  }
  return { ...model, selectedCard: card };
}

export function withConnection(
  model: TableViewModel,
  connection: Connection,
): TableViewModel {
  return model.connection === connection ? model : { ...model, connection };
}

export function withError(
  model: TableViewModel,
  error: string | null,
): TableViewModel {
  return { ...model, error };
}

/** Drop the oldest pending sweep once its animation has been shown. */
export function shiftAnimation(model: TableViewModel): TableViewModel {
  if (model.animationQueue.length === 0) {
    return model;
  }
  return { ...model, animationQueue: model.animationQueue.slice(1) };
}

/**
 * Adopt an authoritative view returned by the server. Stale responses (an
 * older `seq`) are ignored; progress clears any inline error and drops a
 * selected card that is no longer in hand.
 */
export function reconcile(model: TableViewModel, view: View): TableViewModel {
  if (view.seq < model.view.seq) {
    return model;
  }
  const progressed = view.seq > model.view.seq;
  const selected =
    model.selectedCard !== null && view.hand.includes(model.selectedCard)
      ? model.selectedCard
      : null;
  return {
    ...model,
    view,
    selectedCard: selected,
    error: progressed ? null : model.error,
  };
}

function emptySeatRecord<T>(value: T): Record<Seat, T> {
  return { N: value, E: value, S: value, W: value };
}

/** The score-panel summary carried by a round-end event. */
export function roundSummaryOf(event: GameEvent): RoundSummary {
  return {
    round: event.round as number,
    bids: event.bids as Record<Seat, number>,
    blind: event.blind as Record<Seat, boolean>,
    takes: event.takes as Record<Seat, number>,
    points: event.points as Record<Team, number>,
    scores: event.scores as Record<Team, number>,
    bags: event.bags as Record<Team, number>,
  };
}

/**
 * Reduce one public event into the view. Only the next event in sequence is
 * applied (`event.seq === view.seq + 1`); anything already seen or beyond a
 * gap leaves the model unchanged, and the session loop refetches the view to
 * close gaps. Fields the event cannot reveal (the hand after a new deal, the
 * legal list) are cleared rather than guessed, so the table never shows stale
 * interactivity between reconciles.
 */
export function applyEvent(
  model: TableViewModel,
  event: GameEvent,
): TableViewModel {
  if (event.seq !== model.view.seq + 1) {
    return model;
  }
  const v = model.view;
  const base: View = { ...v, seq: event.seq, pending_seat: null, legal: [] };
  switch (event.type) {
    case "round_start": {
      return {
        ...model,
        view: {
          ...base,
          round: event.round as number,
          dealer: event.dealer as Seat,
          scores: event.scores as Record<Team, number>,
          bags: event.bags as Record<Team, number>,
          phase: v.phase === "done" ? v.phase : "bid",
          bids: emptySeatRecord<number | null>(null),
          blind: emptySeatRecord(false),
          hand: [],
          current_trick: null,
          tricks: [],
          trick_counts: emptySeatRecord(0),
        },
        selectedCard: null,
      };
    }
    case "bid": {
      const seat = event.seat as Seat;
      return {
        ...model,
        view: {
          ...base,
          phase: v.phase === "done" ? v.phase : "bid",
          bids: { ...v.bids, [seat]: event.bid as number },
          blind: { ...v.blind, [seat]: event.blind as boolean },
        },
      };
    }
    case "peek": {
      const seat = event.seat as Seat;
      return {
        ...model,
        view: {
          ...base,
          blind_offer: seat === v.seat ? false : v.blind_offer,
        },
      };
    }
    case "play": {
      const seat = event.seat as Seat;
      const card = event.card as string;
      const open = v.current_trick !== null && v.current_trick.plays.length < 4;
      const trick: TrickView = open
        ? { ...v.current_trick!, plays: [...v.current_trick!.plays, card] }
        : { leader: seat, plays: [card] };
      const hand = seat === v.seat ? v.hand.filter((c) => c !== card) : v.hand;
      return {
        ...model,
        view: { ...base, phase: "play", current_trick: trick, hand },
        selectedCard:
          model.selectedCard === card ? null : model.selectedCard,
      };
    }
    case "trick": {
      const winner = event.winner as Seat;
      const done: TrickView = {
        leader: event.leader as Seat,
        plays: event.plays as string[],
        winner,
      };
      return {
        ...model,
        view: {
          ...base,
          current_trick: null,
          tricks: [...v.tricks, done],
          trick_counts: {
            ...v.trick_counts,
            [winner]: v.trick_counts[winner] + 1,
          },
        },
        animationQueue: [...model.animationQueue, event],
      };
    }
    case "round": {
      const summary = roundSummaryOf(event);
      return {
        ...model,
        view: {
          ...base,
          scores: summary.scores,
          bags: summary.bags,
          hand: [],
          current_trick: null,
        },
        lastRound: summary,
        selectedCard: null,
      };
    }
    case "game": {
      return {
        ...model,
        view: {
          ...base,
          phase: "done",
          winner: event.winner as Team,
          scores: event.scores as Record<Team, number>,
          hand: [],
          current_trick: null,
        },
        selectedCard: null,
      };
    }
    default:
      return { ...model, view: base };
  }
}
