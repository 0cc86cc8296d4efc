/**
 * Pure projection of a TableViewModel onto a screen description: plain data
 * a DOM layer (or a test) can display without any further game knowledge.
 * The human sits at the bottom, their partner across the top, the opponents
 * left and right. Hidden hands never appear — other seats only expose a
 * face-down card count derived from public plays.
 */

import type { Seat, Team } from "./api.js";
import {
  TableViewModel,
  isMyTurn,
  legalActions,
  nextSeat,
  partnerOf,
  type Connection,
  type RoundSummary,
} from "./model.js";

export interface SeatPanel {
  seat: Seat;
  role: "you" | "partner" | "left" | "right";
  bid: number | null;
  blind: boolean;
  tricks: number;
  /** Face-down count for the other seats; the human's own count instead. */
  cardsLeft: number;
  /** This seat is the one the table is waiting on. */
  acting: boolean;
}

export interface HandCard {
  card: string;
  enabled: boolean;
  selected: boolean;
}

export interface BidOption {
  value: number;
  label: string;
  /** The nil bid is called out visually. */
  highlight: boolean;
  enabled: boolean;
}

export interface TrickCard {
  seat: Seat;
  card: string;
}

export interface Screen {
  round: number;
  dealer: Seat;
  seats: {
    bottom: SeatPanel;
    left: SeatPanel;
    top: SeatPanel;
    right: SeatPanel;
  };
  /** Cards on the table right now, in play order. */
  trick: TrickCard[];
  /** Oldest completed trick still owed its sweep animation. */
  sweep: { winner: Seat; plays: string[] } | null;
  hand: HandCard[];
  /** Bid picker, present only while the table waits on the human's bid. */
  bidPicker: BidOption[] | null;
  /** Blind-nil offer, present only during the human's pre-look choice. */
  blindPrompt: { options: Array<"peek" | "blind"> } | null;
  scores: Record<Team, { points: number; bags: number }>;
  goals: { win: number; lose: number };
  roundSummary: RoundSummary | null;
  /** Inline rejection or connection message. */
  message: string | null;
  /** End-of-game banner. */
  banner: string | null;
  connection: Connection;
}

function playsBy(model: TableViewModel, seat: Seat): number {
  const v = model.view;
  let n = 0;
  for (const trick of v.tricks) {
    for (const [i] of trick.plays.entries()) {
      const player =
        (["N", "E", "S", "W"].indexOf(trick.leader) + i) % 4;
      if (["N", "E", "S", "W"][player] === seat) {
        n += 1;
      }
    }
  }
  const open = v.current_trick;
  if (open) {
    for (const [i] of open.plays.entries()) {
      const player = (["N", "E", "S", "W"].indexOf(open.leader) + i) % 4;
      if (["N", "E", "S", "W"][player] === seat) {
        n += 1;
      }
    }
  }
  return n;
}

function seatPanel(
  model: TableViewModel,
  seat: Seat,
  role: SeatPanel["role"],
): SeatPanel {
  const v = model.view;
  return {
    seat,
    role,
    bid: v.bids[seat],
    blind: v.blind[seat],
    tricks: v.trick_counts[seat],
    cardsLeft:
      seat === v.seat ? v.hand.length : Math.max(0, 13 - playsBy(model, seat)),
    acting: v.phase !== "done" && v.pending_seat === seat,
  };
}

function trickCards(model: TableViewModel): TrickCard[] {
  const open = model.view.current_trick;
  if (!open) {
    return [];
  }
  const seats: Seat[] = ["N", "E", "S", "W"];
  return open.plays.map((card, i) => ({
    seat: seats[(seats.indexOf(open.leader) + i) % 4],
    card,
  }));
}

export function render(model: TableViewModel): Screen {
  const v = model.view;
  const mine = isMyTurn(model);
  const legal = legalActions(model);

  let bidPicker: BidOption[] | null = null;
  if (mine && v.phase === "bid") {
    bidPicker = [];
    for (let value = 0; value <= 13; value += 1) {
      bidPicker.push({
        value,
        label: value === 0 ? "nil" : String(value),
        highlight: value === 0,
        enabled: legal.includes(value),
      });
    }
  }

  const blindPrompt =
    mine && v.phase === "blind_choice"
      ? { options: ["peek", "blind"] as Array<"peek" | "blind"> }
      : null;

  const hand: HandCard[] = v.hand.map((card) => ({
    card,
    enabled: mine && v.phase === "play" && legal.includes(card),
    selected: model.selectedCard === card,
  }));

  const sweepEvent = model.animationQueue[0] ?? null;
  const sweep =
    sweepEvent && sweepEvent.type === "trick"
      ? {
          winner: sweepEvent.winner as Seat,
          plays: sweepEvent.plays as string[],
        }
      : null;

  const own = v.seat;
  const right = nextSeat(own);
  const top = partnerOf(own);
  const left = nextSeat(top);

  let message = model.error;
  if (message === null && model.connection === "reconnecting") {
    message = "connection lost — reconnecting…";
  }

  return {
    round: v.round,
    dealer: v.dealer,
    seats: {
      bottom: seatPanel(model, own, "you"),
      left: seatPanel(model, left, "left"),
      top: seatPanel(model, top, "partner"),
      right: seatPanel(model, right, "right"),
    },
    trick: trickCards(model),
    sweep,
    hand,
    bidPicker,
    blindPrompt,
    scores: {
      NS: { points: v.scores.NS, bags: v.bags.NS },
      EW: { points: v.scores.EW, bags: v.bags.EW },
    },
    goals: { ...v.goals },
    roundSummary: model.lastRound,
    message,
    banner: v.phase === "done" && v.winner ? `${v.winner} wins` : null,
    connection: model.connection,
  };
}

/** Compact text rendering of a screen, for terminals and tests. */
export function screenText(screen: Screen): string[] {
  const lines: string[] = [];
  lines.push(
    `round ${screen.round}  dealer ${screen.dealer}  ` +
      `NS ${screen.scores.NS.points} (${screen.scores.NS.bags} bags)  ` +
      `EW ${screen.scores.EW.points} (${screen.scores.EW.bags} bags)`,
  );
  for (const place of ["top", "left", "right", "bottom"] as const) {
    const p = screen.seats[place];
    const bid = p.bid === null ? "-" : `${p.bid}${p.blind ? "*" : ""}`;
    lines.push(
      `${place.padEnd(6)} ${p.seat} (${p.role}) bid ${bid} ` +
        `tricks ${p.tricks} cards ${p.cardsLeft}${p.acting ? "  ← to act" : ""}`,
    );
  }
  if (screen.trick.length > 0) {
    lines.push(
      "trick  " + screen.trick.map((t) => `${t.seat}:${t.card}`).join(" "),
    );
  }
  if (screen.sweep) {
    lines.push(`sweep  ${screen.sweep.plays.join(" ")} → ${screen.sweep.winner}`);
  }
  if (screen.hand.length > 0) {
    lines.push(
      "hand   " +
        screen.hand
          .map((h) =>
            h.selected ? `[${h.card}]` : h.enabled ? h.card : `(${h.card})`,
          )
          .join(" "),
    );
  }
  if (screen.bidPicker) {
    lines.push(
      "bid?   " +
        screen.bidPicker
          .map((o) => (o.highlight ? `«${o.label}»` : o.label))
          .join(" "),
    );
  }
  if (screen.blindPrompt) {
    lines.push("blind nil offer: " + screen.blindPrompt.options.join(" / "));
  }
  if (screen.roundSummary) {
    const s = screen.roundSummary;
    lines.push(
      `round ${s.round} result: NS ${s.points.NS >= 0 ? "+" : ""}${s.points.NS}, ` +
        `EW ${s.points.EW >= 0 ? "+" : ""}${s.points.EW}`,
    );
  }
  if (screen.message) {
    lines.push(`! ${screen.message}`);
  }
  if (screen.banner) {
    lines.push(`=== ${screen.banner} ===`);
  }
  return lines;
}
