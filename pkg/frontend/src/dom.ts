/**
 * Thin DOM layer: build the element tree for a Screen and wire clicks to a
 * dispatcher. Pure construction — same Screen, same tree — against a minimal
 * structural document interface so it runs in a browser or a test stub.
 */

import type { UIAction } from "./model.js";
import type { BidOption, HandCard, Screen, SeatPanel } from "./render.js";

export interface ElementLike {
  className: string;
  textContent: string;
  appendChild(child: ElementLike): unknown;
  setAttribute(name: string, value: string): void;
  addEventListener(type: "click", handler: () => void): void;
}

export interface DocumentLike {
  createElement(tag: string): ElementLike;
}

export type Dispatch = (action: UIAction) => void;

function el(
  doc: DocumentLike,
  tag: string,
  className: string,
  text = "",
): ElementLike {
  const node = doc.createElement(tag);
  node.className = className;
  if (text) {
    node.textContent = text;
  }
  return node;
}

function seatNode(doc: DocumentLike, panel: SeatPanel): ElementLike {
  const node = el(doc, "div", `seat seat-${panel.role}`);
  node.setAttribute("data-seat", panel.seat);
  if (panel.acting) {
    node.setAttribute("data-acting", "true");
  }
  const bid =
    panel.bid === null ? "—" : `${panel.bid}${panel.blind ? " blind" : ""}`;
  node.appendChild(el(doc, "div", "seat-name", `${panel.seat} (${panel.role})`));
  node.appendChild(el(doc, "div", "seat-bid", `bid ${bid}`));
  node.appendChild(el(doc, "div", "seat-tricks", `tricks ${panel.tricks}`));
  if (panel.role !== "you") {
    node.appendChild(el(doc, "div", "seat-back", `${panel.cardsLeft} cards`));
  }
  return node;
}

function handNode(
  doc: DocumentLike,
  hand: HandCard[],
  dispatch: Dispatch,
): ElementLike {
  const node = el(doc, "div", "hand");
  for (const entry of hand) {
    const card = el(doc, "button", "card", entry.card);
    card.setAttribute("data-card", entry.card);
    if (entry.selected) {
      card.setAttribute("data-selected", "true");
    }
    if (entry.enabled) {
      card.setAttribute("data-legal", "true");
      card.addEventListener("click", () =>
        dispatch({ kind: "card", card: entry.card }),
      );
    } else {
      card.setAttribute("disabled", "true");
    }
    node.appendChild(card);
  }
  return node;
}

function bidNode(
  doc: DocumentLike,
  options: BidOption[],
  dispatch: Dispatch,
): ElementLike {
  const node = el(doc, "div", "bid-picker");
  for (const option of options) {
    const btn = el(
      doc,
      "button",
      option.highlight ? "bid bid-nil" : "bid",
      option.label,
    );
    btn.setAttribute("data-bid", String(option.value));
    if (option.enabled) {
      btn.addEventListener("click", () =>
        dispatch({ kind: "bid", bid: option.value }),
      );
    } else {
      btn.setAttribute("disabled", "true");
    }
    node.appendChild(btn);
  }
  return node;
}

export function mount(
  doc: DocumentLike,
  root: ElementLike,
  screen: Screen,
  dispatch: Dispatch,
): void {
  const table = el(doc, "div", "table");
  table.setAttribute("data-connection", screen.connection);

  const header = el(
    doc,
    "div",
    "header",
    `round ${screen.round} · dealer ${screen.dealer} · ` +
      `NS ${screen.scores.NS.points} (${screen.scores.NS.bags} bags) · ` +
      `EW ${screen.scores.EW.points} (${screen.scores.EW.bags} bags) · ` +
      `to ${screen.goals.win}`,
  );
  table.appendChild(header);

  for (const place of ["top", "left", "right"] as const) {
    table.appendChild(seatNode(doc, screen.seats[place]));
  }

  const center = el(doc, "div", "trick");
  for (const play of screen.trick) {
    const card = el(doc, "span", "trick-card", play.card);
    card.setAttribute("data-seat", play.seat);
    center.appendChild(card);
  }
  if (screen.sweep) {
    const sweep = el(doc, "div", "sweep", `→ ${screen.sweep.winner}`);
    center.appendChild(sweep);
  }
  table.appendChild(center);

  table.appendChild(seatNode(doc, screen.seats.bottom));
  table.appendChild(handNode(doc, screen.hand, dispatch));

  if (screen.bidPicker) {
    table.appendChild(bidNode(doc, screen.bidPicker, dispatch));
  }
  if (screen.blindPrompt) {
    const prompt = el(doc, "div", "blind-prompt", "blind nil?");
    for (const choice of screen.blindPrompt.options) {
      const btn = el(doc, "button", "blind-choice", choice);
      btn.setAttribute("data-blind", choice);
      btn.addEventListener("click", () => dispatch({ kind: "blind", choice }));
      prompt.appendChild(btn);
    }
    table.appendChild(prompt);
  }
  if (screen.roundSummary) {
    const s = screen.roundSummary;
    table.appendChild(
      el(
        doc,
        "div",
        "round-summary",
        `round ${s.round}: NS ${s.points.NS >= 0 ? "+" : ""}${s.points.NS} ` +
          `(${s.scores.NS}), EW ${s.points.EW >= 0 ? "+" : ""}${s.points.EW} ` +
          `(${s.scores.EW})`,
      ),
    );
  }
  if (screen.message) {
    table.appendChild(el(doc, "div", "message", screen.message));
  }
  if (screen.banner) {
    table.appendChild(el(doc, "div", "banner", screen.banner));
  }

  root.textContent = "";
  root.appendChild(table);
}
