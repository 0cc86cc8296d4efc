import { describe, expect, it } from "vitest";

import type { View } from "../src/api.js";
import { mount, type DocumentLike, type ElementLike } from "../src/dom.js";
import { freshModel, withError, type UIAction } from "../src/model.js";
import { render, screenText } from "../src/render.js";

function view(overrides: Partial<View> = {}): View {
  return {
    session: "s1",
    seat: "S",
    seq: 4,
    phase: "bid",
    pending_seat: "S",
    round: 1,
    dealer: "E",
    blind_offer: false,
    hand: ["2C", "7D", "QH", "AS"],
    bids: { N: 4, E: 3, S: null, W: null },
    blind: { N: false, E: false, S: false, W: false },
    current_trick: null,
    tricks: [],
    trick_counts: { N: 0, E: 0, S: 0, W: 0 },
    scores: { NS: 120, EW: -30 },
    bags: { NS: 2, EW: 0 },
    goals: { win: 200, lose: -100 },
    legal: Array.from({ length: 14 }, (_, i) => i),
    winner: null,
    ...overrides,
  };
}

describe("render", () => {
  it("is a pure function of the model", () => {
    const model = freshModel(view());
    expect(render(model)).toEqual(render(model));
  });

  it("seats the human at the bottom and the partner across the top", () => {
    const screen = render(freshModel(view()));
    expect(screen.seats.bottom.seat).toBe("S");
    expect(screen.seats.bottom.role).toBe("you");
    expect(screen.seats.top.seat).toBe("N");
    expect(screen.seats.top.role).toBe("partner");
    expect([screen.seats.left.seat, screen.seats.right.seat].sort()).toEqual([
      "E",
      "W",
    ]);
    // seen from the east seat instead
    const east = render(freshModel(view({ seat: "E", pending_seat: "E" })));
    expect(east.seats.bottom.seat).toBe("E");
    expect(east.seats.top.seat).toBe("W");
  });

  it("offers the bid picker 0-13 with nil called out, only on our turn", () => {
    const mine = render(freshModel(view()));
    expect(mine.bidPicker).toHaveLength(14);
    expect(mine.bidPicker![0]).toMatchObject({
      value: 0,
      label: "nil",
      highlight: true,
    });
    expect(mine.bidPicker!.slice(1).every((o) => !o.highlight)).toBe(true);

    const theirs = render(freshModel(view({ pending_seat: "W", legal: [] })));
    expect(theirs.bidPicker).toBeNull();
  });

  it("disables every hand card when it is not the human's turn", () => {
    const waiting = render(
      freshModel(
        view({ phase: "play", pending_seat: "N", legal: [] }),
      ),
    );
    expect(waiting.hand.length).toBeGreaterThan(0);
    expect(waiting.hand.every((card) => !card.enabled)).toBe(true);

    const acting = render(
      freshModel(view({ phase: "play", legal: ["2C", "7D"] })),
    );
    expect(acting.hand.filter((card) => card.enabled).map((c) => c.card)).toEqual(
      ["2C", "7D"],
    );
  });

  it("shows the inline rejection message from the service", () => {
    const model = withError(
      freshModel(view({ phase: "play", legal: ["2C"] })),
      "card QH is not legal here",
    );
    const screen = render(model);
    expect(screen.message).toBe("card QH is not legal here");
    expect(screenText(screen).join("\n")).toContain("card QH is not legal here");
  });

  it("derives face-down counts from public plays only", () => {
    const screen = render(
      freshModel(
        view({
          phase: "play",
          pending_seat: "N",
          legal: [],
          tricks: [
            { leader: "W", plays: ["5H", "9H", "KH", "QH"], winner: "E" },
          ],
          current_trick: { leader: "E", plays: ["2D"] },
          trick_counts: { N: 0, E: 1, S: 0, W: 0 },
          hand: ["2C", "7D", "QS"],
        }),
      ),
    );
    expect(screen.seats.bottom.cardsLeft).toBe(3); // own hand length
    // east played in the first trick and led the open one
    expect(screen.seats.left.seat).toBe("E");
    expect(screen.seats.left.cardsLeft).toBe(11);
    expect(screen.seats.top.cardsLeft).toBe(12);
    expect(screen.trick).toEqual([{ seat: "E", card: "2D" }]);
  });

  it("never shows a card that is not ours or on the table", () => {
    const screen = render(
      freshModel(
        view({
          phase: "play",
          pending_seat: "W",
          legal: [],
          hand: ["2C", "7D"],
          tricks: [{ leader: "N", plays: ["3C", "4C", "5C", "6C"], winner: "E" }],
          current_trick: { leader: "E", plays: ["TD"] },
        }),
      ),
    );
    const text = screenText(screen).join(" ");
    const shown = text.match(/\b[2-9TJQKA][CDHS]\b/g) ?? [];
    const allowed = new Set(["2C", "7D", "3C", "4C", "5C", "6C", "TD"]);
    expect(shown.every((code) => allowed.has(code))).toBe(true);
  });

  it("reports the winner banner with the final scores", () => {
    const screen = render(
      freshModel(
        view({
          phase: "done",
          pending_seat: null,
          legal: [],
          hand: [],
          winner: "NS",
          scores: { NS: 208, EW: 113 },
        }),
      ),
    );
    expect(screen.banner).toBe("NS wins");
    expect(screen.scores.NS.points).toBe(208);
  });
});

class StubElement implements ElementLike {
  className = "";
  textContent = "";
  attrs: Record<string, string> = {};
  children: StubElement[] = [];
  clicks: Array<() => void> = [];

  constructor(readonly tag: string) {}

  appendChild(child: ElementLike): unknown {
    this.children.push(child as StubElement);
    return child;
  }

  setAttribute(name: string, value: string): void {
    this.attrs[name] = value;
  }

  addEventListener(_type: "click", handler: () => void): void {
    this.clicks.push(handler);
  }

  *walk(): Generator<StubElement> {
    yield this;
    for (const child of this.children) {
      yield* child.walk();
    }
  }
}

const stubDocument: DocumentLike = {
  createElement: (tag: string) => new StubElement(tag),
};

describe("dom mount", () => {
  it("wires clicks only for legal actions and dispatches them", () => {
    const actions: UIAction[] = [];
    const root = new StubElement("div");
    const model = freshModel(view({ phase: "play", legal: ["2C"] }));
    mount(stubDocument, root, render(model), (a) => actions.push(a));

    const buttons = [...root.walk()].filter((el) => el.tag === "button");
    const enabled = buttons.filter((el) => el.attrs["data-legal"] === "true");
    const disabled = buttons.filter((el) => el.attrs["disabled"] === "true");
    expect(enabled.map((el) => el.textContent)).toEqual(["2C"]);
    expect(disabled.length).toBe(3); // the rest of the hand
    expect(disabled.every((el) => el.clicks.length === 0)).toBe(true);

    enabled[0].clicks[0]();
    expect(actions).toEqual([{ kind: "card", card: "2C" }]);
  });

  it("renders the bid picker with a clickable nil", () => {
    const actions: UIAction[] = [];
    const root = new StubElement("div");
    mount(stubDocument, root, render(freshModel(view())), (a) =>
      actions.push(a),
    );
    const nil = [...root.walk()].find((el) => el.className === "bid bid-nil");
    expect(nil).toBeDefined();
    nil!.clicks[0]();
    expect(actions).toEqual([{ kind: "bid", bid: 0 }]);
  });

  it("builds the same tree for the same screen", () => {
    const shape = (el: StubElement): unknown => ({
      tag: el.tag,
      className: el.className,
      text: el.textContent,
      attrs: el.attrs,
      children: el.children.map(shape),
    });
    const model = freshModel(view({ phase: "play", legal: ["2C"] }));
    const a = new StubElement("div");
    const b = new StubElement("div");
    mount(stubDocument, a, render(model), () => undefined);
    mount(stubDocument, b, render(model), () => undefined);
    expect(shape(a)).toEqual(shape(b));
  });
});
