"""Spades rules engine: dealing, bidding order, trick play, scoring, round logs.

Partnerships are North/South vs East/West. Play and bidding run clockwise
N -> E -> S -> W. The player left of the dealer bids first and leads trick 1.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .cards import (
    SPADES,
    SEAT_CHARS,
    SIDE_NAMES,
    card_code,
    hand_codes,
    next_seat,
    parse_card,
    side_of,
    suit_of,
)


class GameError(Exception):
    pass


class IllegalBidError(GameError):
    pass


class IllegalPlayError(GameError):
    pass


class OutOfTurnError(GameError):
    pass


@dataclass(frozen=True)
class Rules:
    """Table rules for a game."""

    win_goal: int = 200
    lose_goal: int = -100
    blind_allowed: bool = False
    nil_allowed: bool = True
    max_rounds: int = 500


def deal(seed: int) -> list[list[int]]:
    """Deal 4 sorted 13-card hands. Same seed, same deal."""
    rng = random.Random(seed)
    deck = list(range(52))
    rng.shuffle(deck)
    return [sorted(deck[13 * s : 13 * s + 13]) for s in range(4)]


def trick_winner(leader: int, cards: list[int]) -> int:
    """Seat that wins a completed trick. Highest spade, else highest lead-suit card."""
    lead_suit = cards[0] // 13
    best, best_i = cards[0], 0
    best_is_spade = lead_suit == SPADES
    for i in (1, 2, 3):
        c = cards[i]
        s = c // 13
        if s == SPADES:
            if not best_is_spade or c > best:
                best, best_i, best_is_spade = c, i, True
        elif s == lead_suit and not best_is_spade and c > best:
            best, best_i = c, i
    return (leader + best_i) & 3


@dataclass
class BidContext:
    """Everything a bidder may see when it is its turn to bid."""

    seat: int
    position: int  # 1..4 in bidding order
    prev_bids: tuple[int, ...]  # chronological
    prev_blind: tuple[bool, ...]
    hand: list[int] | None  # None during a blind-nil decision
    our_score: int = 0
    opp_score: int = 0
    our_bags: int = 0
    opp_bags: int = 0
    win_goal: int = 200
    lose_goal: int = -100
    blind_allowed: bool = False
    partner_same_bidder: bool = True

    @property
    def partner_bid(self) -> int | None:
        return self.prev_bids[self.position - 3] if self.position >= 3 else None

    @property
    def partner_blind(self) -> bool:
        return self.position >= 3 and self.prev_blind[self.position - 3]

    def opponent_bids(self) -> list[int]:
        if self.position >= 3:
            skip = self.position - 3
            return [b for i, b in enumerate(self.prev_bids) if i != skip]
        return list(self.prev_bids)

    def opponent_nil_visible(self) -> bool:
        return any(b == 0 for b in self.opponent_bids())


class RoundState:
    """Mutable state of one round during trick play."""

    __slots__ = (
        "hands",
        "bids",
        "blind",
        "first_bidder",
        "leader",
        "trick_plays",
        "trick_no",
        "tricks_won",
        "spades_broken",
        "history",
        "voids",
        "to_act",
    )

    def __init__(self, hands: list[list[int]], bids: list[int], blind: list[bool], first_bidder: int):
        self.hands = hands
        self.bids = bids
        self.blind = blind
        self.first_bidder = first_bidder
        self.leader = first_bidder
        self.trick_plays: list[int] = []
        self.trick_no = 0
        self.tricks_won = [0, 0, 0, 0]
        self.spades_broken = False
        self.history: list[tuple[int, list[int], int]] = []  # (leader, plays, winner)
        # voids[seat][suit]: seat shown out of suit during play
        self.voids = [[False] * 4 for _ in range(4)]
        self.to_act = first_bidder

    def current_suit(self) -> int | None:
        return self.trick_plays[0] // 13 if self.trick_plays else None

    def legal_plays(self, seat: int) -> list[int]:
        if seat != self.to_act:
            raise OutOfTurnError(f"seat {SEAT_CHARS[seat]} played out of turn")
        hand = self.hands[seat]
        if not self.trick_plays:
            if self.spades_broken:
                return list(hand)
            non_spades = [c for c in hand if c < 39]
            # Spades may not be led until broken, unless the hand is all spades.
            return non_spades if non_spades else list(hand)
        lead = self.trick_plays[0] // 13
        follow = [c for c in hand if c // 13 == lead]
        return follow if follow else list(hand)

    def play(self, seat: int, card: int) -> int | None:
        """Apply one card. Returns the trick winner when the trick completes, else None."""
        legal = self.legal_plays(seat)
        if card not in legal:
            raise IllegalPlayError(
                f"{card_code(card)} is not a legal play for {SEAT_CHARS[seat]}"
            )
        self.hands[seat].remove(card)
        if self.trick_plays and card // 13 != self.trick_plays[0] // 13:
            self.voids[seat][self.trick_plays[0] // 13] = True
        self.trick_plays.append(card)
        if card >= 39:
            self.spades_broken = True
        if len(self.trick_plays) == 4:
            winner = trick_winner(self.leader, self.trick_plays)
            self.history.append((self.leader, self.trick_plays, winner))
            self.tricks_won[winner] += 1
            self.trick_plays = []
            self.leader = winner
            self.trick_no += 1
            self.to_act = winner
            return winner
        self.to_act = next_seat(seat)
        return None

    @property
    def done(self) -> bool:
        return self.trick_no == 13

    def clone(self) -> "RoundState":
        """Independent copy; mutating the copy never touches the original."""
        new = RoundState.__new__(RoundState)
        new.hands = [list(h) for h in self.hands]
        new.bids = list(self.bids)
        new.blind = list(self.blind)
        new.first_bidder = self.first_bidder
        new.leader = self.leader
        new.trick_plays = list(self.trick_plays)
        new.trick_no = self.trick_no
        new.tricks_won = list(self.tricks_won)
        new.spades_broken = self.spades_broken
        new.history = list(self.history)
        new.voids = [list(row) for row in self.voids]
        new.to_act = self.to_act
        return new

    def seen_cards(self) -> list[int]:
        """All cards revealed so far (completed tricks plus the current one)."""
        out = []
        for _, plays, _ in self.history:
            out.extend(plays)
        out.extend(self.trick_plays)
        return out


NIL_STAKE = 100
BLIND_STAKE = 200
BAG_LIMIT = 10
BAG_PENALTY = 100


def score_round(
    bids: list[int],
    takes: list[int],
    blind: list[bool],
    bags_before: tuple[int, int] = (0, 0),
) -> tuple[list[int], list[int]]:
    """Score a finished round.

    Returns (points, bags_after) per partnership. Non-nil partners are pooled:
    combined takes >= combined bid earns 10 per bid trick plus 1 per bag,
    otherwise minus 10 per bid trick. Nil bids are judged on the bidder's own
    tricks (+/-100, +/-200 blind); a failed nil's tricks count as bags, and a
    nil bidder's partner defends the remaining bid alone. Reaching 10
    accumulated bags loses the 10 bags and 100 points; the revoked bags take
    their 10 banked points with them; the remainder carries over.
    """
    points = [0, 0]
    bags_after = [0, 0]
    for side in (0, 1):
        pts = 0
        new_bags = 0
        team_bid = 0
        team_takes = 0
        for seat in (side, side + 2):
            bid = bids[seat]
            got = takes[seat]
            if bid == 0:
                stake = BLIND_STAKE if blind[seat] else NIL_STAKE
                if got == 0:
                    pts += stake
                else:
                    pts -= stake
                    pts += got
                    new_bags += got
            else:
                team_bid += bid
                team_takes += got
        if team_bid > 0:
            if team_takes >= team_bid:
                over = team_takes - team_bid
                pts += 10 * team_bid + over
                new_bags += over
            else:
                pts -= 10 * team_bid
        total_bags = bags_before[side] + new_bags
        while total_bags >= BAG_LIMIT:
            pts -= BAG_PENALTY + BAG_LIMIT
            total_bags -= BAG_LIMIT
        points[side] = pts
        bags_after[side] = total_bags
    return points, bags_after


@dataclass
class RoundLog:
    """Replayable record of one round."""

    seed: int
    dealer: int
    hands: list[list[str]]
    bids: list[int]
    blind: list[bool]
    tricks: list[dict]
    scores: dict[str, int]
    bags: dict[str, int]

    def to_json(self) -> str:
        return json.dumps(
            {
                "seed": self.seed,
                "dealer": SEAT_CHARS[self.dealer],
                "hands": {SEAT_CHARS[s]: self.hands[s] for s in range(4)},
                "bids": {SEAT_CHARS[s]: self.bids[s] for s in range(4)},
                "blind": {SEAT_CHARS[s]: self.blind[s] for s in range(4)},
                "tricks": self.tricks,
                "scores": self.scores,
                "bags": self.bags,
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, line: str) -> "RoundLog":
        obj = json.loads(line)
        return cls(
            seed=obj["seed"],
            dealer=SEAT_CHARS.index(obj["dealer"]),
            hands=[obj["hands"][ch] for ch in SEAT_CHARS],
            bids=[obj["bids"][ch] for ch in SEAT_CHARS],
            blind=[obj["blind"][ch] for ch in SEAT_CHARS],
            tricks=obj["tricks"],
            scores=obj["scores"],
            bags=obj["bags"],
        )


def play_round(
    agents,
    seed: int,
    dealer: int = 0,
    rules: Rules = Rules(),
    scores: tuple[int, int] = (0, 0),
    bags: tuple[int, int] = (0, 0),
) -> tuple[RoundLog, list[int], list[int]]:
    """Deal, bid, and play one full round.

    agents: 4 objects with choose_bid(BidContext) -> int and
    choose_card(RoundState, seat, legal) -> card; optionally
    wants_blind(BidContext) -> bool. Returns (log, points, takes).
    """
    hands = deal(seed)
    dealt = [list(h) for h in hands]
    first = next_seat(dealer)
    bids: list[int] = []
    blind: list[bool] = []
    order = [(first + i) & 3 for i in range(4)]
    for pos, seat in enumerate(order, start=1):
        side = side_of(seat)
        ctx = BidContext(
            seat=seat,
            position=pos,
            prev_bids=tuple(bids),
            prev_blind=tuple(blind),
            hand=None,
            our_score=scores[side],
            opp_score=scores[1 - side],
            our_bags=bags[side],
            opp_bags=bags[1 - side],
            win_goal=rules.win_goal,
            lose_goal=rules.lose_goal,
            blind_allowed=rules.blind_allowed,
        )
        agent = agents[seat]
        is_blind = False
        if rules.blind_allowed and hasattr(agent, "wants_blind") and agent.wants_blind(ctx):
            bid = 0
            is_blind = True
        else:
            ctx.hand = hands[seat]
            bid = agent.choose_bid(ctx)
        if not isinstance(bid, int) or not 0 <= bid <= 13:
            raise IllegalBidError(f"bid {bid!r} from seat {SEAT_CHARS[seat]}")
        if bid == 0 and not rules.nil_allowed:
            raise IllegalBidError("nil is disabled at this table")
        bids.append(bid)
        blind.append(is_blind)
    seat_bids = [0, 0, 0, 0]
    seat_blind = [False, False, False, False]
    for pos, seat in enumerate(order):
        seat_bids[seat] = bids[pos]
        seat_blind[seat] = blind[pos]

    state = RoundState([list(h) for h in hands], seat_bids, seat_blind, first)
    tricks: list[dict] = []
    while not state.done:
        leader = state.leader
        plays: list[str] = []
        for _ in range(4):
            seat = state.to_act
            card = agents[seat].choose_card(state, seat, state.legal_plays(seat))
            plays.append(card_code(card))
            winner = state.play(seat, card)
        tricks.append({"leader": SEAT_CHARS[leader], "plays": plays, "winner": SEAT_CHARS[winner]})

    takes = state.tricks_won
    points, bags_after = score_round(seat_bids, takes, seat_blind, bags)
    log = RoundLog(
        seed=seed,
        dealer=dealer,
        hands=[hand_codes(h) for h in dealt],
        bids=seat_bids,
        blind=seat_blind,
        tricks=tricks,
        scores={SIDE_NAMES[0]: points[0], SIDE_NAMES[1]: points[1]},
        bags={SIDE_NAMES[0]: bags_after[0], SIDE_NAMES[1]: bags_after[1]},
    )
    return log, points, takes


def replay_round(log: RoundLog, bags_before: tuple[int, int] = (0, 0)) -> bool:
    """Re-run a logged round through the rules and verify every recorded fact.

    Raises GameError on any mismatch; returns True when the log is consistent.
    """
    hands = [[parse_card(c) for c in log.hands[s]] for s in range(4)]
    dealt = deal(log.seed)
    if [sorted(h) for h in hands] != dealt:
        raise GameError("logged hands do not match the seeded deal")
    state = RoundState([sorted(h) for h in hands], log.bids, log.blind, next_seat(log.dealer))
    for t in log.tricks:
        leader = SEAT_CHARS.index(t["leader"])
        if leader != state.leader:
            raise GameError(f"trick {state.trick_no}: leader mismatch")
        for code in t["plays"]:
            seat = state.to_act
            winner = state.play(seat, parse_card(code))
        if winner is None or SEAT_CHARS[winner] != t["winner"]:
            raise GameError(f"trick {state.trick_no - 1}: winner mismatch")
    if not state.done:
        raise GameError("log ended before 13 tricks")
    points, bags_after = score_round(log.bids, state.tricks_won, log.blind, bags_before)
    if {SIDE_NAMES[i]: points[i] for i in (0, 1)} != log.scores:
        raise GameError("scores mismatch on replay")
    if {SIDE_NAMES[i]: bags_after[i] for i in (0, 1)} != log.bags:
        raise GameError("bags mismatch on replay")
    return True


def write_round_logs(path: str, logs: list[RoundLog]) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        for log in logs:
            fh.write(log.to_json() + "\n")


def read_round_logs(path: str) -> list[RoundLog]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(RoundLog.from_json(line))
    return out


@dataclass
class GameResult:
    winner: int  # partnership index
    scores: tuple[int, int]
    rounds: int
    logs: list[RoundLog] = field(default_factory=list)


def play_game(
    agents,
    seed: int,
    rules: Rules = Rules(),
    collect_logs: bool = False,
) -> GameResult:
    """Play rounds until one partnership wins per the table rules."""
    rng = random.Random(seed)
    scores = [0, 0]
    bags = [0, 0]
    dealer = rng.randrange(4)
    logs: list[RoundLog] = []
    for round_no in range(rules.max_rounds):
        round_seed = rng.getrandbits(60)
        log, points, _ = play_round(
            agents,
            round_seed,
            dealer=dealer,
            rules=rules,
            scores=(scores[0], scores[1]),
            bags=(bags[0], bags[1]),
        )
        scores[0] += points[0]
        scores[1] += points[1]
        bags[0] = log.bags[SIDE_NAMES[0]]
        bags[1] = log.bags[SIDE_NAMES[1]]
        if collect_logs:
            logs.append(log)
        dealer = next_seat(dealer)
        over = (
            max(scores) >= rules.win_goal or min(scores) <= rules.lose_goal
        ) and scores[0] != scores[1]
        if over:
            winner = 0 if scores[0] > scores[1] else 1
            return GameResult(winner, (scores[0], scores[1]), round_no + 1, logs)
    # Pathological non-terminating table; call it for the current leader.
    winner = 0 if scores[0] >= scores[1] else 1
    return GameResult(winner, (scores[0], scores[1]), rules.max_rounds, logs)
