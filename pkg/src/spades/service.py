"""Turn-based play sessions: one human seat against three bot seats.

The session advances bots synchronously until the human must act, so the
only resting states are "waiting for the human" and "game over".  Every
state transition goes through the engine's legality checks, and no view
or event ever carries another seat's unplayed cards.

Idempotency: each pending human turn is tagged with a token (the event
sequence number at the moment the turn started, which is exactly the
``seq`` in the view the client saw).  A submission must quote that token;
re-submitting the same action with the same token returns the current
state without applying anything twice.
"""

from __future__ import annotations

import random
import threading
import uuid
from dataclasses import dataclass

from .cards import (
    SEAT_CHARS,
    SIDE_NAMES,
    card_code,
    hand_codes,
    next_seat,
    parse_card,
    side_of,
)
from .engine import (
    BidContext,
    GameError,
    RoundLog,
    RoundState,
    Rules,
    deal,
    score_round,
)
from .harness import AgentResources, SeatAgent, make_bidder
from .players import player_from_name


class ServiceError(Exception):
    """Base class for request failures the API maps to status codes."""


class UnknownSession(ServiceError):
    pass


class TurnError(ServiceError):
    """Out of turn, stale token, or game already over."""


class ActionError(ServiceError):
    """The action itself is illegal; state is unchanged."""


PHASE_BLIND = "blind_choice"
PHASE_BID = "bid"
PHASE_PLAY = "play"
PHASE_DONE = "done"

BLIND_ACTIONS = ("peek", "blind")


@dataclass(frozen=True)
class SessionConfig:
    human_seat: int = 2  # South
    bot_bidder: str = "bis"
    bot_player: str = "srp"
    win_goal: int = 200
    lose_goal: int = -100
    seed: int | None = None
    blind_nil: bool = False
    bot_delay: float = 0.0  # event-stream pacing only; state never waits
    uct_iters: int = 200

    def rules(self) -> Rules:
        return Rules(
            win_goal=self.win_goal,
            lose_goal=self.lose_goal,
            blind_allowed=self.blind_nil,
        )


class Session:
    """One table; all mutation happens under ``lock``."""

    def __init__(
        self,
        session_id: str,
        config: SessionConfig,
        resources: AgentResources,
        round_log_path: str | None = None,
    ):
        if config.human_seat not in range(4):
            raise ValueError("human_seat must be 0..3")
        self.id = session_id
        self.config = config
        self.rules = config.rules()
        self.round_log_path = round_log_path
        self.lock = threading.Lock()
        seed = config.seed
        if seed is None:
            seed = random.SystemRandom().getrandbits(60)
        self.seed = seed
        self.rng = random.Random(seed)
        self.human = config.human_seat
        bidder = make_bidder(config.bot_bidder, resources)
        self.agents: dict[int, SeatAgent] = {}
        for seat in range(4):
            if seat == self.human:
                continue
            player = player_from_name(
                config.bot_player,
                seed=self.rng.getrandbits(60),
                iters=config.uct_iters,
            )
            self.agents[seat] = SeatAgent(bidder, player)

        self.events: list[dict] = []
        self.scores = [0, 0]
        self.bags = [0, 0]
        self.dealer = self.rng.randrange(4)
        self.round_no = 0
        self.winner: int | None = None
        # per-round state
        self.stage: str | None = None  # None | "bidding" | "playing"
        self.round_seed = 0
        self.dealt: list[list[int]] = []
        self.order: list[int] = []
        self.bid_list: list[int] = []
        self.blind_list: list[bool] = []
        self.peeked = True
        self.state: RoundState | None = None
        # pending human turn + idempotency bookkeeping
        self.pending: dict | None = None
        self.accepted: dict[int, tuple] = {}
        self._advance()

    # -- event plumbing -------------------------------------------------

    @property
    def seq(self) -> int:
        return len(self.events)

    def _emit(self, type_: str, **data) -> None:
        event = {"seq": self.seq + 1, "type": type_}
        event.update(data)
        self.events.append(event)

    def events_after(self, after: int) -> list[dict]:
        return [e for e in self.events if e["seq"] > after]

    # -- game driving ---------------------------------------------------

    def _start_round(self) -> None:
        self.round_no += 1
        self.round_seed = self.rng.getrandbits(60)
        self.dealt = deal(self.round_seed)
        self.order = [(self.dealer + 1 + i) & 3 for i in range(4)]
        self.bid_list = []
        self.blind_list = []
        self.peeked = not (self.rules.blind_allowed and self.human is not None)
        self.state = None
        self.stage = "bidding"
        self._emit(
            "round_start",
            round=self.round_no,
            dealer=SEAT_CHARS[self.dealer],
            scores=self._score_dict(self.scores),
            bags=self._score_dict(self.bags),
        )

    def _bid_ctx(self, seat: int, position: int) -> BidContext:
        side = side_of(seat)
        return BidContext(
            seat=seat,
            position=position,
            prev_bids=tuple(self.bid_list),
            prev_blind=tuple(self.blind_list),
            hand=None,
            our_score=self.scores[side],
            opp_score=self.scores[1 - side],
            our_bags=self.bags[side],
            opp_bags=self.bags[1 - side],
            win_goal=self.rules.win_goal,
            lose_goal=self.rules.lose_goal,
            blind_allowed=self.rules.blind_allowed,
        )

    def _record_bid(self, seat: int, bid: int, blind: bool) -> None:
        if not isinstance(bid, int) or not 0 <= bid <= 13:
            raise ActionError(f"bid must be an integer 0..13, got {bid!r}")
        if bid == 0 and not self.rules.nil_allowed:
            raise ActionError("nil is disabled at this table")
        self.bid_list.append(bid)
        self.blind_list.append(blind)
        self._emit("bid", seat=SEAT_CHARS[seat], bid=bid, blind=blind)

    def _begin_play(self) -> None:
        seat_bids = [0, 0, 0, 0]
        seat_blind = [False, False, False, False]
        for pos, seat in enumerate(self.order):
            seat_bids[seat] = self.bid_list[pos]
            seat_blind[seat] = self.blind_list[pos]
        self.state = RoundState(
            [list(h) for h in self.dealt], seat_bids, seat_blind, self.order[0]
        )
        self.stage = "playing"

    def _play_card(self, seat: int, card: int) -> None:
        winner = self.state.play(seat, card)  # raises if illegal
        self._emit("play", seat=SEAT_CHARS[seat], card=card_code(card))
        if winner is not None:
            leader, plays, _ = self.state.history[-1]
            self._emit(
                "trick",
                leader=SEAT_CHARS[leader],
                plays=[card_code(c) for c in plays],
                winner=SEAT_CHARS[winner],
            )

    def _finish_round(self) -> None:
        state = self.state
        takes = list(state.tricks_won)
        points, bags_after = score_round(
            state.bids, takes, state.blind, (self.bags[0], self.bags[1])
        )
        self.scores[0] += points[0]
        self.scores[1] += points[1]
        self.bags = list(bags_after)
        log = RoundLog(
            seed=self.round_seed,
            dealer=self.dealer,
            hands=[hand_codes(h) for h in self.dealt],
            bids=list(state.bids),
            blind=list(state.blind),
            tricks=[
                {
                    "leader": SEAT_CHARS[leader],
                    "plays": [card_code(c) for c in plays],
                    "winner": SEAT_CHARS[winner],
                }
                for leader, plays, winner in state.history
            ],
            scores={SIDE_NAMES[0]: points[0], SIDE_NAMES[1]: points[1]},
            bags={SIDE_NAMES[0]: bags_after[0], SIDE_NAMES[1]: bags_after[1]},
        )
        if self.round_log_path:
            with open(self.round_log_path, "a", encoding="utf-8") as fh:
                fh.write(log.to_json() + "\n")
        self._emit(
            "round",
            round=self.round_no,
            bids={SEAT_CHARS[s]: state.bids[s] for s in range(4)},
            blind={SEAT_CHARS[s]: state.blind[s] for s in range(4)},
            takes={SEAT_CHARS[s]: takes[s] for s in range(4)},
            points=self._score_dict(points),
            scores=self._score_dict(self.scores),
            bags=self._score_dict(self.bags),
        )
        self.stage = None
        self.state = None  # views describe the current round only
        over = (
            max(self.scores) >= self.rules.win_goal
            or min(self.scores) <= self.rules.lose_goal
        ) and self.scores[0] != self.scores[1]
        if over:
            self.winner = 0 if self.scores[0] > self.scores[1] else 1
            self._emit(
                "game",
                winner=SIDE_NAMES[self.winner],
                scores=self._score_dict(self.scores),
                rounds=self.round_no,
            )
        else:
            self.dealer = next_seat(self.dealer)

    def _set_pending(self, seat: int, kind: str) -> None:
        self.pending = {"seat": seat, "kind": kind, "token": self.seq}

    def _advance(self) -> None:
        """Run bots (and round/game bookkeeping) until human input is needed."""
        self.pending = None
        while True:
            if self.winner is not None:
                return
            if self.stage is None:
                self._start_round()
            if self.stage == "bidding":
                if len(self.bid_list) == 4:
                    self._begin_play()
                    continue
                position = len(self.bid_list) + 1
                seat = self.order[position - 1]
                if seat == self.human:
                    if not self.peeked:
                        self._set_pending(seat, PHASE_BLIND)
                    else:
                        self._set_pending(seat, PHASE_BID)
                    return
                ctx = self._bid_ctx(seat, position)
                agent = self.agents[seat]
                if self.rules.blind_allowed and agent.wants_blind(ctx):
                    self._record_bid(seat, 0, blind=True)
                else:
                    ctx.hand = self.dealt[seat]
                    self._record_bid(seat, agent.choose_bid(ctx), blind=False)
                continue
            # playing
            if self.state.done:
                self._finish_round()
                continue
            seat = self.state.to_act
            if seat == self.human:
                self._set_pending(seat, PHASE_PLAY)
                return
            card = self.agents[seat].choose_card(
                self.state, seat, self.state.legal_plays(seat)
            )
            self._play_card(seat, card)

    # -- human actions ---------------------------------------------------

    def _check_turn(self, seat: int, token: int, kinds: tuple, payload: tuple) -> bool:
        """Validate a submission; True means idempotent replay (no-op)."""
        if token in self.accepted:
            if self.accepted[token] == (seat, payload):
                return True
            raise TurnError("stale turn token with a different action")
        if self.winner is not None:
            raise TurnError("the game is over")
        if self.pending is None or self.pending["seat"] != seat:
            raise TurnError(f"it is not {SEAT_CHARS[seat]}'s turn")
        if self.pending["kind"] not in kinds:
            raise TurnError(f"expected a {self.pending['kind']} action")
        if token != self.pending["token"]:
            raise TurnError(
                f"turn token {token} does not match the pending turn "
                f"{self.pending['token']}"
            )
        return False

    def submit_bid(
        self,
        seat: int,
        token: int,
        bid: int | None = None,
        action: str | None = None,
    ) -> None:
        with self.lock:
            payload = ("bid", bid, action)
            if self._check_turn(seat, token, (PHASE_BID, PHASE_BLIND), payload):
                return
            kind = self.pending["kind"]
            if kind == PHASE_BLIND:
                if action not in BLIND_ACTIONS:
                    raise ActionError(
                        "choose 'peek' to see your cards or 'blind' to bid blind nil"
                    )
                self.accepted[token] = (seat, payload)
                if action == "peek":
                    self.peeked = True
                    self._emit("peek", seat=SEAT_CHARS[seat])
                    self._set_pending(seat, PHASE_BID)
                    return
                self._record_bid(seat, 0, blind=True)
            else:
                if action is not None:
                    raise ActionError("a bid is expected here, not a blind-nil choice")
                if not isinstance(bid, int) or isinstance(bid, bool):
                    raise ActionError(f"bid must be an integer 0..13, got {bid!r}")
                if not 0 <= bid <= 13:
                    raise ActionError(f"bid must be within 0..13, got {bid}")
                if bid == 0 and not self.rules.nil_allowed:
                    raise ActionError("nil is disabled at this table")
                self.accepted[token] = (seat, payload)
                self._record_bid(seat, bid, blind=False)
            self._advance()

    def submit_card(self, seat: int, token: int, card_str: str) -> None:
        with self.lock:
            try:
                card = parse_card(card_str)
            except ValueError as exc:
                raise ActionError(str(exc)) from exc
            payload = ("play", card_code(card))
            if self._check_turn(seat, token, (PHASE_PLAY,), payload):
                return
            legal = self.state.legal_plays(seat)
            if card not in legal:
                raise ActionError(
                    f"{card_code(card)} is not a legal play; legal: "
                    + " ".join(card_code(c) for c in legal)
                )
            self.accepted[token] = (seat, payload)
            self._play_card(seat, card)
            self._advance()

    # -- views ------------------------------------------------------------

    @staticmethod
    def _score_dict(pair) -> dict:
        return {SIDE_NAMES[0]: pair[0], SIDE_NAMES[1]: pair[1]}

    def _phase(self) -> str:
        if self.winner is not None:
            return PHASE_DONE
        return self.pending["kind"] if self.pending else "running"

    def _legal_actions(self) -> list:
        if self.pending is None or self.pending["seat"] != self.human:
            return []
        kind = self.pending["kind"]
        if kind == PHASE_BLIND:
            return list(BLIND_ACTIONS)
        if kind == PHASE_BID:
            bids = list(range(14))
            if not self.rules.nil_allowed:
                bids.remove(0)
            return bids
        return [card_code(c) for c in self.state.legal_plays(self.human)]

    def view(self) -> dict:
        with self.lock:
            return self._view_locked()

    def _view_locked(self) -> dict:
        human = self.human
        phase = self._phase()
        if self.stage == "playing":
            hand = self.state.hands[human]
        elif self.stage == "bidding":
            hand = self.dealt[human] if self.peeked else []
        else:
            hand = []
        bids = {SEAT_CHARS[s]: None for s in range(4)}
        blind = {SEAT_CHARS[s]: False for s in range(4)}
        for pos, b in enumerate(self.bid_list):
            bids[SEAT_CHARS[self.order[pos]]] = b
            blind[SEAT_CHARS[self.order[pos]]] = self.blind_list[pos]
        current_trick = None
        tricks = []
        trick_counts = {SEAT_CHARS[s]: 0 for s in range(4)}
        if self.state is not None:
            current_trick = {
                "leader": SEAT_CHARS[self.state.leader],
                "plays": [card_code(c) for c in self.state.trick_plays],
            }
            tricks = [
                {
                    "leader": SEAT_CHARS[leader],
                    "plays": [card_code(c) for c in plays],
                    "winner": SEAT_CHARS[winner],
                }
                for leader, plays, winner in self.state.history
            ]
            trick_counts = {
                SEAT_CHARS[s]: self.state.tricks_won[s] for s in range(4)
            }
        return {
            "session": self.id,
            "seat": SEAT_CHARS[human],
            "seq": self.seq,
            "phase": phase,
            "pending_seat": SEAT_CHARS[self.pending["seat"]] if self.pending else None,
            "round": self.round_no,
            "dealer": SEAT_CHARS[self.dealer],
            "blind_offer": phase == PHASE_BLIND,
            "hand": hand_codes(hand),
            "bids": bids,
            "blind": blind,
            "current_trick": current_trick,
            "tricks": tricks,
            "trick_counts": trick_counts,
            "scores": self._score_dict(self.scores),
            "bags": self._score_dict(self.bags),
            "goals": {"win": self.rules.win_goal, "lose": self.rules.lose_goal},
            "legal": self._legal_actions(),
            "winner": SIDE_NAMES[self.winner] if self.winner is not None else None,
        }


class PlayService:
    """Registry of independent sessions."""

    def __init__(
        self,
        resources: AgentResources | None = None,
        round_log_path: str | None = None,
    ):
        self.resources = resources or AgentResources()
        self.round_log_path = round_log_path
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, config: SessionConfig) -> Session:
        make_bidder(config.bot_bidder, self.resources)  # validate names early
        player_from_name(config.bot_player, iters=config.uct_iters)
        session = Session(
            uuid.uuid4().hex[:12], config, self.resources, self.round_log_path
        )
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise UnknownSession(f"no session {session_id!r}") from None

    def drop(self, session_id: str) -> None:
        with self._lock:
            self._sessions.pop(session_id, None)
