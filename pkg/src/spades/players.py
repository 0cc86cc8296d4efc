"""Playing modules: rule-based trick players and a determinized UCT search.

All players expose ``choose_card(state, seat, legal) -> card`` and only read
public information plus their own hand. Three styles are provided:

* ``SRPPlayer`` -- a strong rule-based player driven by round-type goals:
  secure the partnership contract, cover a partner's nil, attack an opposing
  nil, avoid bags once contracts are settled (backed by guaranteed-trick
  counting), and emit the high-low doubleton signal.
* ``WRPPlayer`` -- the same cascade with signalling, bag avoidance, and
  sure-take planning switched off.
* ``UCTPlayer`` -- Monte-Carlo tree search over uniformly determinized deals
  with rule-based rollouts; ``switch_tricks`` turns it into a hybrid that
  plays the rule cascade until the last K tricks of a round.
"""

from __future__ import annotations

import math
import random
import time
from bisect import bisect_left
from dataclasses import dataclass
from enum import Enum

from .cards import SPADES, partner_of
from .engine import RoundState, score_round

UCT_EXPLORATION = 100.0  # reward is measured in points, so C matches that scale
UCT_DEFAULT_SECONDS = 3.0
# Widest credible one-round swing: 13 tricks at 10 points plus a 200 nil stake.
UCT_REWARD_BOUND = 330.0


class RoundType(Enum):
    """What the four bids say about how the round should be played."""

    STRONG_UNDER = "strong-under"
    UNDER = "under"
    OVER = "over"
    FOURTEEN = "fourteen"
    STRONG_OVER = "strong-over"
    WE_NIL = "we-nil"
    PARTNER_NIL = "partner-nil"
    OPPONENTS_NIL = "opponents-nil"
    NIL_VS_NIL = "nil-vs-nil"
    DOUBLE_NIL = "double-nil"


def round_type(bids, seat: int) -> RoundType:
    """Classify a round from one seat's perspective; a total function of the bids."""
    me = bids[seat] == 0
    partner = bids[partner_of(seat)] == 0
    left = bids[(seat + 1) & 3] == 0
    right = bids[(seat + 3) & 3] == 0
    if (me or partner) and (left or right):
        return RoundType.NIL_VS_NIL
    if left and right:
        return RoundType.DOUBLE_NIL
    if left or right:
        return RoundType.OPPONENTS_NIL
    if me:
        return RoundType.WE_NIL
    if partner:
        return RoundType.PARTNER_NIL
    total = sum(bids)
    if total <= 8:
        return RoundType.STRONG_UNDER
    if total <= 10:
        return RoundType.UNDER
    if total <= 13:
        return RoundType.OVER
    if total == 14:
        return RoundType.FOURTEEN
    return RoundType.STRONG_OVER


def sure_future_takes(hand, seen_cards) -> int:
    """Worst-case number of tricks this hand can still guarantee.

    Only spades can be counted: a side suit might never be led again. The
    worst case puts every unseen spade in a single opposing hand and has the
    agent lead spades until one side runs out; the defender then covers as
    many of the agent's spades as possible, cheapest cover first.
    """
    mine = sorted(c for c in hand if c >= 39)
    if not mine:
        return 0
    known = set(seen_cards)
    known.update(hand)
    beaten = 0
    for c in range(39, 52):
        if c in known:
            continue
        if beaten < len(mine) and c > mine[beaten]:
            beaten += 1
    return len(mine) - beaten


@dataclass(frozen=True)
class PlayStyle:
    """Feature switches shared by the rule-based players."""

    signals: bool = True
    bag_avoidance: bool = True
    sure_takes: bool = True


STRONG_STYLE = PlayStyle()
WEAK_STYLE = PlayStyle(signals=False, bag_avoidance=False, sure_takes=False)

_OVER_TYPES = (RoundType.OVER, RoundType.FOURTEEN, RoundType.STRONG_OVER)


def _rank(card: int) -> int:
    return card % 13


def _beats(card: int, best: int, lead_suit: int) -> bool:
    """Would `card` head the trick over the current best card?"""
    cs = card // 13
    bs = best // 13
    if cs == bs:
        return card > best
    return cs == SPADES


def _winning_index(plays) -> int:
    """Index within the partial trick of the card currently winning it."""
    best = plays[0]
    best_i = 0
    lead_suit = best // 13
    best_spade = lead_suit == SPADES
    for i in range(1, len(plays)):
        c = plays[i]
        s = c // 13
        if s == SPADES:
            if not best_spade or c > best:
                best, best_i, best_spade = c, i, True
        elif s == lead_suit and not best_spade and c > best:
            best, best_i = c, i
    return best_i


class _Ctx:
    """Everything the rule cascade needs, computed once per decision."""

    __slots__ = (
        "state",
        "seat",
        "legal",
        "style",
        "partner",
        "bids",
        "hand",
        "plays",
        "leader",
        "lead_suit",
        "players_after",
        "best",
        "best_seat",
        "following",
        "out_by_suit",
        "out_spades",
        "my_nil_live",
        "partner_nil_live",
        "live_opp_nilers",
        "rtype",
        "my_need",
        "opp_need",
        "tricks_left",
        "sure",
        "protected",
    )

    def __init__(self, state: RoundState, seat: int, legal, style: PlayStyle):
        self.state = state
        self.seat = seat
        self.legal = legal
        self.style = style
        self.partner = partner_of(seat)
        self.bids = state.bids
        self.hand = state.hands[seat]
        self.plays = state.trick_plays
        self.leader = state.leader

        seen = state.seen_cards()
        known = set(seen)
        known.update(self.hand)
        self.out_by_suit = [[], [], [], []]
        for c in range(52):
            if c not in known:
                self.out_by_suit[c // 13].append(c)
        self.out_spades = self.out_by_suit[SPADES]

        if self.plays:
            self.lead_suit = self.plays[0] // 13
            wi = _winning_index(self.plays)
            self.best = self.plays[wi]
            self.best_seat = (self.leader + wi) & 3
            self.following = all(c // 13 == self.lead_suit for c in legal)
        else:
            self.lead_suit = None
            self.best = None
            self.best_seat = None
            self.following = False
        self.players_after = 3 - len(self.plays)

        bids = self.bids
        won = state.tricks_won
        self.my_nil_live = bids[seat] == 0 and won[seat] == 0
        self.partner_nil_live = bids[self.partner] == 0 and won[self.partner] == 0
        opps = ((seat + 1) & 3, (seat + 3) & 3)
        self.live_opp_nilers = [o for o in opps if bids[o] == 0 and won[o] == 0]
        self.rtype = round_type(bids, seat)

        self.my_need = self._team_need(seat, self.partner)
        self.opp_need = self._team_need(*opps)
        self.tricks_left = 13 - state.trick_no

        if style.sure_takes:
            self.sure = sure_future_takes(self.hand, seen)
            mine = sorted(c for c in self.hand if c >= 39)
            self.protected = frozenset(mine[len(mine) - self.sure :]) if self.sure else frozenset()
        else:
            self.sure = 0
            self.protected = frozenset()

    def _team_need(self, a: int, b: int) -> int:
        bid = got = 0
        for s in (a, b):
            if self.bids[s] > 0:
                bid += self.bids[s]
                got += self.state.tricks_won[s]
        return max(0, bid - got)

    def boss_in_suit(self, card: int) -> bool:
        """No other hand holds a higher card of this suit."""
        out = self.out_by_suit[card // 13]
        return not out or out[-1] < card

    def below_out(self, card: int) -> int:
        """How many outstanding cards of this suit sit below `card`."""
        return bisect_left(self.out_by_suit[card // 13], card)

    def beaters(self):
        return [c for c in self.legal if _beats(c, self.best, self.lead_suit)]

    def under(self):
        return [c for c in self.legal if not _beats(c, self.best, self.lead_suit)]

    def seat_played(self, seat: int) -> bool:
        return ((seat - self.leader) & 3) < len(self.plays)

    def partner_best_threatened(self) -> bool:
        """Could a later player still beat the card our side is winning with?"""
        best = self.best
        suit = best // 13
        out = self.out_by_suit[suit]
        if out and out[-1] > best:
            return True
        if suit != SPADES and self.out_spades:
            for i in range(len(self.plays) + 1, 4):
                if self.state.voids[(self.leader + i) & 3][suit]:
                    return True
        return False

    def partner_signalled_suits(self) -> list[int]:
        """Side suits where the partner's follows read as a high-low doubleton:
        exactly two follows, the first played high under the trick winner, the
        second lower. The partner should be void there now."""
        follows: dict[int, list[tuple[int, bool]]] = {0: [], 1: [], 2: []}
        for leader, plays, winner in self.state.history:
            lead = plays[0] // 13
            if lead == SPADES:
                continue
            pos = (self.partner - leader) & 3
            if pos == 0 or pos >= len(plays):
                continue
            card = plays[pos]
            if card // 13 == lead:
                follows[lead].append((card, winner == self.partner))
        out = []
        for suit, seen in follows.items():
            if len(seen) == 2 and seen[0][0] > seen[1][0] and not seen[0][1]:
                out.append(suit)
            elif len(seen) == 1 and not seen[0][1] and _rank(seen[0][0]) >= 7:
                # A needlessly high first follow reads as the start of a
                # high-low; treat the suit as shortening.
                out.append(suit)
        return out

    def no_threat_after(self, card: int) -> bool:
        """Conservatively true when no later player could still beat `card`."""
        if self.players_after == 0:
            return True
        suit = card // 13
        out = self.out_by_suit[suit]
        if out and out[-1] > card:
            return False
        if suit != SPADES and self.out_spades:
            return False
        return True


# --- shared low-level plays -------------------------------------------------


def _discard_keep(ctx: _Ctx) -> int:
    """Void in the led suit, not hunting the trick: throw the cheapest card
    that will not take it, preferring to keep spades in hand."""
    safe = ctx.under()
    if safe:
        side = [c for c in safe if c // 13 != SPADES]
        return min(side or safe, key=lambda c: (_rank(c), c))
    return min(ctx.legal)  # every card trumps in: take it as cheaply as possible


def _discard_shed(ctx: _Ctx) -> int:
    """Void in the led suit while dodging bags: throw the biggest liability,
    the high cards (spades first) that would only win future bags."""
    safe = ctx.under()
    if not safe:
        return min(ctx.legal)
    pool = [c for c in safe if c not in ctx.protected] or safe
    return max(pool, key=lambda c: (_rank(c), c // 13 == SPADES))


def _duck(ctx: _Ctx, *, forced_high: bool) -> int:
    """Stay under the current best card; optionally signal a doubleton."""
    if not ctx.following:
        return _discard_keep(ctx)
    under = ctx.under()
    if not under:
        # Forced to head the trick anyway.
        return max(ctx.legal) if forced_high else min(ctx.legal)
    if ctx.style.signals and ctx.lead_suit != SPADES and len(under) == 2 == len(ctx.legal):
        # High-low doubleton: following under a boss with exactly two cards,
        # play the higher first -- unless it would become a winner itself.
        boss = ctx.best // 13 == ctx.lead_suit and ctx.boss_in_suit(ctx.best)
        high = max(under)
        promoted = not any(c > high for c in ctx.out_by_suit[ctx.lead_suit])
        if boss and not promoted:
            return high
    return min(under)


# --- nil roles ---------------------------------------------------------------


def _dodge(ctx: _Ctx) -> int:
    """Play as a live niler: never head a trick if it can be helped."""
    if not ctx.plays:
        # Lead the card with the fewest outstanding cards beneath it.
        return min(ctx.legal, key=lambda c: (ctx.below_out(c), _rank(c), c))
    if not ctx.following:
        safe = ctx.under()
        if not safe:
            return max(ctx.legal)  # forced to trump in; shed the worst card
        # Free discard: shed the card most likely to win a later trick.
        return max(safe, key=lambda c: (ctx.below_out(c), _rank(c), c))
    under = ctx.under()
    if under:
        return max(under)
    # Every legal card heads the trick; dump the highest and hope for cover.
    return max(ctx.legal)


def _cover(ctx: _Ctx) -> int:
    """Protect the partner's live nil; their safety outranks our contract."""
    if not ctx.plays:
        side = [c for c in ctx.legal if c // 13 != SPADES]
        if ctx.style.sure_takes:
            bosses = [c for c in side if ctx.boss_in_suit(c)]
            if bosses:
                return max(bosses, key=_rank)
        for suit in range(4):
            if ctx.state.voids[ctx.partner][suit]:
                safe = [c for c in ctx.legal if c // 13 == suit]
                if safe:
                    return max(safe)
        if side:
            return max(side, key=_rank)
        return max(ctx.legal)
    beaters = ctx.beaters()
    # With sure takes accounted for, high cards are free to burn on cover
    # duty; without that planning, hedge for our own contract and cover low.
    put_up = max if ctx.style.sure_takes else min
    if ctx.best_seat == ctx.partner:
        # Partner is stuck heading the trick: take it off them.
        if beaters:
            return put_up(beaters)
        return min(ctx.legal)
    if not ctx.seat_played(ctx.partner):
        # Partner still has to follow: put up protection.
        if beaters:
            return put_up(beaters)
        return min(ctx.legal)
    # Partner already slipped under; win cheaply to keep the lead, else duck.
    if beaters:
        return min(beaters)
    return _duck(ctx, forced_high=False)


def _attack_nil(ctx: _Ctx, niler: int) -> int:
    """Squeeze a live opposing niler with low cards and gifted tricks."""
    if not ctx.plays:
        side = [c for c in ctx.legal if c // 13 != SPADES]
        pool = side or ctx.legal
        return min(pool, key=lambda c: (_rank(c), c))
    if ctx.best_seat == niler:
        # The niler is heading the trick: stay out of the way.
        under = ctx.under()
        if under:
            return max(under) if ctx.following else _discard_keep(ctx)
        return min(ctx.legal)
    if not ctx.seat_played(niler):
        # Keep the trick low so the niler's forced follow may head it.
        under = ctx.under()
        if under:
            return min(under) if ctx.following else _discard_keep(ctx)
        return min(ctx.legal)
    return _contest_follow(ctx)


# --- regular play ------------------------------------------------------------


def _contest_lead(ctx: _Ctx) -> int:
    """Lead when we still want tricks."""
    side = [c for c in ctx.legal if c // 13 != SPADES]
    planning = ctx.style.sure_takes
    if planning and ctx.out_spades and ctx.my_need > ctx.sure > 0:
        # Draw trumps while we hold certain spade winners, so our side-suit
        # honours stop dying to cheap ruffs.
        top = max(c for c in ctx.legal if c // 13 == SPADES) if len(side) < len(ctx.legal) else -1
        if top >= 0 and ctx.boss_in_suit(top):
            return top
    if planning:
        bosses = [c for c in side if ctx.boss_in_suit(c)]
        if bosses and ctx.out_spades:
            # A boss is no good led straight into an opponent's ruff.
            opps = (ctx.seat + 1) & 3, (ctx.seat + 3) & 3
            safe = [c for c in bosses if not any(ctx.state.voids[o][c // 13] for o in opps)]
            bosses = safe
        if bosses:
            return max(bosses, key=_rank)
    elif side:
        # No certainty tracking: bank on a high honour holding up.
        top = max(side, key=lambda c: (_rank(c), c))
        if _rank(top) >= 10:
            return top
    if ctx.out_spades:
        ruff_suits = [s for s in range(3) if ctx.state.voids[ctx.partner][s]]
        if ctx.style.signals:
            ruff_suits += [s for s in ctx.partner_signalled_suits() if s not in ruff_suits]
        for suit in ruff_suits:
            ruff = [c for c in side if c // 13 == suit]
            if ruff:
                return min(ruff)
    if side:
        lengths = [0, 0, 0, 0]
        for c in side:
            lengths[c // 13] += 1
        if ctx.style.sure_takes:
            # Develop the suit closest to promotion: fewest live cards above
            # our top one, longer suits breaking ties.
            tops = {}
            for c in side:
                tops[c // 13] = max(tops.get(c // 13, -1), c)
            suit = min(
                tops,
                key=lambda s: (len(ctx.out_by_suit[s]) - ctx.below_out(tops[s]), -lengths[s], s),
            )
        else:
            # Develop: lead low from the longest side suit.
            suit = max(sorted({c // 13 for c in side}), key=lambda s: lengths[s])
        return min(c for c in side if c // 13 == suit)
    spades = ctx.legal
    top = max(spades)
    return top if ctx.boss_in_suit(top) else min(spades)


def _contest_follow(ctx: _Ctx) -> int:
    """Follow when we still want tricks: win surely and cheaply, else duck."""
    beaters = ctx.beaters()
    planning = ctx.style.sure_takes
    if ctx.best_seat == ctx.partner:
        if ctx.players_after == 0 or not ctx.partner_best_threatened():
            return _duck(ctx, forced_high=False)
        if planning:
            # Partner's card can still be beaten: take over when certain.
            sure = [c for c in beaters if ctx.no_threat_after(c)]
            if sure:
                return min(sure)
        return _duck(ctx, forced_high=False)
    if beaters:
        urgent = ctx.my_need - ctx.sure >= ctx.tricks_left
        if urgent:
            # Every remaining trick has to land: no cheap gambles.
            if planning:
                sure = [c for c in beaters if ctx.no_threat_after(c)]
                if sure:
                    return min(sure)
            return max(beaters)
        if ctx.players_after == 0 or not ctx.following:
            return min(beaters)  # last hand or a cut: cheapest winner will do
        if planning:
            # Cheapest card that is certain to hold wins the trick for free.
            sure = [c for c in beaters if ctx.no_threat_after(c)]
            if sure:
                return min(sure)
        partner_after = not ctx.seat_played(ctx.partner)
        return min(beaters) if partner_after else max(beaters)
    return _duck(ctx, forced_high=False)


def _avoid_bags(ctx: _Ctx) -> int:
    """Contracts are settled: every extra trick is a bag, so stay low."""
    if not ctx.plays:
        # Lead the card with the fewest live cards beneath it.
        return min(ctx.legal, key=lambda c: (ctx.below_out(c), _rank(c), c))
    if not ctx.following:
        return _discard_shed(ctx)
    return _duck(ctx, forced_high=True)


def _regular(ctx: _Ctx) -> int:
    if ctx.bids[ctx.seat] == 0:
        # Own nil already failed: any further trick is a pure bag.
        return _avoid_bags(ctx)
    need_beyond_sure = ctx.my_need - ctx.sure
    opp_settable = 0 < ctx.opp_need <= ctx.tricks_left
    if need_beyond_sure > 0 or (opp_settable and ctx.rtype in _OVER_TYPES):
        return _contest_lead(ctx) if not ctx.plays else _contest_follow(ctx)
    if ctx.style.bag_avoidance and ctx.my_need <= ctx.sure:
        return _avoid_bags(ctx)
    return _contest_lead(ctx) if not ctx.plays else _contest_follow(ctx)


def srp_choose_card(state: RoundState, seat: int, legal=None, style: PlayStyle = STRONG_STYLE) -> int:
    """Pick a card by the rule cascade; always a member of the legal set."""
    if legal is None:
        legal = state.legal_plays(seat)
    if len(legal) == 1:
        return legal[0]
    ctx = _Ctx(state, seat, legal, style)
    if ctx.my_nil_live:
        return _dodge(ctx)
    if ctx.partner_nil_live:
        return _cover(ctx)
    if ctx.live_opp_nilers:
        if ctx.style.sure_takes and ctx.tricks_left - (ctx.my_need - ctx.sure) < 2:
            return _regular(ctx)  # our own contract is on the line; the set must wait
        return _attack_nil(ctx, ctx.live_opp_nilers[0])
    return _regular(ctx)


# --- UCT ----------------------------------------------------------------------


class UCTNode:
    """One action edge in the search tree: visit count and cumulative reward."""

    __slots__ = ("n", "total", "children")

    def __init__(self):
        self.n = 0
        self.total = 0.0
        self.children: dict[int, UCTNode] = {}

    @property
    def mean(self) -> float:
        return self.total / self.n if self.n else 0.0


def _determinize(state: RoundState, seat: int, rng: random.Random) -> RoundState:
    """Copy the round with the hidden hands redealt uniformly at random.

    Deliberately naive: no inference from voids, discards, or bids is used,
    only the public hand sizes.
    """
    det = state.clone()
    known = set(state.seen_cards())
    known.update(state.hands[seat])
    pool = [c for c in range(52) if c not in known]
    rng.shuffle(pool)
    i = 0
    for s in range(4):
        if s == seat:
            continue
        k = len(state.hands[s])
        det.hands[s] = sorted(pool[i : i + k])
        i += k
    return det


def uct_choose_card(
    state: RoundState,
    seat: int,
    *,
    iters: int | None = None,
    seconds: float | None = None,
    c: float = UCT_EXPLORATION,
    seed: int = 0,
    style: PlayStyle = STRONG_STYLE,
    return_root: bool = False,
):
    """Search for the card with the best average end-of-round point gap.

    Each iteration redeals the unseen cards, walks the tree by the UCB score
    x_bar + c * sqrt(ln n / n_i) (expanding one new node), finishes the round
    with the rule-based player, and backs up the partnership point gap,
    clamped to +/-UCT_REWARD_BOUND. Budget is either a fixed number of
    iterations (deterministic under `seed`) or wall-clock seconds.
    """
    legal = state.legal_plays(seat)
    if len(legal) == 1:
        return (legal[0], UCTNode()) if return_root else legal[0]
    if iters is None and seconds is None:
        seconds = UCT_DEFAULT_SECONDS
    rng = random.Random(seed)
    root = UCTNode()
    my_side = seat & 1
    deadline = time.monotonic() + seconds if iters is None else None
    done_iters = 0
    while (deadline is None and done_iters < iters) or (
        deadline is not None and time.monotonic() < deadline
    ):
        done_iters += 1
        det = _determinize(state, seat, rng)
        node = root
        path = []
        expanded = False
        while not det.done and not expanded:
            actor = det.to_act
            acts = det.legal_plays(actor)
            fresh = [a for a in acts if a not in node.children or node.children[a].n == 0]
            if fresh:
                card = fresh[rng.randrange(len(fresh))]
                child = node.children.setdefault(card, UCTNode())
                expanded = True
            else:
                sign = 1.0 if (actor & 1) == my_side else -1.0
                log_n = math.log(node.n) if node.n > 1 else 0.0
                card = None
                best_f = -math.inf
                for a in acts:
                    ch = node.children[a]
                    f = sign * (ch.total / ch.n) + c * math.sqrt(log_n / ch.n)
                    if f > best_f:
                        best_f, card = f, a
                child = node.children[card]
            det.play(actor, card)
            path.append(child)
            node = child
        while not det.done:
            s = det.to_act
            det.play(s, srp_choose_card(det, s, None, style))
        points, _ = score_round(det.bids, det.tricks_won, det.blind)
        gap = float(points[my_side] - points[1 - my_side])
        reward = max(-UCT_REWARD_BOUND, min(UCT_REWARD_BOUND, gap))
        root.n += 1
        for nd in path:
            nd.n += 1
            nd.total += reward
    visited = [a for a in legal if a in root.children and root.children[a].n > 0]
    best = max(visited, key=lambda a: (root.children[a].mean, -a)) if visited else legal[0]
    return (best, root) if return_root else best


# --- agent wrappers -----------------------------------------------------------


class RandomPlayer:
    """Uniform random legal card; the weakest baseline playing module."""

    name = "random"

    def __init__(self, seed: int = 0):
        self._rng = random.Random(seed)

    def choose_card(self, state, seat, legal=None):
        if legal is None:
            legal = state.legal_plays(seat)
        return self._rng.choice(legal)


class SRPPlayer:
    """Strong rule-based playing module."""

    name = "srp"
    style = STRONG_STYLE

    def choose_card(self, state, seat, legal=None):
        return srp_choose_card(state, seat, legal, self.style)


class WRPPlayer(SRPPlayer):
    """Weak rule-based playing module: no signals, bag planning, or sure takes."""

    name = "wrp"
    style = WEAK_STYLE


class UCTPlayer:
    """UCT playing module, optionally hybrid: rules until the last K tricks."""

    def __init__(
        self,
        switch_tricks: int = 13,
        *,
        iters: int | None = None,
        seconds: float | None = None,
        c: float = UCT_EXPLORATION,
        seed: int = 0,
        style: PlayStyle = STRONG_STYLE,
    ):
        if iters is None and seconds is None:
            seconds = UCT_DEFAULT_SECONDS
        self.switch_tricks = switch_tricks
        self.iters = iters
        self.seconds = seconds
        self.c = c
        self.style = style
        self._seeds = random.Random(seed)

    @property
    def name(self) -> str:
        return "uct" if self.switch_tricks >= 13 else f"uct:{self.switch_tricks}"

    def choose_card(self, state, seat, legal=None):
        if legal is None:
            legal = state.legal_plays(seat)
        if len(legal) == 1:
            return legal[0]
        if 13 - state.trick_no > self.switch_tricks:
            return srp_choose_card(state, seat, legal, self.style)
        return uct_choose_card(
            state,
            seat,
            iters=self.iters,
            seconds=self.seconds,
            c=self.c,
            seed=self._seeds.getrandbits(32),
            style=self.style,
        )


class CompositeAgent:
    """Glue a bidding module and a playing module into one table agent."""

    def __init__(self, bidder, player):
        self.bidder = bidder
        self.player = player

    @property
    def name(self) -> str:
        return f"{getattr(self.bidder, 'name', '?')}+{getattr(self.player, 'name', '?')}"

    def choose_bid(self, ctx):
        return self.bidder.choose_bid(ctx)

    def wants_blind(self, ctx) -> bool:
        inner = getattr(self.bidder, "wants_blind", None)
        return bool(inner(ctx)) if inner is not None else False

    def choose_card(self, state, seat, legal=None):
        return self.player.choose_card(state, seat, legal)


def player_from_name(
    name: str,
    *,
    seed: int = 0,
    iters: int | None = None,
    seconds: float | None = None,
    c: float = UCT_EXPLORATION,
):
    """Build a playing module from its config name: srp, wrp, random, uct, uct:K."""
    if name == "srp":
        return SRPPlayer()
    if name == "wrp":
        return WRPPlayer()
    if name == "random":
        return RandomPlayer(seed)
    if name == "uct" or name.startswith("uct:"):
        k = int(name.split(":", 1)[1]) if ":" in name else 13
        if k < 1:
            raise ValueError(f"uct switch must be >= 1: {name!r}")
        return UCTPlayer(k, iters=iters, seconds=seconds, c=c, seed=seed)
    raise ValueError(f"unknown playing module {name!r}")
