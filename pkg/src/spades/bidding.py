"""Bid selection from probability tables and nil success curves.

The regular bid counts expected takes from side-suit high cards, spade honors
and length, and trump cuts of short side suits, then shifts for the bids
already on the table. The nil decision compares the expected nil score,
derived from a success curve over the hand's nil value, against a threshold.
End-of-game overrides and partnership signaling conventions sit on top.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .cards import CLUBS, DIAMONDS, HEARTS, SPADES
from .engine import BidContext
from .probability import SIDE, TRUMP, CutTable, NilSafety, build_cut_table

RANK_T, RANK_J, RANK_Q, RANK_K, RANK_A = 8, 9, 10, 11, 12

# spade honors with the number of accompanying spades each needs to count
HONOR_PROTECTORS = ((RANK_A, 0), (RANK_K, 1), (RANK_Q, 2), (RANK_J, 3))

NIL_THRESHOLD = 25.0
SIGNAL_THRESHOLD_CUT = 25.0
RISKY_NIL_FLOOR = 0.35
PRO_RATA_BID = 2.6


@dataclass
class BidderConfig:
    nil_threshold: float = NIL_THRESHOLD
    conventions: bool = True
    endgame: bool = True


@dataclass
class Tables:
    """Everything decide_bid consults: cut tables, nil safety, success curves."""

    cut: dict[int, CutTable]
    nil_safety: NilSafety
    sc_lookup: object | None = None  # callable (prev_bids, nil_value) -> prob

    @classmethod
    def build(cls, sc_lookup=None) -> "Tables":
        return cls(
            cut={n: build_cut_table(n) for n in (1, 2, 3)},
            nil_safety=NilSafety(),
            sc_lookup=sc_lookup,
        )


def split_suits(hand) -> list[list[int]]:
    """Hand as four ascending rank lists, clubs..spades."""
    suits: list[list[int]] = [[], [], [], []]
    for card in sorted(hand):
        suits[card // 13].append(card % 13)
    return suits


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def prev_bids_factor(prev_bids) -> float:
    """Correction for tricks already claimed by earlier bidders.

    Zero while the table is at or below a pro-rata pace; above it, half a
    trick per projected trick past 11, at most one full trick off.
    """
    n = len(prev_bids)
    if n == 0:
        return 0.0
    s = sum(prev_bids)
    if s <= PRO_RATA_BID * n:
        return 0.0
    projected = s + PRO_RATA_BID * (4 - n)
    overshoot = projected - 11.0
    if overshoot <= 0:
        return 0.0
    return -min(1.0, 0.5 * overshoot)


@dataclass
class RegularEval:
    side_value: float
    spade_high_long: float  # best split's high/long component
    spade_cut_value: float  # best split's cut component
    spades_as_cutters: int
    raw: float  # side_value + best spade split, before the table factor
    factor: float
    bid: int  # rounded, clamped to 1..13
    suit_high_values: list[float] = field(default_factory=list)


def _spade_high_long(group: list[int]) -> float:
    """Takes from honors and length for one candidate set of kept spades."""
    value = 0.0
    others = len(group) - 1
    for rank, need in HONOR_PROTECTORS:
        if rank in group and others >= need:
            value += 1.0
    value += max(0, len(group) - 4)
    return value


def regular_takes(hand, prev_bids, tables: Tables, cutting_opponents: int = 2) -> RegularEval:
    cut = tables.cut[cutting_opponents]
    suits = split_suits(hand)
    side_value = 0.0
    suit_values = []
    for suit in (CLUBS, DIAMONDS, HEARTS):
        ranks = suits[suit]
        m = len(ranks)
        v = 0.0
        for rank, k in ((RANK_A, 0), (RANK_K, 1), (RANK_Q, 2)):
            if rank in ranks and m > k:
                v += cut.high_card_value(m, k)
        side_value += v
        suit_values.append(v)

    # Trump-cut chances: a side suit of length m leaves tricks m+1..3 cuttable,
    # each worth the chance no opponent can overcut that trick.
    opportunities: list[float] = []
    for suit in (CLUBS, DIAMONDS, HEARTS):
        m = len(suits[suit])
        for trick in range(m + 1, 4):
            opportunities.append(cut.prob(m, trick - 1))
    opportunities.sort(reverse=True)

    spade_ranks = suits[SPADES]
    best = (-1.0, 0.0, 0.0, 0)
    for cutters in range(len(spade_ranks) + 1):
        kept = spade_ranks[cutters:]  # cutting uses the lowest spades
        high_long = _spade_high_long(kept)
        cut_value = sum(opportunities[:cutters])
        total = high_long + cut_value
        if total > best[0]:
            best = (total, high_long, cut_value, cutters)

    raw = side_value + best[0]
    factor = prev_bids_factor(prev_bids)
    bid = max(1, min(13, round_half_up(raw + factor)))
    return RegularEval(
        side_value=side_value,
        spade_high_long=best[1],
        spade_cut_value=best[2],
        spades_as_cutters=best[3],
        raw=raw,
        factor=factor,
        bid=bid,
        suit_high_values=suit_values,
    )


@dataclass
class NilEval:
    suit_safety: list[float]  # clubs, diamonds, hearts, spades
    has_void: bool
    value: float


def nil_value(hand, tables: Tables) -> NilEval:
    """Chance the hand can duck every trick, one independent factor per suit."""
    suits = split_suits(hand)
    safety = []
    product = 1.0
    has_void = False
    for suit in range(4):
        ranks = suits[suit]
        if not ranks:
            has_void = True
            safety.append(1.0)
            continue
        kind = TRUMP if suit == SPADES else SIDE
        p = tables.nil_safety.suit_safe_prob(kind, ranks)
        safety.append(p)
        product *= p
    if has_void:
        product = min(1.0, product * 1.15)
    return NilEval(suit_safety=safety, has_void=has_void, value=product)


@dataclass
class BidDecision:
    bid: int
    nil: bool
    regular: RegularEval
    nil_eval: NilEval
    nil_prob: float
    exp_nil_score: float
    endgame_rule: str | None = None
    convention: str | None = None


def _reserved_bid(ctx: BidContext) -> int:
    """5 normally; 6 when trailing big and blind nil is on the table."""
    if ctx.blind_allowed and ctx.our_score - ctx.opp_score < -100:
        return 6
    return 5


def _side_suits_ok_for_signal(hand, min_rank: int) -> bool:
    suits = split_suits(hand)
    for suit in (CLUBS, DIAMONDS, HEARTS):
        ranks = suits[suit]
        if ranks and max(ranks) < min_rank:
            return False
    return True


def _signal_criteria(hand, reg_bid: int, reserved: int) -> bool:
    spade_ranks = split_suits(hand)[SPADES]
    if reserved == 6:
        return (
            RANK_A in spade_ranks
            and reg_bid >= 4
            and _side_suits_ok_for_signal(hand, RANK_T)
        )
    return (
        (RANK_A in spade_ranks or RANK_K in spade_ranks)
        and 4 <= reg_bid <= 6
        and _side_suits_ok_for_signal(hand, RANK_J)
    )


def _partner_signaled(ctx: BidContext, config: BidderConfig) -> bool:
    if not (config.conventions and ctx.partner_same_bidder):
        return False
    if ctx.position < 3 or ctx.partner_bid is None:
        return False
    # A visible partner always bid first for the partnership.
    return ctx.partner_bid == _reserved_bid(ctx)


def _visible_bids(ctx: BidContext) -> list[int]:
    return list(ctx.prev_bids)


def _opp_projection(ctx: BidContext) -> int:
    pts = ctx.opp_score
    for b in ctx.opponent_bids():
        pts += 100 if b == 0 else 10 * b
    return pts


def _our_projection(ctx: BidContext, own_bid: int, own_nil: bool) -> int:
    pts = ctx.our_score
    if ctx.partner_bid is not None:
        pts += 100 if ctx.partner_bid == 0 else 10 * ctx.partner_bid
    pts += 100 if own_nil else 10 * own_bid
    return pts


def endgame_adjust(
    ctx: BidContext,
    config: BidderConfig,
    reg: RegularEval,
    nil_chosen: bool,
    nil_prob: float,
) -> tuple[int, bool, str | None]:
    """End-of-game bid overrides. Returns (bid, nil, rule tag)."""
    bid, nil = reg.bid, nil_chosen
    opp_proj = _opp_projection(ctx)
    opp_can_win = opp_proj >= ctx.win_goal and len(ctx.opponent_bids()) > 0

    if ctx.position == 4:
        # Risk-averse overrides when our side can close the game out.
        if nil:
            proj = _our_projection(ctx, reg.bid, False)
            if proj >= ctx.win_goal and proj > opp_proj:
                return reg.bid, False, "skip-nil-when-regular-wins"
        else:
            proj_less = _our_projection(ctx, bid - 1, False)
            if (
                bid >= 2
                and proj_less >= ctx.win_goal
                and proj_less > opp_proj
                and ctx.our_bags <= 8
            ):
                return bid - 1, False, "shave-one-when-still-winning"

    if not opp_can_win:
        return bid, nil, None

    our_proj = _our_projection(ctx, bid, nil)
    margin = opp_proj - our_proj
    if ctx.opponent_nil_visible() and not nil:
        raw_bid = max(1, min(13, round_half_up(reg.raw + reg.factor - 0.5)))
        return raw_bid, False, "shade-for-nil-set"
    no_nils = all(b != 0 for b in _visible_bids(ctx)) and not nil
    if no_nils and ctx.position == 4 and sum(ctx.prev_bids) >= 11:
        # bid the complement of 14: making it then guarantees the others
        # fall short of their combined contracts
        forced = max(1, min(13, 14 - sum(ctx.prev_bids)))
        return forced, False, "complete-to-fourteen"
    if not nil and 0 < margin < 20:
        raised = min(13, bid + min(2, margin // 10 + 1))
        return raised, False, "raise-to-cover-margin"
    if (
        not nil
        and margin >= 20
        and ctx.partner_bid != 0
        and RISKY_NIL_FLOOR <= nil_prob < (config.nil_threshold + 100.0) / 200.0
    ):
        return 0, True, "desperate-nil"
    return bid, nil, None


def decide_bid(ctx: BidContext, tables: Tables, config: BidderConfig = BidderConfig()) -> BidDecision:
    cutting = 1 if ctx.opponent_nil_visible() else 2
    reg = regular_takes(ctx.hand, ctx.prev_bids, tables, cutting_opponents=cutting)
    nil_ev = nil_value(ctx.hand, tables)
    if tables.sc_lookup is not None:
        nil_prob = tables.sc_lookup(ctx.prev_bids, nil_ev.value)
    else:
        nil_prob = nil_ev.value
    exp_nil = nil_prob * 100.0 - (1.0 - nil_prob) * 100.0

    threshold = config.nil_threshold
    convention = None
    if _partner_signaled(ctx, config):
        threshold -= SIGNAL_THRESHOLD_CUT
        convention = "signal-received"

    nil_allowed = ctx.partner_bid != 0  # None (unseen partner) allows nil
    nil = nil_allowed and exp_nil > threshold
    bid = 0 if nil else reg.bid

    if config.conventions and ctx.partner_same_bidder and ctx.position <= 2 and not nil:
        reserved = _reserved_bid(ctx)
        if _signal_criteria(ctx.hand, reg.bid, reserved):
            bid = reserved
            convention = "signal-sent"
        elif reg.bid == reserved:
            bid = reserved - 1
            convention = "reserved-avoided"

    rule = None
    if config.endgame:
        new_bid, new_nil, rule = endgame_adjust(ctx, config, reg, nil, nil_prob)
        if rule is not None:
            bid, nil = new_bid, new_nil
            if convention == "signal-sent" and bid != _reserved_bid(ctx):
                convention = None

    return BidDecision(
        bid=0 if nil else bid,
        nil=nil,
        regular=reg,
        nil_eval=nil_ev,
        nil_prob=nil_prob,
        exp_nil_score=exp_nil,
        endgame_rule=rule,
        convention=convention,
    )


def wants_blind_nil(ctx: BidContext, config: BidderConfig = BidderConfig()) -> bool:
    """Blind-nil decision, taken before looking at the dealt hand."""
    if not ctx.blind_allowed:
        return False
    if ctx.partner_bid == 0:
        return False
    if (
        config.conventions
        and ctx.partner_same_bidder
        and ctx.partner_bid is not None
        and _reserved_bid(ctx) == 6
        and ctx.partner_bid == 6
    ):
        return True
    visible = list(ctx.prev_bids)
    if not visible:
        return False
    opp_proj = _opp_projection(ctx)
    desperate = (
        opp_proj >= ctx.win_goal
        and all(b != 0 for b in visible)
        and sum(visible) < 11
    )
    return desperate


class BisBidder:
    """Table-driven bidder with success-curve nil decisions."""

    name = "bis"

    def __init__(self, tables: Tables, config: BidderConfig | None = None):
        self.tables = tables
        self.config = config or BidderConfig()

    def choose_bid(self, ctx: BidContext) -> int:
        return decide_bid(ctx, self.tables, self.config).bid

    def wants_blind(self, ctx: BidContext) -> bool:
        return wants_blind_nil(ctx, self.config)
