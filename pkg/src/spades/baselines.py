"""Rule-based reference bidders: IO, MS, and RB.

Each is a pure function of the hand plus the partner's visible bid. They
share a naive nil classifier driven by per-suit low-card thresholds; the
fourth and higher cards of a suit are ignored by it.
"""

from __future__ import annotations

from .bidding import HONOR_PROTECTORS, round_half_up, split_suits
from .cards import CLUBS, DIAMONDS, HEARTS, SPADES
from .engine import BidContext

RANK_9 = 7
RANK_T = 8
RANK_J = 9
RANK_Q = 10
RANK_K = 11
RANK_A = 12

# i-th lowest card of every suit must sit at or under these face values
NAIVE_NIL_FACES = (5, 8, 10)
NAIVE_NIL_RANKS = tuple(face - 2 for face in NAIVE_NIL_FACES)
NAIVE_NIL_MAX_SPADES = 3


def naive_nil_ok(hand, partner_bid: int | None) -> bool:
    """Shared nil test: three lowest cards per suit under 5/8/T, few spades."""
    if partner_bid == 0:
        return False
    suits = split_suits(hand)
    if len(suits[SPADES]) > NAIVE_NIL_MAX_SPADES:
        return False
    for ranks in suits:
        for i, rank in enumerate(ranks[:3]):
            if rank > NAIVE_NIL_RANKS[i]:
                return False
    return True


def io_bid(hand, partner_bid: int | None = None) -> int:
    """Counts big spades as tricks, small spades as 0.4, and side A/K points."""
    suits = split_suits(hand)
    value = 0.0
    for rank in suits[SPADES]:
        value += 1.0 if rank >= RANK_T else 0.4
    for suit in (CLUBS, DIAMONDS, HEARTS):
        ranks = suits[suit]
        if RANK_A in ranks:
            value += 1.0
            if RANK_K in ranks:
                value += 1.0
        elif RANK_K in ranks and len(ranks) >= 2:
            value += 0.5
    regular = max(1, round_half_up(value))

    big_spade = any(r >= RANK_T for r in suits[SPADES])
    has_ace_or_king = any(
        RANK_A in ranks or RANK_K in ranks for ranks in suits
    )
    if (
        regular <= 3
        and partner_bid is not None
        and partner_bid >= 4
        and not has_ace_or_king
        and not big_spade
        and len(suits[SPADES]) <= NAIVE_NIL_MAX_SPADES
    ):
        return 0
    return regular


def ms_bid(hand, partner_bid: int | None = None) -> int:
    """Aces, guarded kings, a conditional spade queen, and spade length."""
    if naive_nil_ok(hand, partner_bid):
        return 0
    suits = split_suits(hand)
    spades = suits[SPADES]
    value = 0
    for suit in range(4):
        ranks = suits[suit]
        if RANK_A in ranks:
            value += 1
        if RANK_K in ranks and len(ranks) >= 2:
            value += 1
    if RANK_Q in spades and (len(spades) >= 3 or RANK_A in spades):
        value += 1
    value += max(0, len(spades) - 3)
    if len(spades) <= 1:
        value -= 1
    if len(spades) == 3 and any(
        len(suits[s]) <= 1 for s in (CLUBS, DIAMONDS, HEARTS)
    ):
        value += 1
    return max(1, value)


RB_SIDE_ACE = 1.0
RB_SIDE_KING = 0.7
RB_SIDE_QUEEN = 0.3
RB_SHORT_SUIT_BONUS = 0.5


def rb_bid(hand, partner_bid: int | None = None) -> int:
    """Per-card value sum with protected spade honors and short-suit bonuses."""
    if naive_nil_ok(hand, partner_bid):
        return 0
    suits = split_suits(hand)
    value = 0.0
    for suit in (CLUBS, DIAMONDS, HEARTS):
        ranks = suits[suit]
        if RANK_A in ranks:
            value += RB_SIDE_ACE
        if RANK_K in ranks and len(ranks) >= 2:
            value += RB_SIDE_KING
        if RANK_Q in ranks and len(ranks) >= 3:
            value += RB_SIDE_QUEEN
    spades = suits[SPADES]
    others = len(spades) - 1
    for rank, need in HONOR_PROTECTORS:
        if rank in spades and others >= need:
            value += 1.0
    value += max(0, len(spades) - 4)
    if len(spades) >= 3:
        for suit in (CLUBS, DIAMONDS, HEARTS):
            if len(suits[suit]) <= 1:
                value += RB_SHORT_SUIT_BONUS
    return max(1, round_half_up(value))


class _FunctionBidder:
    def __init__(self, fn, name: str):
        self._fn = fn
        self.name = name

    def choose_bid(self, ctx: BidContext) -> int:
        return self._fn(ctx.hand, ctx.partner_bid)


class IOBidder(_FunctionBidder):
    def __init__(self):
        super().__init__(io_bid, "io")


class MSBidder(_FunctionBidder):
    def __init__(self):
        super().__init__(ms_bid, "ms")


class RBBidder(_FunctionBidder):
    def __init__(self):
        super().__init__(rb_bid, "rb")
