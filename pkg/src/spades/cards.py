"""Card and seat primitives.

Cards are ints 0..51: suit * 13 + rank, suit 0..3 = clubs/diamonds/hearts/spades,
rank 0..12 = deuce..ace. Keeping them flat ints keeps the simulation loops cheap.
"""

from __future__ import annotations

CLUBS, DIAMONDS, HEARTS, SPADES = 0, 1, 2, 3

RANK_CHARS = "23456789TJQKA"
SUIT_CHARS = "CDHS"

NORTH, EAST, SOUTH, WEST = 0, 1, 2, 3
SEAT_CHARS = "NESW"
SIDE_NAMES = ("NS", "EW")


def make_card(suit: int, rank: int) -> int:
    return suit * 13 + rank


def suit_of(card: int) -> int:
    return card // 13


def rank_of(card: int) -> int:
    return card % 13


def card_code(card: int) -> str:
    return RANK_CHARS[card % 13] + SUIT_CHARS[card // 13]


def parse_card(code: str) -> int:
    try:
        if len(code) != 2:
            raise ValueError
        rank = RANK_CHARS.index(code[0].upper())
        suit = SUIT_CHARS.index(code[1].upper())
    except (ValueError, IndexError):
        raise ValueError(f"bad card code {code!r}") from None
    return suit * 13 + rank


def hand_codes(cards) -> list[str]:
    return [card_code(c) for c in sorted(cards)]


def parse_hand(codes) -> list[int]:
    if isinstance(codes, str):
        codes = codes.split()
    return sorted(parse_card(c) for c in codes)


def partner_of(seat: int) -> int:
    return seat ^ 2


def next_seat(seat: int) -> int:
    return (seat + 1) & 3


def side_of(seat: int) -> int:
    """Partnership index: 0 for N/S, 1 for E/W."""
    return seat & 1
