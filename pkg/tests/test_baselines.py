from spades.baselines import io_bid, ms_bid, naive_nil_ok, rb_bid
from spades.cards import parse_hand
from spades.engine import deal


class TestNaiveNilRule:
    def test_high_third_club_rejected(self):
        hand = parse_hand("2C 3C JC 2D 3D 4D 5D 6D 7D 8D 9D TD JD")
        assert not naive_nil_ok(hand, partner_bid=4)

    def test_five_eight_ten_in_every_suit_accepted(self):
        hand = parse_hand("5C 8C TC 5D 8D TD AD 5H 8H TH 5S 8S TS")
        assert naive_nil_ok(hand, partner_bid=4)

    def test_fourth_and_higher_cards_ignored(self):
        with_ace = parse_hand("2C 3C 4C AC 2D 3D 4D 2H 3H 4H 2S 3S 4S")
        assert naive_nil_ok(with_ace, partner_bid=None)

    def test_four_spades_rejected(self):
        hand = parse_hand("2C 3C 4C 2D 3D 4D 2H 3H 4H 2S 3S 4S 5S")
        assert not naive_nil_ok(hand, partner_bid=4)

    def test_partner_nil_blocks_nil(self):
        hand = parse_hand("5C 8C TC 5D 8D TD AD 5H 8H TH 5S 8S TS")
        assert not naive_nil_ok(hand, partner_bid=0)


class TestIO:
    def test_big_spades_and_side_ace(self):
        hand = parse_hand("AS KS AH 2C 3C 4C 5C 2D 3D 4D 5D 2H 3H")
        assert io_bid(hand) == 3

    def test_five_low_spades(self):
        hand = parse_hand("2S 3S 4S 5S 9S 2C 3C 4C 2D 3D 4D 2H 3H")
        assert io_bid(hand) == 2

    def test_side_ace_king_worth_two(self):
        hand = parse_hand("AH KH 2C 3C 4C 5C 6C 2D 3D 4D 5D 2H 3H")
        assert io_bid(hand) == 2

    def test_guarded_side_king_half_point(self):
        # two guarded kings round up to one trick
        hand = parse_hand("KH 2H KD 3D 2C 3C 4C 5C 6C 7C 2S 3S 4S")
        assert io_bid(hand) == round(0.4 * 3 + 0.5 + 0.5)

    def test_weak_hand_with_strong_partner_bids_nil(self):
        hand = parse_hand("2S 3S 2C 3C 4C 5C 2D 3D 4D 5D 2H 3H 4H")
        assert io_bid(hand, partner_bid=4) == 0
        assert io_bid(hand, partner_bid=3) >= 1
        assert io_bid(hand) >= 1

    def test_any_king_blocks_io_nil(self):
        hand = parse_hand("KH 3S 2C 3C 4C 5C 2D 3D 4D 5D 2H 3H 4H")
        assert io_bid(hand, partner_bid=5) >= 1


class TestMS:
    def test_four_aces(self):
        hand = parse_hand("AS 2S 3S AC 2C 3C AD 2D 3D AH 2H 3H 4H")
        assert ms_bid(hand) == 4

    def test_singleton_king_worthless(self):
        hand = parse_hand("KH 2C 3C 4C 5C 6C 2D 3D 4D 5D 2S 3S 4S")
        assert ms_bid(hand) == 1

    def test_guarded_king_counts(self):
        hand = parse_hand("KH 2H 2C 3C 4C 5C 2D 3D 4D 5D 2S 3S 4S")
        assert ms_bid(hand) == 1

    def test_six_spades_with_ace(self):
        hand = parse_hand("AS 2S 3S 4S 5S 6S 2C 3C 4C 2D 3D 4D 2H")
        # ace plus three spades past the third; short heart with four spades
        # earns nothing
        assert ms_bid(hand) == 4

    def test_spade_queen_needs_length_or_the_ace(self):
        short = parse_hand("QS 2S AH 2C 3C 4C 5C 2D 3D 4D 5D 2H 3H")
        long = parse_hand("QS 2S 3S AH 2C 3C 4C 5C 2D 3D 4D 5D 2H")
        with_ace = parse_hand("AS QS AH 2C 3C 4C 5C 2D 3D 4D 5D 2H 3H")
        assert ms_bid(short) == 1  # queen in a short suit without the ace
        assert ms_bid(long) == 2
        assert ms_bid(with_ace) == 3

    def test_short_spade_penalty(self):
        hand = parse_hand("AS AC 2C 3C 4C 2D 3D 4D 5D 2H 3H 4H 5H")
        # two aces minus the short-spades penalty
        assert ms_bid(hand) == 1

    def test_short_side_suit_with_exactly_three_spades(self):
        hand = parse_hand("2S 3S 4S AH 2C 3C 4C 5C 6C 2D 3D 4D 5D")
        # lone ace plus the singleton-heart bonus
        assert ms_bid(hand) == 2


class TestRB:
    def test_floor_bid_for_junk(self):
        hand = parse_hand("2C 3C 4C 2D 3D 4D 2H 3H 4H 2S 3S 4S 5S")
        assert rb_bid(hand) == 1

    def test_weak_hand_bids_nil(self):
        hand = parse_hand("2C 3C 4C 2D 3D 4D 2H 3H 4H 2S 3S 4S TD")
        assert rb_bid(hand) == 0

    def test_side_honor_values(self):
        hand = parse_hand("AH KH QH 2H AC KC 2C 2D 3D 4D 2S 3S 4S")
        # hearts 1+0.7+0.3, clubs 1+0.7 -> 3.7 -> 4
        assert rb_bid(hand) == 4

    def test_singleton_king_and_short_queen_worth_nothing(self):
        hand = parse_hand("KH QD 2D 2C 3C 4C 5C 6C 7C 2S 3S 4S 5S")
        # no side honor value, four spades, no length: floor
        assert rb_bid(hand) == 1

    def test_protected_spade_honors_and_length(self):
        hand = parse_hand("AS KS QS JS TS 9S 2C 3C 4C 2D 3D 4D 2H")
        # four protected honors, two beyond the fourth, singleton-heart bonus,
        # 6.5 rounds half-up
        assert rb_bid(hand) == 7

    def test_short_suit_bonus_requires_spades(self):
        with_spades = parse_hand("2S 3S 4S AH 2H 3H 4H 5H 6H 7H 8H 9H QC")
        without = parse_hand("2S 3S AH 2H 3H 4H 5H 6H 7H 8H 9H TH QC")
        assert rb_bid(with_spades) == round(1 + 0.5 + 0.5)
        assert rb_bid(without) == 1


class TestAcrossRandomDeals:
    def test_all_bidders_stay_in_range(self):
        for seed in range(200):
            for hand in deal(seed):
                for fn in (io_bid, ms_bid, rb_bid):
                    assert 0 <= fn(hand, partner_bid=4) <= 13
                    assert fn(hand, partner_bid=0) >= 1

    def test_mean_table_bids_are_plausible(self):
        totals = {"io": 0, "ms": 0, "rb": 0}
        n = 500
        for seed in range(n):
            hands = deal(seed)
            for fn, name in ((io_bid, "io"), (ms_bid, "ms"), (rb_bid, "rb")):
                totals[name] += sum(fn(h) for h in hands)
        for name, total in totals.items():
            assert 8.0 < total / n < 13.0, (name, total / n)
