import random
from itertools import product

import pytest

from conftest import ALL_RULES, random_election, random_profile, rule_id
from utils.election import Profile, Rule, TieBreak
from utils.gsr import (
    InconsistentSignatureError, Signature, decide, descriptor, enumerate_signatures, representative,
    score_vector, signature_of, total_score,
)
from utils import rules


@pytest.mark.parametrize('rule,m,k', [
    (Rule.borda(), 4, 4), (Rule.maximin(), 3, 6), (Rule.copeland(), 3, 6), (Rule.ranked_pairs(), 3, 6),
    (Rule.bucklin(), 3, 9), (Rule.nanson(), 3, 6), (Rule.baldwin(), 4, 12), (Rule.stv(), 3, 6 + 3 * 4),
    (Rule.schulze(), 3, 6),
])
def test_component_counts(rule, m, k):
    assert descriptor(rule, m).k == k


def test_maximin_labels_are_ordered_pairs():
    desc = descriptor(Rule.maximin(), 3)
    assert set(desc.labels) == {('pair', c, d) for c in range(3) for d in range(3) if c != d}


def test_borda_score_vector(make_election):
    election = make_election(['p', 'a', 'b'], [(1, 'a>b>p')])
    desc = descriptor(Rule.borda(), 3)
    vote = election.vote('a>b>p')
    assert score_vector(desc, vote) == (0, 2, 1)
    assert total_score(desc, election.profile) == (0, 2, 1)


def test_bucklin_score_vector(make_election):
    election = make_election(['p', 'a', 'b'], [(1, 'a>b>p')])
    desc = descriptor(Rule.bucklin(), 3)
    # per candidate: ranked within the top 1, 2, 3 positions
    assert score_vector(desc, election.vote('a>b>p')) == (0, 0, 1, 1, 1, 1, 0, 1, 1)


@pytest.mark.parametrize('rule', ALL_RULES, ids=rule_id)
def test_total_score_is_additive(rule, rng):
    for _ in range(20):
        m = rng.randint(2, 3)
        desc = descriptor(rule, m)
        profile = random_profile(rng, m, rng.randint(0, 12))
        left = Profile({vote: rng.randint(0, count) for vote, count in profile})
        right = profile.subtract(left)
        assert left + right == profile
        summed = tuple(x + y for x, y in zip(total_score(desc, left), total_score(desc, right)))
        assert total_score(desc, profile) == summed


COMPARISON_ONLY_RULES = [
    Rule.plurality(), Rule.veto(), Rule.approval(2), Rule.borda(), Rule.copeland(), Rule.copeland(0),
    Rule.maximin(), Rule.schulze(),
]


@pytest.mark.parametrize('rule', COMPARISON_ONLY_RULES, ids=rule_id)
def test_comparison_only_rules_ignore_monotone_relabelling(rule, rng):
    for _ in range(200):
        m = rng.randint(3, 4)
        desc = descriptor(rule, m)
        total = [rng.randint(0, 5) for _ in range(desc.k)]
        values = sorted(set(total))
        images = sorted(rng.sample(range(-40, 40), len(values)))
        relabelled = [dict(zip(values, images))[v] for v in total]
        priority = list(range(m))
        rng.shuffle(priority)
        tiebreak = TieBreak(tuple(priority))
        assert signature_of(total) == signature_of(relabelled)
        assert decide(desc, total, 0, tiebreak) == decide(desc, relabelled, 0, tiebreak)


def test_ranked_pairs_reads_margin_sizes():
    desc = descriptor(Rule.ranked_pairs(), 3)
    # components N(0,1), N(0,2), N(1,0), N(1,2), N(2,0), N(2,1)
    small_last = (13, 2, 1, 12, 11, 10)
    large_last = (101, 2, 1, 100, 4, 3)
    assert signature_of(small_last) == signature_of(large_last)
    assert decide(desc, small_last, 0, TieBreak.default(3)) == 2
    assert decide(desc, large_last, 0, TieBreak.default(3)) == 0


@pytest.mark.parametrize('rule', ALL_RULES, ids=rule_id)
def test_decide_agrees_with_direct_evaluation(rule):
    rng = random.Random(7)
    for _ in range(150):
        m = rng.randint(2, 4)
        election = random_election(rng, m, rng.randint(0, 8))
        desc = descriptor(rule, m)
        winner = decide(desc, total_score(desc, election.profile), election.n, election.tiebreak)
        assert winner == rules.evaluate(rule, election).id


@pytest.mark.slow
@pytest.mark.parametrize('rule', ALL_RULES, ids=rule_id)
def test_decide_agrees_with_direct_evaluation_full(rule):
    rng = random.Random(70)
    for _ in range(1000):
        m = rng.randint(2, 4)
        election = random_election(rng, m, rng.randint(0, 8))
        desc = descriptor(rule, m)
        assert decide(desc, total_score(desc, election.profile), election.n, election.tiebreak) == rules.evaluate(rule, election).id


def test_decide_rejects_wrong_length():
    with pytest.raises(ValueError):
        decide(descriptor(Rule.borda(), 3), (0, 0), 0, TieBreak.default(3))


@pytest.mark.parametrize('k,count', [(1, 1), (2, 3), (3, 13), (4, 75), (5, 541)])
def test_signature_counts_are_fubini_numbers(k, count):
    signatures = list(enumerate_signatures(k))
    assert len(signatures) == count
    assert len(set(signatures)) == count


@pytest.mark.parametrize('k', [1, 2, 3, 4])
def test_signatures_match_brute_force_relation_filter(k):
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    consistent = set()
    for rels in product('<=>', repeat=len(pairs)):
        try:
            consistent.add(Signature.from_relation(k, dict(zip(pairs, rels))))
        except InconsistentSignatureError:
            continue
    assert consistent == set(enumerate_signatures(k))


def test_representative_has_its_own_signature():
    for signature in enumerate_signatures(4):
        assert signature_of(representative(signature)) == signature


def test_from_relation_rejects_intransitive_maps():
    with pytest.raises(InconsistentSignatureError):
        Signature.from_relation(3, {(0, 1): '<', (1, 2): '<', (0, 2): '>'})
    with pytest.raises(InconsistentSignatureError):
        Signature.from_relation(3, {(0, 1): '=', (1, 2): '=', (0, 2): '<'})
    with pytest.raises(InconsistentSignatureError):
        Signature.from_relation(2, {})


def test_signature_relation_reads_blocks():
    signature = signature_of((3, 1, 3))
    assert signature.relation(0, 1) == '>'
    assert signature.relation(0, 2) == '='
    assert signature.relation(1, 2) == '<'
