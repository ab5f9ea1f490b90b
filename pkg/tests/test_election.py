from fractions import Fraction

import pytest

from utils.election import (
    Election, Profile, Rule, RuleSpecError, TieBreak, Vote, all_votes, parse_rule, restrict,
)


def test_vote_must_be_a_permutation():
    with pytest.raises(ValueError):
        Vote((0, 0, 1))
    vote = Vote((2, 0, 1))
    assert vote.m == 3
    assert vote.prefers(2, 1)
    assert vote.top([0, 1]) == 0
    assert vote.restrict([0, 2]) == Vote((1, 0))


def test_all_votes_is_lexicographic():
    votes = all_votes(3)
    assert len(votes) == 6
    assert votes[0] == Vote((0, 1, 2))
    assert list(votes) == sorted(votes)


def test_profile_merges_counts_and_orders_entries():
    a, b = Vote((1, 0)), Vote((0, 1))
    profile = Profile({a: 2}) + Profile({a: 1, b: 1})
    assert profile.entries == ((b, 1), (a, 3))
    assert profile.n == 4
    assert profile.subtract(Profile({a: 3})) == Profile({b: 1})
    assert profile.contains(Profile({a: 2}))
    assert not profile.contains(Profile({b: 2}))
    with pytest.raises(ValueError):
        profile.subtract(Profile({b: 2}))


def test_profile_rejects_negative_counts():
    with pytest.raises(ValueError):
        Profile({Vote((0, 1)): -1})


def test_tiebreak_helpers():
    order = TieBreak((2, 0, 1))
    assert order.first([0, 1, 2]) == 2
    assert order.last([0, 1, 2]) == 1
    assert order.prefers(0, 1)
    assert order.restrict([0, 1]) == TieBreak((0, 1))


@pytest.mark.parametrize('spec,label', [
    ('borda', 'borda'), ('Plurality', 'plurality'), ('veto', 'veto'), ('approval:2', 'approval:2'),
    ('copeland:1/2', 'copeland:1/2'), ('copeland', 'copeland:1/2'), ('maximin', 'maximin'),
    ('bucklin', 'bucklin'), ('stv', 'stv'), ('nanson', 'nanson'), ('baldwin', 'baldwin'),
    ('rankedpairs', 'rankedpairs'), ('schulze', 'schulze'), ('scoring:3,1,0', 'scoring:3,1,0'),
])
def test_parse_rule_round_trips_labels(spec, label):
    assert parse_rule(spec).label == label


@pytest.mark.parametrize('spec', ['', 'borda:2', 'approval:x', 'copeland:3/2', 'scoring:0,1', 'young'])
def test_parse_rule_errors(spec):
    with pytest.raises(RuleSpecError):
        parse_rule(spec)


def test_approval_zero_reports_the_threshold():
    with pytest.raises(RuleSpecError, match='at least 1'):
        parse_rule('approval:0')


def test_scoring_vectors_expand_shorthands():
    assert Rule.borda().scoring_vector(3) == (2, 1, 0)
    assert Rule.plurality().scoring_vector(3) == (1, 0, 0)
    assert Rule.veto().scoring_vector(3) == (1, 1, 0)
    assert Rule.approval(5).scoring_vector(3) == (1, 1, 1)
    assert Rule.scoring(['5/2', 1, 0, 0]).scoring_vector(3) == (Fraction(5, 2), 1, 0)
    with pytest.raises(RuleSpecError):
        Rule.scoring([1, 0]).scoring_vector(3)


def test_election_validates_its_parts(make_election):
    election = make_election(['p', 'a'], [(2, 'a>p')], tiebreak=['p', 'a'])
    assert election.m == 2 and election.n == 2
    assert election.render(election.vote('a>p')) == 'a>p'
    with pytest.raises(ValueError):
        Election(election.candidates, Profile({Vote((0, 1, 2)): 1}), election.tiebreak)


def test_restrict_projects_votes(make_election):
    election = make_election(['p', 'a', 'b'], [(2, 'b>p>a'), (1, 'a>p>b')])
    kept = restrict(election, {'p', 'a'})
    assert kept.names == ('p', 'a')
    assert kept.profile == Profile({kept.vote('p>a'): 2, kept.vote('a>p'): 1})

    single = make_election(['a', 'b', 'p'], [(1, 'a>b>p')])
    assert restrict(single, {'a', 'p'}).profile == Profile({Vote((0, 1)): 1})


def test_restrict_to_everything_is_identity(make_election):
    election = make_election(['p', 'a', 'b'], [(2, 'b>p>a'), (1, 'a>p>b')], tiebreak=['b', 'p', 'a'])
    assert restrict(election, election.names) == election


def test_restrict_rejects_empty_and_unknown(make_election):
    election = make_election(['p', 'a'], [(1, 'a>p')])
    with pytest.raises(ValueError):
        restrict(election, set())
    with pytest.raises(ValueError):
        restrict(election, {'p', 'z'})
