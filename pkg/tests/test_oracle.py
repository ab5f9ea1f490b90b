import pytest

from utils.election import Profile, Rule
from utils.instances import AttackInstance, AttackKind, Decision, Mode, TieModel
from utils.oracle import OracleBudget, OracleRefused, count_states, oracle_solve


def test_manipulation_example(make_election):
    election = make_election(['p', 'a'], [(2, 'a>p')], tiebreak=['p', 'a'])
    result = oracle_solve(AttackInstance(AttackKind.MANIPULATION, Rule.borda(), election, 'p', budget=2))
    assert result.decision == Decision.YES and result.engine == 'oracle'
    assert result.witness.ballots == Profile({election.vote('p>a'): 2})
    assert not oracle_solve(AttackInstance(AttackKind.MANIPULATION, Rule.borda(), election, 'p', budget=1)).is_yes


def test_zero_budget_only_tries_doing_nothing(make_election):
    election = make_election(['p', 'a'], [(2, 'a>p')])
    inst = AttackInstance(AttackKind.DELETE_VOTES, Rule.plurality(), election, 'p', budget=0)
    assert count_states(inst) == 1
    assert not oracle_solve(inst).is_yes
    inst = AttackInstance(AttackKind.DELETE_VOTES, Rule.plurality(), election, 'a', budget=0)
    result = oracle_solve(inst)
    assert result.is_yes and result.witness.deleted == Profile()


def test_smallest_action_is_reported_first(make_election):
    election = make_election(['p', 'a', 'b'], [(2, 'a>p>b'), (1, 'p>a>b'), (2, 'b>p>a')])
    result = oracle_solve(AttackInstance(AttackKind.DELETE_CANDIDATES, Rule.plurality(), election, 'p', budget=2))
    assert result.witness.candidates == ('a',)


def test_destructive_result_names_the_winner(make_election):
    election = make_election(['p', 'a'], [(2, 'p>a')], tiebreak=['a', 'p'])
    inst = AttackInstance(AttackKind.BRIBERY, Rule.plurality(), election, 'p', budget=1, mode=Mode.DESTRUCTIVE)
    result = oracle_solve(inst)
    assert result.is_yes and result.witness.winner == 'a'


def test_partition_states_cover_every_split(make_election):
    election = make_election(['p', 'a'], [(2, 'p>a'), (1, 'a>p')])
    inst = AttackInstance(AttackKind.PARTITION_VOTES, Rule.plurality(), election, 'p', ties=TieModel.TP)
    assert count_states(inst) == 6
    assert oracle_solve(inst).is_yes


def test_large_instances_are_refused(make_election):
    election = make_election(['p', 'a', 'b'], [(1, 'a>b>p')])
    inst = AttackInstance(AttackKind.MANIPULATION, Rule.borda(), election, 'p', budget=20)
    with pytest.raises(OracleRefused):
        oracle_solve(inst, OracleBudget(max_states=1000))


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        OracleBudget(max_states=0)
