import random
from collections import Counter
from typing import Callable, List, Optional

import pytest

from utils.election import Candidate, Election, Profile, Rule, TieBreak, all_votes

NAMES = ['p', 'a', 'b', 'c', 'd']

# the rule instances exercised everywhere
RULES = [
    Rule.plurality(), Rule.veto(), Rule.approval(2), Rule.borda(), Rule.copeland(),
    Rule.maximin(), Rule.bucklin(), Rule.stv(), Rule.nanson(), Rule.baldwin(),
]
ALL_RULES = RULES + [Rule.ranked_pairs(), Rule.schulze(), Rule.copeland(0), Rule.copeland(1)]
# rules whose conditions are cheap enough for exhaustive checks at four candidates
FOUR_CANDIDATE_RULES = [Rule.plurality(), Rule.veto(), Rule.approval(2), Rule.borda(), Rule.copeland(), Rule.maximin()]


def random_profile(rng: random.Random, m: int, n: int) -> Profile:
    orders = all_votes(m)
    return Profile(Counter(rng.choice(orders) for _ in range(n)))


def random_election(rng: random.Random, m: int, n: int, shuffle_tiebreak: bool = True) -> Election:
    candidates = tuple(Candidate(i, name) for i, name in enumerate(NAMES[:m]))
    priority = list(range(m))
    if shuffle_tiebreak:
        rng.shuffle(priority)
    return Election(candidates, random_profile(rng, m, n), TieBreak(tuple(priority)))


def rule_id(rule: Rule) -> str:
    return rule.label


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240607)


@pytest.fixture
def make_election() -> Callable[..., Election]:
    # make_election(['p', 'a'], [(2, 'a>p')], tiebreak=['p', 'a'])
    def factory(names: List[str], rankings, tiebreak: Optional[List[str]] = None) -> Election:
        return Election.from_rankings(names, rankings, tiebreak=tiebreak)
    return factory


@pytest.fixture
def solver():
    from utils.attacks import AttackSolver
    return AttackSolver({'ilp_enum_volume': 64, 'ilp_dump_dir': None})


@pytest.fixture
def write_election(tmp_path):
    # write election text to a file and return its path
    def factory(text: str, name: str = 'election.txt') -> str:
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return str(path)
    return factory
