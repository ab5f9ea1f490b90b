"""Brute-force reference solver for every attack kind on desk-scale instances.

It enumerates candidate actions (as vote-type counts, never individual voters), applies each
one and re-runs the election directly. Nothing here touches the winning-condition or ILP code.
"""

import logging
from dataclasses import dataclass, replace
from itertools import combinations, combinations_with_replacement, product
from math import comb, prod
from typing import Iterator, List, Sequence

from utils.election import Profile, all_votes
from utils.instances import (
    AttackInstance, AttackKind, AttackResult, AttackWitness, SPOILER_KINDS,
    attack_succeeds, outcome_winner, pair_reassignments,
)

logger = logging.getLogger(__name__)

ENGINE = 'oracle'


class OracleRefused(Exception):
    """Raised when an instance's state space is larger than the oracle budget allows."""
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_states: int = 200000

    def __post_init__(self):
        if self.max_states <= 0:
            raise ValueError("max_states must be positive.")


def _sub_multisets(profile: Profile, max_size: int) -> List[Profile]:
    # every sub-multiset of at most max_size votes, by size and then by counts
    votes = profile.votes()
    vectors = [counts for counts in product(*(range(min(c, max_size) + 1) for _, c in profile))
               if sum(counts) <= max_size]
    vectors.sort(key=lambda counts: (sum(counts), counts))
    return [Profile(dict(zip(votes, counts))) for counts in vectors]


def _multisets(m: int, size: int) -> Iterator[Profile]:
    for ballots in combinations_with_replacement(all_votes(m), size):
        yield Profile.from_votes(ballots)


def _subsets(items: Sequence[str], max_size: int) -> Iterator[tuple]:
    for size in range(min(max_size, len(items)) + 1):
        yield from combinations(items, size)


def _box(profile: Profile, cap: int) -> int:
    return prod(min(c, cap) + 1 for _, c in profile)


def count_states(inst: AttackInstance) -> int:
    """Upper bound on the actions the oracle would try."""

    kind, election, budget = inst.kind, inst.election, inst.budget
    orders = len(all_votes(election.m))
    if kind == AttackKind.MANIPULATION:
        return comb(orders + budget - 1, budget)
    if kind == AttackKind.BRIBERY:
        return _box(election.profile, budget) * comb(orders + budget, budget)
    if kind == AttackKind.ADD_VOTES:
        return _box(inst.unregistered, budget)
    if kind == AttackKind.DELETE_VOTES:
        return _box(election.profile, budget)
    if kind == AttackKind.PARTITION_VOTES:
        return _box(election.profile, election.n)
    return 2 ** election.m


def _actions(inst: AttackInstance) -> Iterator[AttackWitness]:
    kind, election, budget = inst.kind, inst.election, inst.budget
    names = list(election.names)

    if kind == AttackKind.MANIPULATION:
        for ballots in _multisets(election.m, budget):
            yield AttackWitness(ballots=ballots)
    elif kind == AttackKind.BRIBERY:
        for removed in _sub_multisets(election.profile, budget):
            for added in _multisets(election.m, removed.n):
                yield AttackWitness(reassignments=pair_reassignments(removed, added))
    elif kind == AttackKind.ADD_VOTES:
        for added in _sub_multisets(inst.unregistered, budget):
            yield AttackWitness(added=added)
    elif kind == AttackKind.DELETE_VOTES:
        for deleted in _sub_multisets(election.profile, budget):
            yield AttackWitness(deleted=deleted)
    elif kind == AttackKind.PARTITION_VOTES:
        for first in _sub_multisets(election.profile, election.n):
            yield AttackWitness(parts=(first, election.profile.subtract(first)))
    elif kind in SPOILER_KINDS:
        spoilers = [n for n in names if n in inst.spoilers]
        limit = budget if kind == AttackKind.ADD_CANDIDATES else len(spoilers)
        for chosen in _subsets(spoilers, limit):
            yield AttackWitness(candidates=chosen)
    elif kind == AttackKind.DELETE_CANDIDATES:
        deletable = [n for n in names if n != inst.target and n not in inst.protected]
        for chosen in _subsets(deletable, budget):
            yield AttackWitness(candidates=chosen)
    else:
        for first in _subsets(names, len(names)):
            yield AttackWitness(candidate_parts=(first, tuple(n for n in names if n not in first)))


def oracle_solve(inst: AttackInstance, budget: OracleBudget = OracleBudget()) -> AttackResult:
    """Exhaustive decision; the witness is the first successful action in enumeration order."""

    states = count_states(inst)
    if states > budget.max_states:
        logger.warning(f"Oracle refused {inst.kind.value}: {states} states exceed {budget.max_states}")
        raise OracleRefused(f"{states} states exceed the oracle limit of {budget.max_states}")

    logger.info(f"Oracle {inst.kind.value} ({inst.mode.value}): up to {states} states")
    for witness in _actions(inst):
        winner = outcome_winner(inst, witness)
        if attack_succeeds(inst, winner):
            if inst.is_destructive:
                witness = replace(witness, winner=winner)
            return AttackResult.yes(witness, engine=ENGINE)
    return AttackResult.no(engine=ENGINE)
