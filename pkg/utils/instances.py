"""Attack instances, results and witnesses, with the core-level semantics every solver is judged by.

Everything here uses only the election model and the direct rule implementations, so results
from the ILP solvers and from the brute-force oracle are re-verified the same way.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from utils.election import Candidate, Election, Profile, Rule, Vote, restrict
from utils import rules

logger = logging.getLogger(__name__)


class AttackKind(Enum):
    MANIPULATION = 'manipulation'
    BRIBERY = 'bribery'
    ADD_VOTES = 'add-votes'
    DELETE_VOTES = 'delete-votes'
    PARTITION_VOTES = 'partition-votes'
    ADD_CANDIDATES = 'add-cands'
    ADD_CANDIDATES_UNLIMITED = 'add-cands-unlimited'
    DELETE_CANDIDATES = 'delete-cands'
    PARTITION_CANDIDATES = 'partition-cands'
    RUNOFF_PARTITION_CANDIDATES = 'runoff-partition-cands'


VOTE_KINDS = (AttackKind.MANIPULATION, AttackKind.BRIBERY, AttackKind.ADD_VOTES,
              AttackKind.DELETE_VOTES, AttackKind.PARTITION_VOTES)
CANDIDATE_KINDS = (AttackKind.ADD_CANDIDATES, AttackKind.ADD_CANDIDATES_UNLIMITED, AttackKind.DELETE_CANDIDATES,
                   AttackKind.PARTITION_CANDIDATES, AttackKind.RUNOFF_PARTITION_CANDIDATES)
PARTITION_KINDS = (AttackKind.PARTITION_VOTES, AttackKind.PARTITION_CANDIDATES, AttackKind.RUNOFF_PARTITION_CANDIDATES)
SPOILER_KINDS = (AttackKind.ADD_CANDIDATES, AttackKind.ADD_CANDIDATES_UNLIMITED)


class TieModel(Enum):
    TE = 'te'
    TP = 'tp'


class Mode(Enum):
    CONSTRUCTIVE = 'constructive'
    DESTRUCTIVE = 'destructive'


class Decision(Enum):
    YES = 'YES'
    NO = 'NO'


@dataclass(frozen=True)
class AttackInstance:
    """One attack question. For candidate addition the election already holds the spoilers and
    votes over the extended candidate set; `spoilers` names the ones not yet registered."""

    kind: AttackKind
    rule: Rule
    election: Election
    target: str
    mode: Mode = Mode.CONSTRUCTIVE
    budget: int = 0
    unregistered: Optional[Profile] = None
    ties: Optional[TieModel] = None
    spoilers: Tuple[str, ...] = ()
    protected: Tuple[str, ...] = ()

    def __post_init__(self):
        names = self.election.names
        if self.target not in names:
            raise ValueError(f"Target {self.target!r} is not a candidate.")
        if self.budget < 0:
            raise ValueError(f"Budgets must be nonnegative, got {self.budget}")
        if self.kind == AttackKind.ADD_VOTES:
            if self.unregistered is None:
                raise ValueError("Adding votes needs an unregistered profile.")
            if any(v.m != self.election.m for v in self.unregistered.votes()):
                raise ValueError("Unregistered votes must rank exactly the election's candidates.")
        if self.kind in PARTITION_KINDS and self.ties is None:
            raise ValueError(f"{self.kind.value} needs a tie model (te or tp).")
        unknown = set(self.spoilers) - set(names)
        if unknown:
            raise ValueError(f"Unknown spoiler candidates: {sorted(unknown)}")
        if self.kind in SPOILER_KINDS and len(self.spoilers) == len(names):
            raise ValueError("At least one candidate must be registered.")

    @property
    def p(self) -> Candidate:
        return self.election.candidate(self.target)

    @property
    def registered(self) -> Tuple[str, ...]:
        return tuple(n for n in self.election.names if n not in self.spoilers)

    @property
    def is_destructive(self) -> bool:
        return self.mode == Mode.DESTRUCTIVE

    def retarget(self, name: str) -> 'AttackInstance':
        # constructive question for another candidate; the original target may not be deleted
        return replace(self, target=name, mode=Mode.CONSTRUCTIVE, protected=self.protected + (self.target,))


@dataclass(frozen=True)
class AttackWitness:
    ballots: Optional[Profile] = None
    reassignments: Optional[Tuple[Tuple[Vote, Vote, int], ...]] = None
    added: Optional[Profile] = None
    deleted: Optional[Profile] = None
    parts: Optional[Tuple[Profile, Profile]] = None
    candidates: Optional[Tuple[str, ...]] = None
    candidate_parts: Optional[Tuple[Tuple[str, ...], Tuple[str, ...]]] = None
    winner: Optional[str] = None


@dataclass(frozen=True)
class AttackResult:
    decision: Decision
    witness: Optional[AttackWitness] = None
    engine: str = 'main'
    detail: str = field(default='', compare=False)

    @property
    def is_yes(self) -> bool:
        return self.decision == Decision.YES

    @classmethod
    def yes(cls, witness: AttackWitness, engine: str = 'main', detail: str = '') -> 'AttackResult':
        return cls(Decision.YES, witness, engine, detail)

    @classmethod
    def no(cls, engine: str = 'main', detail: str = '') -> 'AttackResult':
        return cls(Decision.NO, None, engine, detail)


# two-stage semantics

def stage_winners(rule: Rule, election: Election, ties: TieModel) -> FrozenSet[str]:
    """Names promoted out of a first-stage election: none for an empty profile, none for a tie under TE."""

    if election.profile.is_empty():
        return frozenset()
    names = frozenset(c.name for c in rules.cowinners(rule, election))
    if ties == TieModel.TE and len(names) > 1:
        return frozenset()
    return names


def final_winner(rule: Rule, election: Election, promoted: Iterable[str]) -> Optional[str]:
    promoted = set(promoted)
    if not promoted:
        return None
    return rules.evaluate(rule, restrict(election, promoted)).name


def vote_partition_winner(rule: Rule, election: Election, first: Profile, second: Profile,
                          ties: TieModel) -> Optional[str]:
    # both halves run over all candidates; the finalists face the whole electorate
    promoted = stage_winners(rule, election.with_profile(first), ties) | stage_winners(rule, election.with_profile(second), ties)
    return final_winner(rule, election, promoted)


def _sub_election_winners(rule: Rule, election: Election, names: Iterable[str], ties: TieModel) -> FrozenSet[str]:
    names = set(names)
    if not names:
        return frozenset()
    return stage_winners(rule, restrict(election, names), ties)


def candidate_partition_winner(rule: Rule, election: Election, first: Iterable[str], second: Iterable[str],
                               ties: TieModel, runoff: bool) -> Optional[str]:
    """Partition of candidates: the first part holds a primary whose survivors face the second part;
    in the run-off variant both parts hold primaries."""

    first, second = set(first), set(second)
    promoted = _sub_election_winners(rule, election, first, ties)
    if runoff:
        promoted |= _sub_election_winners(rule, election, second, ties)
    else:
        promoted |= second
    return final_winner(rule, election, promoted)


def pair_reassignments(removed: Profile, added: Profile) -> Tuple[Tuple[Vote, Vote, int], ...]:
    """Match taken votes with cast votes in lexicographic order; a ranking taken and cast again cancels."""

    common = {v: min(c, added.count(v)) for v, c in removed}
    sources = removed.subtract(Profile(common)).expand()
    targets = added.subtract(Profile(common)).expand()
    if len(sources) != len(targets):
        raise ValueError("Taken and cast vote counts differ.")
    moves: Dict[Tuple[Vote, Vote], int] = {}
    for source, target in zip(sources, targets):
        moves[(source, target)] = moves.get((source, target), 0) + 1
    return tuple((s, t, c) for (s, t), c in sorted(moves.items()))


def reassignment_profiles(reassignments: Iterable[Tuple[Vote, Vote, int]]) -> Tuple[Profile, Profile]:
    removed, added = {}, {}
    for source, target, count in reassignments:
        removed[source] = removed.get(source, 0) + count
        added[target] = added.get(target, 0) + count
    return Profile(removed), Profile(added)


# witness application

def outcome_winner(inst: AttackInstance, witness: AttackWitness) -> Optional[str]:
    """Winner after applying the witness; raises ValueError when the witness breaks the attack's limits."""

    kind, rule, election = inst.kind, inst.rule, inst.election
    if kind == AttackKind.MANIPULATION:
        ballots = witness.ballots or Profile()
        if ballots.n != inst.budget:
            raise ValueError(f"Expected {inst.budget} manipulator ballots, got {ballots.n}")
        return rules.evaluate(rule, election.with_profile(election.profile + ballots)).name

    if kind == AttackKind.BRIBERY:
        reassignments = witness.reassignments or ()
        if any(source == target or count < 1 for source, target, count in reassignments):
            raise ValueError("Reassignments must move at least one vote to a different ranking.")
        removed, added = reassignment_profiles(reassignments)
        if removed.n > inst.budget:
            raise ValueError(f"Bribed {removed.n} votes with budget {inst.budget}")
        if not election.profile.contains(removed):
            raise ValueError("Bribed votes are not in the profile.")
        return rules.evaluate(rule, election.with_profile(election.profile.subtract(removed) + added)).name

    if kind == AttackKind.ADD_VOTES:
        added = witness.added or Profile()
        if added.n > inst.budget or not inst.unregistered.contains(added):
            raise ValueError("Added votes exceed the budget or the unregistered pool.")
        return rules.evaluate(rule, election.with_profile(election.profile + added)).name

    if kind == AttackKind.DELETE_VOTES:
        deleted = witness.deleted or Profile()
        if deleted.n > inst.budget or not election.profile.contains(deleted):
            raise ValueError("Deleted votes exceed the budget or the profile.")
        return rules.evaluate(rule, election.with_profile(election.profile.subtract(deleted))).name

    if kind == AttackKind.PARTITION_VOTES:
        first, second = witness.parts
        if first + second != election.profile:
            raise ValueError("The two parts do not partition the profile.")
        return vote_partition_winner(rule, election, first, second, inst.ties)

    if kind in SPOILER_KINDS:
        chosen = set(witness.candidates or ())
        if not chosen <= set(inst.spoilers):
            raise ValueError("Only spoiler candidates can be added.")
        if kind == AttackKind.ADD_CANDIDATES and len(chosen) > inst.budget:
            raise ValueError(f"Added {len(chosen)} candidates with budget {inst.budget}")
        return final_winner(rule, election, set(inst.registered) | chosen)

    if kind == AttackKind.DELETE_CANDIDATES:
        chosen = set(witness.candidates or ())
        if inst.target in chosen or chosen & set(inst.protected):
            raise ValueError("The target and protected candidates cannot be deleted.")
        if len(chosen) > inst.budget or not chosen < set(election.names):
            raise ValueError("Deleted candidates exceed the budget or the candidate set.")
        return final_winner(rule, election, set(election.names) - chosen)

    first, second = witness.candidate_parts
    if set(first) & set(second) or set(first) | set(second) != set(election.names):
        raise ValueError("The two parts do not partition the candidates.")
    return candidate_partition_winner(rule, election, first, second, inst.ties,
                                      runoff=kind == AttackKind.RUNOFF_PARTITION_CANDIDATES)


def attack_succeeds(inst: AttackInstance, winner: Optional[str]) -> bool:
    if inst.is_destructive:
        return winner is not None and winner != inst.target
    return winner == inst.target


def verify_witness(inst: AttackInstance, result: AttackResult) -> bool:
    """Re-check a YES result by applying its witness and re-running the election directly."""

    if not result.is_yes:
        return result.witness is None
    if result.witness is None:
        return False
    try:
        winner = outcome_winner(inst, result.witness)
    except (ValueError, TypeError) as e:
        logger.error(f"Invalid witness for {inst.kind.value}: {e}")
        return False
    if inst.is_destructive and result.witness.winner is not None and result.witness.winner != winner:
        return False
    return attack_succeeds(inst, winner)
