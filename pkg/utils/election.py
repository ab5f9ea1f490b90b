import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

logger = logging.getLogger(__name__)

POSITIONAL = 'positional'
COPELAND = 'copeland'
MAXIMIN = 'maximin'
BUCKLIN = 'bucklin'
STV = 'stv'
NANSON = 'nanson'
BALDWIN = 'baldwin'
RANKED_PAIRS = 'rankedpairs'
SCHULZE = 'schulze'

FAMILIES = (POSITIONAL, COPELAND, MAXIMIN, BUCKLIN, STV, NANSON, BALDWIN, RANKED_PAIRS, SCHULZE)
RUNOFF_FAMILIES = (STV, NANSON, BALDWIN)


class RuleSpecError(ValueError):
    """Raised when a rule spec string or a rule parameter is invalid."""
    pass


@dataclass(frozen=True, order=True)
class Candidate:
    id: int
    name: str


@dataclass(frozen=True, order=True)
class Vote:
    """A linear order over candidate ids; position 0 is the most preferred."""

    ranking: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.ranking) != list(range(len(self.ranking))):
            raise ValueError(f"Ranking is not a permutation of the candidate ids: {self.ranking}")

    @property
    def m(self) -> int:
        return len(self.ranking)

    def position(self, candidate: int) -> int:
        return self.ranking.index(candidate)

    def prefers(self, a: int, b: int) -> bool:
        return self.ranking.index(a) < self.ranking.index(b)

    def top(self, among: Iterable[int]) -> int:
        pool = set(among)
        for c in self.ranking:
            if c in pool:
                return c
        raise ValueError("Cannot take the top choice of an empty candidate subset.")

    # project onto the kept ids (old ids, any order); kept ids are renumbered by ascending old id

    def restrict(self, keep: Iterable[int]) -> 'Vote':
        new_id = {old: new for new, old in enumerate(sorted(set(keep)))}
        return Vote(tuple(new_id[c] for c in self.ranking if c in new_id))


@lru_cache(maxsize=None)
def all_votes(m: int) -> Tuple[Vote, ...]:
    # every linear order over m candidates, lexicographic
    return tuple(Vote(p) for p in permutations(range(m)))


class Profile:
    """Multiset of votes, stored as (vote, count) entries in lexicographic ranking order."""

    __slots__ = ('_entries', '_n', '_index')

    def __init__(self, counts: Optional[Mapping[Vote, int]] = None):
        merged: Counter = Counter()
        for vote, count in (counts or {}).items():
            if not isinstance(count, int) or count < 0:
                raise ValueError(f"Vote counts must be nonnegative integers, got {count!r}")
            if count:
                merged[vote] += count
        self._entries: Tuple[Tuple[Vote, int], ...] = tuple(sorted(merged.items()))
        self._n = sum(merged.values())
        self._index: Dict[Vote, int] = dict(self._entries)

    @classmethod
    def from_votes(cls, votes: Iterable[Vote]) -> 'Profile':
        return cls(Counter(votes))

    @property
    def entries(self) -> Tuple[Tuple[Vote, int], ...]:
        return self._entries

    @property
    def n(self) -> int:
        return self._n

    def is_empty(self) -> bool:
        return self._n == 0

    def count(self, vote: Vote) -> int:
        return self._index.get(vote, 0)

    def votes(self) -> Tuple[Vote, ...]:
        return tuple(v for v, _ in self._entries)

    def as_dict(self) -> Dict[Vote, int]:
        return dict(self._entries)

    def expand(self) -> List[Vote]:
        return [v for v, c in self._entries for _ in range(c)]

    def restrict(self, keep: Iterable[int]) -> 'Profile':
        keep = list(keep)
        merged: Counter = Counter()
        for vote, count in self._entries:
            merged[vote.restrict(keep)] += count
        return Profile(merged)

    def subtract(self, other: 'Profile') -> 'Profile':
        remaining = Counter(self._index)
        for vote, count in other:
            if remaining[vote] < count:
                raise ValueError(f"Cannot remove {count} x {vote.ranking}: only {remaining[vote]} present.")
            remaining[vote] -= count
        return Profile(remaining)

    def contains(self, other: 'Profile') -> bool:
        return all(self.count(v) >= c for v, c in other)

    def __add__(self, other: 'Profile') -> 'Profile':
        merged = Counter(self._index)
        merged.update(other.as_dict())
        return Profile(merged)

    def __iter__(self) -> Iterator[Tuple[Vote, int]]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, Profile) and self._entries == other._entries

    def __hash__(self) -> int:
        return hash(self._entries)

    def __repr__(self) -> str:
        body = ', '.join(f"{c}x{v.ranking}" for v, c in self._entries)
        return f"Profile({body})"


@dataclass(frozen=True)
class TieBreak:
    """Fixed priority order; earlier candidates win ties."""

    priority: Tuple[int, ...]
    _rank: Dict[int, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if sorted(self.priority) != list(range(len(self.priority))):
            raise ValueError(f"Tie-break priority is not a permutation: {self.priority}")
        object.__setattr__(self, '_rank', {c: i for i, c in enumerate(self.priority)})

    @classmethod
    def default(cls, m: int) -> 'TieBreak':
        return cls(tuple(range(m)))

    def rank(self, candidate: int) -> int:
        return self._rank[candidate]

    def prefers(self, a: int, b: int) -> bool:
        return self._rank[a] < self._rank[b]

    def first(self, candidates: Iterable[int]) -> int:
        return min(candidates, key=self._rank.__getitem__)

    def last(self, candidates: Iterable[int]) -> int:
        return max(candidates, key=self._rank.__getitem__)

    def restrict(self, keep: Iterable[int]) -> 'TieBreak':
        new_id = {old: new for new, old in enumerate(sorted(set(keep)))}
        return TieBreak(tuple(new_id[c] for c in self.priority if c in new_id))


def _as_fraction(value: Union[int, str, Fraction]) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise RuleSpecError(f"Not an exact rational: {value!r}") from e


@dataclass(frozen=True)
class Rule:
    """Voting rule descriptor: a family plus its parameters."""

    family: str
    name: str
    weights: Tuple[Fraction, ...] = ()
    alpha: Fraction = Fraction(1, 2)
    r: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise RuleSpecError(f"Unknown rule family: {self.family}")
        if any(a < b for a, b in zip(self.weights, self.weights[1:])):
            raise RuleSpecError(f"Scoring vector must be nonincreasing: {self.weights}")
        if not 0 <= self.alpha <= 1:
            raise RuleSpecError(f"Copeland alpha must lie in [0, 1], got {self.alpha}")
        if self.r < 1:
            raise RuleSpecError(f"Approval threshold must be at least 1, got {self.r}")

    @classmethod
    def borda(cls) -> 'Rule':
        return cls(POSITIONAL, 'borda')

    @classmethod
    def plurality(cls) -> 'Rule':
        return cls(POSITIONAL, 'plurality')

    @classmethod
    def veto(cls) -> 'Rule':
        return cls(POSITIONAL, 'veto')

    @classmethod
    def approval(cls, r: int) -> 'Rule':
        return cls(POSITIONAL, 'approval', r=r)

    @classmethod
    def scoring(cls, weights: Sequence[Union[int, str, Fraction]]) -> 'Rule':
        if not weights:
            raise RuleSpecError("A scoring vector needs at least one entry.")
        return cls(POSITIONAL, 'scoring', weights=tuple(_as_fraction(w) for w in weights))

    @classmethod
    def copeland(cls, alpha: Union[int, str, Fraction] = Fraction(1, 2)) -> 'Rule':
        return cls(COPELAND, 'copeland', alpha=_as_fraction(alpha))

    @classmethod
    def maximin(cls) -> 'Rule':
        return cls(MAXIMIN, 'maximin')

    @classmethod
    def bucklin(cls) -> 'Rule':
        return cls(BUCKLIN, 'bucklin')

    @classmethod
    def stv(cls) -> 'Rule':
        return cls(STV, 'stv')

    @classmethod
    def nanson(cls) -> 'Rule':
        return cls(NANSON, 'nanson')

    @classmethod
    def baldwin(cls) -> 'Rule':
        return cls(BALDWIN, 'baldwin')

    @classmethod
    def ranked_pairs(cls) -> 'Rule':
        return cls(RANKED_PAIRS, 'rankedpairs')

    @classmethod
    def schulze(cls) -> 'Rule':
        return cls(SCHULZE, 'schulze')

    @property
    def is_positional(self) -> bool:
        return self.family == POSITIONAL

    @property
    def is_runoff(self) -> bool:
        return self.family in RUNOFF_FAMILIES

    @property
    def label(self) -> str:
        if self.name == 'approval':
            return f"approval:{self.r}"
        if self.name == 'scoring':
            return 'scoring:' + ','.join(str(w) for w in self.weights)
        if self.family == COPELAND:
            return f"copeland:{self.alpha.numerator}/{self.alpha.denominator}"
        return self.name

    # expand the positional shorthands to a lambda vector for m candidates

    def scoring_vector(self, m: int) -> Tuple[Fraction, ...]:
        if self.family != POSITIONAL:
            raise RuleSpecError(f"{self.label} is not a positional scoring rule.")
        if self.name == 'borda':
            return tuple(Fraction(m - 1 - i) for i in range(m))
        if self.name == 'plurality':
            return tuple(Fraction(1 if i == 0 else 0) for i in range(m))
        if self.name == 'veto':
            return tuple(Fraction(0 if i == m - 1 else 1) for i in range(m))
        if self.name == 'approval':
            r = min(self.r, m)
            return tuple(Fraction(1 if i < r else 0) for i in range(m))
        if len(self.weights) < m:
            raise RuleSpecError(f"Scoring vector {self.label} is shorter than the {m} candidates.")
        # restricted elections use the prefix of an explicit vector
        return self.weights[:m]


def parse_rule(spec: str) -> Rule:
    """Parse `borda | plurality | veto | approval:R | scoring:L1,L2,.. | copeland:NUM/DEN | maximin | bucklin | stv | nanson | baldwin | rankedpairs | schulze`."""

    text = (spec or '').strip().lower()
    name, _, arg = text.partition(':')
    simple = {
        'borda': Rule.borda, 'plurality': Rule.plurality, 'veto': Rule.veto,
        'maximin': Rule.maximin, 'bucklin': Rule.bucklin, 'stv': Rule.stv,
        'nanson': Rule.nanson, 'baldwin': Rule.baldwin, 'rankedpairs': Rule.ranked_pairs,
        'schulze': Rule.schulze,
    }
    if name in simple:
        if arg:
            raise RuleSpecError(f"Rule '{name}' takes no parameter: {spec}")
        return simple[name]()
    if name == 'approval':
        try:
            r = int(arg)
        except ValueError as e:
            raise RuleSpecError(f"Approval needs an integer threshold: {spec}") from e
        return Rule.approval(r)
    if name == 'copeland':
        return Rule.copeland(arg) if arg else Rule.copeland()
    if name == 'scoring':
        return Rule.scoring([w.strip() for w in arg.split(',') if w.strip()])
    raise RuleSpecError(f"Unknown rule spec: {spec!r}")


@dataclass(frozen=True)
class Election:
    """Candidates, a multiset profile over them and the tie-break order."""

    candidates: Tuple[Candidate, ...]
    profile: Profile
    tiebreak: TieBreak

    def __post_init__(self):
        m = len(self.candidates)
        if m < 1:
            raise ValueError("An election needs at least one candidate.")
        if [c.id for c in self.candidates] != list(range(m)):
            raise ValueError("Candidate ids must be 0..m-1 in order.")
        names = [c.name for c in self.candidates]
        if any(not n for n in names) or len(set(names)) != m:
            raise ValueError(f"Candidate names must be unique and nonempty: {names}")
        if any(v.m != m for v in self.profile.votes()):
            raise ValueError("Every vote must rank exactly the candidate list.")
        if len(self.tiebreak.priority) != m:
            raise ValueError("The tie-break order must rank exactly the candidate list.")

    @classmethod
    def from_rankings(cls, names: Sequence[str], rankings: Iterable[Tuple[int, str]],
                      tiebreak: Optional[Sequence[str]] = None) -> 'Election':
        # rankings are (count, "a>b>c") pairs
        candidates = tuple(Candidate(i, n) for i, n in enumerate(names))
        ids = {n: i for i, n in enumerate(names)}
        counts: Counter = Counter()
        for count, text in rankings:
            counts[Vote(tuple(ids[n.strip()] for n in text.split('>')))] += count
        order = TieBreak(tuple(ids[n] for n in tiebreak)) if tiebreak else TieBreak.default(len(names))
        return cls(candidates, Profile(counts), order)

    @property
    def m(self) -> int:
        return len(self.candidates)

    @property
    def n(self) -> int:
        return self.profile.n

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(c.name for c in self.candidates)

    def candidate(self, name: str) -> Candidate:
        for c in self.candidates:
            if c.name == name:
                return c
        raise ValueError(f"Unknown candidate: {name}")

    def vote(self, text: str) -> Vote:
        return Vote(tuple(self.candidate(n.strip()).id for n in text.split('>')))

    def render(self, vote: Vote) -> str:
        return '>'.join(self.candidates[c].name for c in vote.ranking)

    def with_profile(self, profile: Profile) -> 'Election':
        return Election(self.candidates, profile, self.tiebreak)


def restrict(election: Election, keep: Iterable[Union[Candidate, str]]) -> Election:
    """Project the election onto the kept candidates; ids are renumbered in candidate order."""

    names = {k.name if isinstance(k, Candidate) else k for k in keep}
    kept = [c for c in election.candidates if c.name in names]
    if not kept:
        raise ValueError("Cannot restrict an election to an empty candidate set.")
    if len(kept) != len(names):
        raise ValueError(f"Unknown candidates in restriction: {sorted(names - set(election.names))}")
    old_ids = [c.id for c in kept]
    candidates = tuple(Candidate(i, c.name) for i, c in enumerate(kept))
    return Election(candidates, election.profile.restrict(old_ids), election.tiebreak.restrict(old_ids))
