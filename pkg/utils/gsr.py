import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Hashable, Iterator, Mapping, Sequence, Tuple

from utils.election import (
    BALDWIN, BUCKLIN, COPELAND, MAXIMIN, POSITIONAL, RANKED_PAIRS, SCHULZE, STV,
    Profile, Rule, TieBreak, Vote,
)
from utils import rules

logger = logging.getLogger(__name__)

ScoreVector = Tuple[Fraction, ...]
Label = Tuple[Hashable, ...]

# families whose decision reads only comparisons between components
COMPARISON_ONLY_FAMILIES = (POSITIONAL, COPELAND, MAXIMIN, SCHULZE)


class InconsistentSignatureError(ValueError):
    """Raised when a pairwise relation map is not a weak order on the components."""
    pass


@dataclass(frozen=True)
class GsrDescriptor:
    rule: Rule
    m: int
    labels: Tuple[Label, ...]
    index: Dict[Label, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, 'index', {label: i for i, label in enumerate(self.labels)})

    @property
    def k(self) -> int:
        return len(self.labels)


def descriptor(rule: Rule, m: int) -> GsrDescriptor:
    # component space of the rule for m candidates

    if m < 1:
        raise ValueError("A descriptor needs at least one candidate.")
    if rule.family == POSITIONAL:
        labels = [('pos', c) for c in range(m)]
    elif rule.family == BUCKLIN:
        labels = [('level', c, i) for c in range(m) for i in range(1, m + 1)]
    else:
        labels = [('pair', c, d) for c in range(m) for d in range(m) if c != d]
        if rule.family == STV:
            # top choice of each vote within every subset S containing c
            for c in range(m):
                for mask in range(1 << m):
                    if mask >> c & 1:
                        labels.append(('top', c, tuple(x for x in range(m) if mask >> x & 1)))
    return GsrDescriptor(rule, m, tuple(labels))


def score_vector(desc: GsrDescriptor, vote: Vote) -> ScoreVector:
    if vote.m != desc.m:
        raise ValueError(f"Vote over {vote.m} candidates, descriptor expects {desc.m}.")
    position = {c: i for i, c in enumerate(vote.ranking)}
    weights = desc.rule.scoring_vector(desc.m) if desc.rule.family == POSITIONAL else ()
    values = []
    for label in desc.labels:
        kind = label[0]
        if kind == 'pos':
            values.append(weights[position[label[1]]])
        elif kind == 'pair':
            values.append(Fraction(1 if position[label[1]] < position[label[2]] else 0))
        elif kind == 'level':
            values.append(Fraction(1 if position[label[1]] < label[2] else 0))
        else:
            values.append(Fraction(1 if vote.top(label[2]) == label[1] else 0))
    return tuple(values)


def total_score(desc: GsrDescriptor, profile: Profile) -> ScoreVector:
    totals = [Fraction(0)] * desc.k
    for vote, count in profile:
        for i, value in enumerate(score_vector(desc, vote)):
            if value:
                totals[i] += count * value
    return tuple(totals)


def decide(desc: GsrDescriptor, total: Sequence[Fraction], n: int, tiebreak: TieBreak) -> int:
    # winner id from the total score vector; n is only read by Bucklin

    if len(total) != desc.k:
        raise ValueError(f"Score vector of length {len(total)} does not match k={desc.k}.")
    m, rule, index = desc.m, desc.rule, desc.index
    ids = range(m)

    if rule.family == POSITIONAL:
        return tiebreak.first(rules.argmax_set({c: total[index[('pos', c)]] for c in ids}))

    if rule.family == BUCKLIN:
        if n == 0:
            return tiebreak.first(ids)
        levels = {c: rules.majority_level([total[index[('level', c, i)]] for i in range(1, m + 1)], n) for c in ids}
        best = min(levels.values())
        return tiebreak.first(c for c in ids if levels[c] == best)

    pairwise = lambda c, d: total[index[('pair', c, d)]]
    if rule.family == COPELAND:
        return tiebreak.first(rules.argmax_set(rules.copeland_scores(pairwise, ids, rule.alpha)))
    if rule.family == MAXIMIN:
        return tiebreak.first(rules.argmax_set(rules.maximin_scores(pairwise, ids)))
    if rule.family == RANKED_PAIRS:
        locked = rules.lock_edges(rules.ranked_pairs_order(lambda a, b: pairwise(a, b) - pairwise(b, a), ids))
        return tiebreak.first(rules.graph_sources(ids, locked))
    if rule.family == SCHULZE:
        return tiebreak.first(rules.schulze_winners(pairwise, ids))

    # runoff rules: each round reads scores restricted to the survivors
    if rule.family == STV:
        scorer = lambda s: {c: total[index[('top', c, tuple(sorted(s)))]] for c in s}
        survivors, _ = rules.single_elimination(ids, scorer, tiebreak, stop_on_tie=False)
    elif rule.family == BALDWIN:
        survivors, _ = rules.single_elimination(ids, lambda s: rules.restricted_borda(pairwise, s), tiebreak, stop_on_tie=False)
    else:
        survivors, _ = rules.average_elimination(ids, lambda s: rules.restricted_borda(pairwise, s), tiebreak, stop_on_tie=False)
    (winner,) = survivors
    return winner


@dataclass(frozen=True)
class Signature:
    # weak order on component indices 0..k-1, blocks from the smallest value up

    blocks: Tuple[FrozenSet[int], ...]

    @property
    def k(self) -> int:
        return sum(len(b) for b in self.blocks)

    def block_of(self, i: int) -> int:
        for rank, block in enumerate(self.blocks):
            if i in block:
                return rank
        raise IndexError(f"Component {i} is not in the signature.")

    def relation(self, i: int, j: int) -> str:
        a, b = self.block_of(i), self.block_of(j)
        return '=' if a == b else ('>' if a > b else '<')

    def relations(self) -> Dict[Tuple[int, int], str]:
        k = self.k
        return {(i, j): self.relation(i, j) for i in range(k) for j in range(i + 1, k)}

    @classmethod
    def from_relation(cls, k: int, relation: Mapping[Tuple[int, int], str]) -> 'Signature':
        # relation maps every pair i < j to '<', '=' or '>' (i versus j)
        parent = list(range(k))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in range(k):
            for j in range(i + 1, k):
                rel = relation.get((i, j))
                if rel not in ('<', '=', '>'):
                    raise InconsistentSignatureError(f"Missing or invalid relation for pair ({i}, {j}).")
                if rel == '=':
                    parent[find(i)] = find(j)

        classes: Dict[int, set] = {}
        for i in range(k):
            classes.setdefault(find(i), set()).add(i)
        above = {root: sum(1 for i in members for j in range(k) if find(j) != root
                           and _oriented(relation, i, j) == '>') // len(members)
                 for root, members in classes.items()}
        order = sorted(classes, key=lambda root: above[root])
        blocks = tuple(frozenset(classes[root]) for root in order)
        signature = cls(blocks)
        if signature.relations() != {key: relation[key] for key in signature.relations()}:
            raise InconsistentSignatureError("The relation map is not a weak order.")
        return signature


def _oriented(relation: Mapping[Tuple[int, int], str], i: int, j: int) -> str:
    if i < j:
        return relation[(i, j)]
    return {'<': '>', '>': '<', '=': '='}[relation[(j, i)]]


def signature_of(vector: Sequence[Fraction]) -> Signature:
    values = sorted(set(vector))
    return Signature(tuple(frozenset(i for i, v in enumerate(vector) if v == value) for value in values))


def representative(signature: Signature) -> ScoreVector:
    k = signature.k
    if sorted(i for b in signature.blocks for i in b) != list(range(k)) or any(not b for b in signature.blocks):
        raise InconsistentSignatureError("Blocks must partition 0..k-1 into nonempty sets.")
    values = [Fraction(0)] * k
    for rank, block in enumerate(signature.blocks):
        for i in block:
            values[i] = Fraction(rank)
    return tuple(values)


def _ordered_partitions(items: Tuple[int, ...]) -> Iterator[Tuple[FrozenSet[int], ...]]:
    if not items:
        yield ()
        return
    for size in range(1, len(items) + 1):
        for block in combinations(items, size):
            rest = tuple(x for x in items if x not in block)
            for tail in _ordered_partitions(rest):
                yield (frozenset(block),) + tail


def enumerate_signatures(k: int) -> Iterator[Signature]:
    # every weak order on k components once, as ordered set partitions

    if k < 1:
        raise ValueError("Signatures need at least one component.")
    for blocks in _ordered_partitions(tuple(range(k))):
        yield Signature(blocks)
