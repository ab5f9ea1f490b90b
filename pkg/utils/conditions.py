import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import AbstractSet, Callable, Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

from utils.election import (
    BALDWIN, BUCKLIN, COPELAND, MAXIMIN, NANSON, POSITIONAL, RANKED_PAIRS, SCHULZE, STV,
    Candidate, Rule, TieBreak, Vote, all_votes,
)
from utils.gsr import (
    COMPARISON_ONLY_FAMILIES, Signature, decide, descriptor, enumerate_signatures, representative, score_vector,
)
from utils.linear import LinConstraint, LinExpr, compare
from utils import rules

logger = logging.getLogger(__name__)

# generators stream linear systems over the per-vote-type counts of the final profile;
# a count assignment satisfies at least one system iff the target wins (or the set is the co-winner set)

__all__ = ['LinExpr', 'LinConstraint', 'LinearSystem', 'winning_systems', 'cowinner_systems', 'signature_systems']


@dataclass(frozen=True)
class LinearSystem:
    constraints: Tuple[LinConstraint, ...]
    description: str

    def holds(self, counts: Mapping[Vote, int]) -> bool:
        return all(c.holds(counts) for c in self.constraints)


class _Components:
    # total-score components as linear expressions in the vote-type counts

    def __init__(self, rule: Rule, m: int):
        self.desc = descriptor(rule, m)
        votes = all_votes(m)
        columns = [score_vector(self.desc, v) for v in votes]
        self.exprs = [LinExpr({v: col[i] for v, col in zip(votes, columns) if col[i]}) for i in range(self.desc.k)]
        self.n = LinExpr({v: 1 for v in votes})

    def comp(self, *label) -> LinExpr:
        return self.exprs[self.desc.index[label]]

    def pairwise(self, c: int, d: int) -> LinExpr:
        return self.comp('pair', c, d)

    def margin(self, c: int, d: int) -> LinExpr:
        return self.pairwise(c, d) - self.pairwise(d, c)

    def level(self, c: int, i: int) -> LinExpr:
        return LinExpr() if i == 0 else self.comp('level', c, i)

    def top(self, c: int, survivors: AbstractSet[int]) -> LinExpr:
        return self.comp('top', c, tuple(sorted(survivors)))

    def borda(self, c: int, survivors: AbstractSet[int]) -> LinExpr:
        return LinExpr.sum(self.pairwise(c, d) for d in sorted(survivors) if d != c)


@lru_cache(maxsize=64)
def _components(rule: Rule, m: int) -> _Components:
    return _Components(rule, m)


def _at_least(tiebreak: TieBreak, winner: int, loser: int) -> str:
    # relation winner-score vs loser-score that lets winner come out on top
    return '>=' if tiebreak.prefers(winner, loser) else '>'


def _name(candidates: Sequence[Candidate], c: int) -> str:
    return candidates[c].name


# positional rules

def _positional_winning(comps, ids, p, tiebreak, names):
    score = lambda c: comps.comp('pos', c)
    yield LinearSystem(tuple(compare(score(p), _at_least(tiebreak, p, c), score(c)) for c in ids if c != p),
                       f"positional scores: {names(p)} on top")


def _score_cowinners(score: Callable[[int], LinExpr], ids, winners: FrozenSet[int], label: str):
    anchor = min(winners)
    constraints = [compare(score(w), '=', score(anchor)) for w in sorted(winners) if w != anchor]
    constraints += [compare(score(anchor), '>', score(c)) for c in ids if c not in winners]
    return LinearSystem(tuple(constraints), label)


def _positional_cowinners(comps, ids, winners, tiebreak, names):
    yield _score_cowinners(lambda c: comps.comp('pos', c), ids, winners,
                           f"positional scores: tie among {sorted(names(w) for w in winners)}")


# maximin: guess each candidate's worst opponent

def _maximin_systems(comps, ids, accept: Callable[[Dict[int, int]], Optional[List[LinConstraint]]], names):
    choices = [[d for d in ids if d != c] for c in ids]
    for opponents in product(*choices):
        opp = dict(zip(ids, opponents))
        constraints = [compare(comps.pairwise(c, opp[c]), '<=', comps.pairwise(c, d))
                       for c in ids for d in ids if d not in (c, opp[c])]
        extra = accept(opp)
        if extra is None:
            continue
        desc = ', '.join(f"min({names(c)})=N({names(c)},{names(opp[c])})" for c in ids)
        yield LinearSystem(tuple(constraints + extra), f"maximin: {desc}")


def _maximin_winning(comps, ids, p, tiebreak, names):
    score = lambda opp, c: comps.pairwise(c, opp[c])
    return _maximin_systems(
        comps, ids,
        lambda opp: [compare(score(opp, p), _at_least(tiebreak, p, c), score(opp, c)) for c in ids if c != p],
        names)


def _maximin_cowinners(comps, ids, winners, tiebreak, names):
    return _maximin_systems(
        comps, ids,
        lambda opp: list(_score_cowinners(lambda c: comps.pairwise(c, opp[c]), ids, winners, '').constraints),
        names)


# copeland: guess the outcome of every pairwise contest

def _copeland_systems(comps, ids, alpha, accept: Callable[[FrozenSet[int]], bool], names):
    pairs = list(combinations(ids, 2))
    for signs in product('<=>', repeat=len(pairs)):
        outcome = dict(zip(pairs, signs))
        relation = lambda c, d: {'>': 1, '=': 0, '<': -1}[outcome[(c, d)]] if c < d else -{'>': 1, '=': 0, '<': -1}[outcome[(d, c)]]
        scores = rules.copeland_scores(relation, ids, alpha)
        if not accept(rules.argmax_set(scores)):
            continue
        constraints = tuple(compare(comps.pairwise(a, b), s, comps.pairwise(b, a)) for (a, b), s in outcome.items())
        desc = ', '.join(f"{names(a)}{s}{names(b)}" for (a, b), s in outcome.items())
        yield LinearSystem(constraints, f"copeland contests: {desc}")


def _copeland_winning(comps, ids, p, tiebreak, names, alpha):
    return _copeland_systems(comps, ids, alpha, lambda best: tiebreak.first(best) == p, names)


def _copeland_cowinners(comps, ids, winners, tiebreak, names, alpha):
    return _copeland_systems(comps, ids, alpha, lambda best: best == winners, names)


# bucklin: guess the winning majority level; thresholds are cleared of the 1/2

def _bucklin_winning(comps, ids, p, tiebreak, names):
    m, n = len(ids), comps.n
    for level in range(1, m + 1):
        if level == m and tiebreak.first(ids) != p:
            continue
        constraints = []
        # at the last level every candidate has a majority unless the profile is empty
        if level < m:
            constraints.append(compare(2 * comps.level(p, level), '>', n))
        if level > 1:
            constraints.append(compare(2 * comps.level(p, level - 1), '<=', n))
        for c in ids:
            if c == p:
                continue
            reach = level if tiebreak.prefers(c, p) else level - 1
            if reach:
                constraints.append(compare(2 * comps.level(c, reach), '<=', n))
        yield LinearSystem(tuple(constraints), f"bucklin: {names(p)} wins at level {level}")


def _bucklin_cowinners(comps, ids, winners, tiebreak, names):
    m, n = len(ids), comps.n
    for level in range(1, m + 1):
        if level == m and len(winners) != m:
            continue
        constraints = []
        for w in sorted(winners):
            if level < m:
                constraints.append(compare(2 * comps.level(w, level), '>', n))
            if level > 1:
                constraints.append(compare(2 * comps.level(w, level - 1), '<=', n))
        for c in ids:
            if c not in winners:
                constraints.append(compare(2 * comps.level(c, level), '<=', n))
        yield LinearSystem(tuple(constraints), f"bucklin: tie at level {level}")


# one-at-a-time elimination (STV, Baldwin): guess the elimination order

def _victim_constraints(score, survivors: FrozenSet[int], victim: int, tiebreak: TieBreak) -> List[LinConstraint]:
    # the victim has the least score; equal scores eliminate the lower-priority candidate
    return [compare(score(victim, survivors), '<=' if tiebreak.prefers(c, victim) else '<', score(c, survivors))
            for c in sorted(survivors) if c != victim]


def _sequential_winning(score, ids, p, tiebreak, names, label):
    others = [c for c in ids if c != p]
    for order in permutations(others):
        survivors = frozenset(ids)
        constraints: List[LinConstraint] = []
        for victim in order:
            constraints += _victim_constraints(score, survivors, victim, tiebreak)
            survivors = survivors - {victim}
        yield LinearSystem(tuple(constraints), f"{label}: eliminate {' > '.join(names(v) for v in order)}")


def _sequential_cowinners(score, ids, winners, tiebreak, names, label):
    losers = [c for c in ids if c not in winners]
    for order in permutations(losers):
        rounds: List[List[List[LinConstraint]]] = []
        survivors = frozenset(ids)
        for victim in order:
            base = _victim_constraints(score, survivors, victim, tiebreak)
            if any(not tiebreak.prefers(c, victim) for c in survivors if c != victim):
                rounds.append([base])
            else:
                # not a full tie: somebody scores strictly above the victim
                rounds.append([base + [compare(score(c, survivors), '>', score(victim, survivors))]
                               for c in sorted(survivors) if c != victim])
            survivors = survivors - {victim}
        final: List[LinConstraint] = []
        if len(winners) > 1:
            anchor = min(winners)
            final = [compare(score(w, winners), '=', score(anchor, winners)) for w in sorted(winners) if w != anchor]
        for choice in product(*rounds):
            constraints = [c for part in choice for c in part] + final
            yield LinearSystem(tuple(constraints),
                               f"{label}: eliminate {' > '.join(names(v) for v in order) or 'nobody'}, tie among "
                               f"{sorted(names(w) for w in winners)}")


# nanson: guess the sequence of elimination sets

def _average_round(score, survivors: FrozenSet[int], eliminated: AbstractSet[int]) -> List[LinConstraint]:
    size = len(survivors)
    total = LinExpr.sum(score(c, survivors) for c in sorted(survivors))
    return [compare(size * score(c, survivors), '<' if c in eliminated else '>=', total) for c in sorted(survivors)]


def _full_tie(score, survivors: FrozenSet[int]) -> List[LinConstraint]:
    anchor = min(survivors)
    return [compare(score(c, survivors), '=', score(anchor, survivors)) for c in sorted(survivors) if c != anchor]


def _nanson_winning(score, ids, p, tiebreak, names):
    def expand(survivors: FrozenSet[int], constraints: List[LinConstraint], path: List[str]):
        if survivors == {p}:
            yield LinearSystem(tuple(constraints), f"nanson: {' | '.join(path) or 'no rounds'}")
            return
        others = sorted(survivors - {p})
        for size in range(1, len(others) + 1):
            for eliminated in combinations(others, size):
                step = _average_round(score, survivors, set(eliminated))
                yield from expand(survivors - set(eliminated), constraints + step,
                                  path + ['drop ' + ','.join(names(e) for e in eliminated)])
        if tiebreak.first(survivors) == p:
            yield LinearSystem(tuple(constraints + _full_tie(score, survivors)),
                               f"nanson: {' | '.join(path + ['full tie'])}")

    return expand(frozenset(ids), [], [])


def _nanson_cowinners(score, ids, winners, tiebreak, names):
    def expand(survivors: FrozenSet[int], constraints: List[LinConstraint], path: List[str]):
        if survivors == winners:
            final = _full_tie(score, survivors) if len(survivors) > 1 else []
            yield LinearSystem(tuple(constraints + final), f"nanson: {' | '.join(path + ['stop'])}")
            return
        losers = sorted(survivors - winners)
        for size in range(1, len(losers) + 1):
            for eliminated in combinations(losers, size):
                step = _average_round(score, survivors, set(eliminated))
                yield from expand(survivors - set(eliminated), constraints + step,
                                  path + ['drop ' + ','.join(names(e) for e in eliminated)])

    return expand(frozenset(ids), [], [])


# ranked pairs: guess every margin sign and the processing order of the positive pairs

def _ranked_pairs_systems(comps, ids, accept: Callable[[FrozenSet[int]], bool], names):
    pairs = list(combinations(ids, 2))
    for signs in product('<=>', repeat=len(pairs)):
        edges = []
        constraints = []
        for (a, b), s in zip(pairs, signs):
            constraints.append(compare(comps.margin(a, b), s, 0))
            if s == '>':
                edges.append((a, b))
            elif s == '<':
                edges.append((b, a))
        for order in permutations(edges):
            sources = rules.graph_sources(ids, rules.lock_edges(order))
            if not accept(sources):
                continue
            ordering = [compare(comps.margin(*e1), '>=' if e1 < e2 else '>', comps.margin(*e2))
                        for e1, e2 in zip(order, order[1:])]
            desc = ' > '.join(f"{names(a)}{names(b)}" for a, b in order) or 'no positive margins'
            yield LinearSystem(tuple(constraints + ordering), f"ranked pairs: {desc}")


# schulze: guess every pairwise contest and the weak order of the winning edges' weights

def _schulze_systems(comps, ids, accept: Callable[[FrozenSet[int]], bool], names):
    pairs = list(combinations(ids, 2))
    for signs in product('<=>', repeat=len(pairs)):
        edges = []
        constraints = []
        for (a, b), s in zip(pairs, signs):
            constraints.append(compare(comps.pairwise(a, b), s, comps.pairwise(b, a)))
            if s == '>':
                edges.append((a, b))
            elif s == '<':
                edges.append((b, a))
        orders = enumerate_signatures(len(edges)) if edges else [Signature(())]
        for order in orders:
            rank = representative(order)
            weight = {e: rank[i] + 1 for i, e in enumerate(edges)}
            if not accept(rules.schulze_winners(lambda c, d: weight.get((c, d), 0), ids)):
                continue
            ordering = []
            for block in order.blocks:
                anchor = edges[min(block)]
                ordering += [compare(comps.pairwise(*edges[i]), '=', comps.pairwise(*anchor)) for i in sorted(block) if edges[i] != anchor]
            for lower, upper in zip(order.blocks, order.blocks[1:]):
                ordering.append(compare(comps.pairwise(*edges[min(lower)]), '<', comps.pairwise(*edges[min(upper)])))
            contests = ', '.join(f"{names(a)}{s}{names(b)}" for (a, b), s in zip(pairs, signs))
            weights = ' < '.join('='.join(f"{names(edges[i][0])}{names(edges[i][1])}" for i in sorted(block))
                                 for block in order.blocks) or 'no edges'
            yield LinearSystem(tuple(constraints + ordering), f"schulze: {contests}; weights {weights}")


def _runoff_score(rule: Rule, comps: _Components):
    if rule.family == STV:
        return comps.top
    return comps.borda


def winning_systems(rule: Rule, candidates: Sequence[Candidate], p: Candidate, tiebreak: TieBreak) -> Iterator[LinearSystem]:
    # union of the systems = count assignments electing p after tie-breaking

    ids = [c.id for c in candidates]
    if p.id not in ids:
        raise ValueError(f"{p.name} is not a candidate.")
    names = lambda c: _name(candidates, c)
    if len(ids) == 1:
        yield LinearSystem((), 'single candidate')
        return
    comps = _components(rule, len(ids))
    logger.info(f"Generando sistemas ganadores para {p.name} con {rule.label} (k={comps.desc.k}).")
    family = rule.family
    if family == POSITIONAL:
        yield from _positional_winning(comps, ids, p.id, tiebreak, names)
    elif family == MAXIMIN:
        yield from _maximin_winning(comps, ids, p.id, tiebreak, names)
    elif family == COPELAND:
        yield from _copeland_winning(comps, ids, p.id, tiebreak, names, rule.alpha)
    elif family == BUCKLIN:
        yield from _bucklin_winning(comps, ids, p.id, tiebreak, names)
    elif family in (STV, BALDWIN):
        yield from _sequential_winning(_runoff_score(rule, comps), ids, p.id, tiebreak, names, rule.label)
    elif family == NANSON:
        yield from _nanson_winning(comps.borda, ids, p.id, tiebreak, names)
    elif family == SCHULZE:
        yield from _schulze_systems(comps, ids, lambda winners: tiebreak.first(winners) == p.id, names)
    else:
        yield from _ranked_pairs_systems(comps, ids, lambda sources: tiebreak.first(sources) == p.id, names)


def cowinner_systems(rule: Rule, candidates: Sequence[Candidate], winners: AbstractSet[Candidate],
                     tiebreak: Optional[TieBreak] = None) -> Iterator[LinearSystem]:
    # union of the systems = count assignments whose co-winner set is exactly `winners`

    ids = [c.id for c in candidates]
    target = frozenset(w.id for w in winners)
    if not target or not target <= set(ids):
        raise ValueError("The co-winner set must be a nonempty subset of the candidates.")
    tiebreak = tiebreak or TieBreak.default(len(ids))
    names = lambda c: _name(candidates, c)
    if len(ids) == 1:
        yield LinearSystem((), 'single candidate')
        return
    comps = _components(rule, len(ids))
    family = rule.family
    if family == POSITIONAL:
        yield from _positional_cowinners(comps, ids, target, tiebreak, names)
    elif family == MAXIMIN:
        yield from _maximin_cowinners(comps, ids, target, tiebreak, names)
    elif family == COPELAND:
        yield from _copeland_cowinners(comps, ids, target, tiebreak, names, rule.alpha)
    elif family == BUCKLIN:
        yield from _bucklin_cowinners(comps, ids, target, tiebreak, names)
    elif family in (STV, BALDWIN):
        yield from _sequential_cowinners(_runoff_score(rule, comps), ids, target, tiebreak, names, rule.label)
    elif family == NANSON:
        yield from _nanson_cowinners(comps.borda, ids, target, tiebreak, names)
    elif family == SCHULZE:
        yield from _schulze_systems(comps, ids, lambda winners: winners == target, names)
    else:
        yield from _ranked_pairs_systems(comps, ids, lambda sources: sources == target, names)


def signature_systems(rule: Rule, candidates: Sequence[Candidate], p: Candidate, tiebreak: TieBreak) -> Iterator[LinearSystem]:
    # generic fallback: every signature of the total vector whose representative elects p

    if rule.family not in COMPARISON_ONLY_FAMILIES:
        raise ValueError(f"{rule.label} does not decide from component comparisons alone.")
    ids = [c.id for c in candidates]
    if len(ids) == 1:
        yield LinearSystem((), 'single candidate')
        return
    comps = _components(rule, len(ids))
    for signature in enumerate_signatures(comps.desc.k):
        if decide(comps.desc, representative(signature), 0, tiebreak) != p.id:
            continue
        constraints = tuple(compare(comps.exprs[i], rel, comps.exprs[j]) for (i, j), rel in signature.relations().items())
        yield LinearSystem(constraints, f"signature {[sorted(b) for b in signature.blocks]}")
