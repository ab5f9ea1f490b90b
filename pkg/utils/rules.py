import logging
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Set, Tuple

from utils.election import (
    BALDWIN, BUCKLIN, COPELAND, MAXIMIN, NANSON, POSITIONAL, RANKED_PAIRS, SCHULZE, STV,
    Candidate, Election, Profile, Rule, TieBreak,
)

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


class EliminationRound(NamedTuple):
    survivors: FrozenSet[int]
    scores: Dict[int, Fraction]
    eliminated: FrozenSet[int]


# pairwise counts N[c][d] = number of votes preferring c to d

def pairwise_counts(profile: Profile, m: int) -> List[List[int]]:
    counts = [[0] * m for _ in range(m)]
    for vote, count in profile:
        ranking = vote.ranking
        for i, a in enumerate(ranking):
            row = counts[a]
            for b in ranking[i + 1:]:
                row[b] += count
    return counts


def positional_scores(profile: Profile, weights: Sequence[Fraction]) -> List[Fraction]:
    scores = [Fraction(0)] * len(weights)
    for vote, count in profile:
        for position, c in enumerate(vote.ranking):
            scores[c] += count * weights[position]
    return scores


def copeland_scores(pairwise: Callable[[int, int], Fraction], ids: Sequence[int], alpha: Fraction) -> Dict[int, Fraction]:
    scores = {c: Fraction(0) for c in ids}
    for c in ids:
        for d in ids:
            if c == d:
                continue
            if pairwise(c, d) > pairwise(d, c):
                scores[c] += 1
            elif pairwise(c, d) == pairwise(d, c):
                scores[c] += alpha
    return scores


def maximin_scores(pairwise: Callable[[int, int], Fraction], ids: Sequence[int]) -> Dict[int, Fraction]:
    # a lone candidate has no opponent and scores 0
    return {c: min((Fraction(pairwise(c, d)) for d in ids if d != c), default=Fraction(0)) for c in ids}


def majority_level(top_counts: Sequence[Fraction], n: int) -> Optional[int]:
    # top_counts[i - 1] = votes ranking the candidate within the top i positions
    for level, value in enumerate(top_counts, start=1):
        if 2 * value > n:
            return level
    return None


def bucklin_levels(profile: Profile, m: int) -> Dict[int, Optional[int]]:
    within = [[0] * m for _ in range(m)]
    for vote, count in profile:
        for position, c in enumerate(vote.ranking):
            for level in range(position, m):
                within[c][level] += count
    return {c: majority_level(within[c], profile.n) for c in range(m)}


def top_choice_counts(profile: Profile, survivors: Iterable[int]) -> Dict[int, Fraction]:
    survivors = frozenset(survivors)
    scores = {c: Fraction(0) for c in survivors}
    for vote, count in profile:
        scores[vote.top(survivors)] += count
    return scores


def restricted_borda(pairwise: Callable[[int, int], Fraction], survivors: Iterable[int]) -> Dict[int, Fraction]:
    survivors = frozenset(survivors)
    return {c: Fraction(sum(pairwise(c, d) for d in survivors if d != c)) for c in survivors}


def argmax_set(scores: Mapping[int, Fraction]) -> FrozenSet[int]:
    best = max(scores.values())
    return frozenset(c for c, s in scores.items() if s == best)


# one candidate leaves per round: the lowest-priority candidate among those with the least score

def single_elimination(ids: Iterable[int], round_scores: Callable[[FrozenSet[int]], Dict[int, Fraction]],
                       tiebreak: TieBreak, stop_on_tie: bool) -> Tuple[FrozenSet[int], List[EliminationRound]]:
    survivors = frozenset(ids)
    trace: List[EliminationRound] = []
    while len(survivors) > 1:
        scores = round_scores(survivors)
        low = min(scores.values())
        if stop_on_tie and all(s == low for s in scores.values()):
            trace.append(EliminationRound(survivors, scores, frozenset()))
            break
        victim = tiebreak.last(c for c in survivors if scores[c] == low)
        trace.append(EliminationRound(survivors, scores, frozenset([victim])))
        survivors = survivors - {victim}
    return survivors, trace


# everyone strictly below the round average leaves; a full tie keeps only the tie-break-first candidate

def average_elimination(ids: Iterable[int], round_scores: Callable[[FrozenSet[int]], Dict[int, Fraction]],
                        tiebreak: TieBreak, stop_on_tie: bool) -> Tuple[FrozenSet[int], List[EliminationRound]]:
    survivors = frozenset(ids)
    trace: List[EliminationRound] = []
    while len(survivors) > 1:
        scores = round_scores(survivors)
        total = sum(scores.values())
        below = frozenset(c for c in survivors if len(survivors) * scores[c] < total)
        if not below:
            if stop_on_tie:
                trace.append(EliminationRound(survivors, scores, frozenset()))
                break
            keep = tiebreak.first(survivors)
            trace.append(EliminationRound(survivors, scores, survivors - {keep}))
            survivors = frozenset([keep])
            break
        trace.append(EliminationRound(survivors, scores, below))
        survivors = survivors - below
    return survivors, trace


def lock_edges(ordered_edges: Iterable[Edge]) -> List[Edge]:
    # lock each edge unless it closes a cycle
    locked: List[Edge] = []
    successors: Dict[int, Set[int]] = {}
    for a, b in ordered_edges:
        stack, seen = [b], {b}
        closes_cycle = False
        while stack:
            node = stack.pop()
            if node == a:
                closes_cycle = True
                break
            for nxt in successors.get(node, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if not closes_cycle:
            locked.append((a, b))
            successors.setdefault(a, set()).add(b)
    return locked


def ranked_pairs_order(margin: Callable[[int, int], Fraction], ids: Sequence[int]) -> List[Edge]:
    # positive-margin pairs, larger margins first, ties by smaller (winner, loser) ids
    edges = [(margin(a, b), a, b) for a in ids for b in ids if a != b and margin(a, b) > 0]
    edges.sort(key=lambda e: (-e[0], e[1], e[2]))
    return [(a, b) for _, a, b in edges]


def graph_sources(ids: Iterable[int], locked: Iterable[Edge]) -> FrozenSet[int]:
    beaten = {b for _, b in locked}
    return frozenset(c for c in ids if c not in beaten)


# schulze, winning votes: edge c->d of weight N(c,d) when N(c,d) > N(d,c); None means no path

def _weakest(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    return None if a is None or b is None else min(a, b)


def _stronger(a: Optional[Fraction], b: Optional[Fraction]) -> bool:
    return a is not None and (b is None or a > b)


def schulze_strengths(pairwise: Callable[[int, int], Fraction], ids: Sequence[int]) -> Dict[Edge, Optional[Fraction]]:
    ids = list(ids)
    strength = {(c, d): (Fraction(pairwise(c, d)) if pairwise(c, d) > pairwise(d, c) else None)
                for c in ids for d in ids if c != d}
    for k in ids:
        for c in ids:
            if c == k:
                continue
            for d in ids:
                if d in (c, k):
                    continue
                via = _weakest(strength[(c, k)], strength[(k, d)])
                if _stronger(via, strength[(c, d)]):
                    strength[(c, d)] = via
    return strength


def schulze_winners(pairwise: Callable[[int, int], Fraction], ids: Sequence[int]) -> FrozenSet[int]:
    strength = schulze_strengths(pairwise, ids)
    return frozenset(c for c in ids if not any(_stronger(strength[(d, c)], strength[(c, d)]) for d in ids if d != c))


def _runoff(rule: Rule, profile: Profile, m: int, tiebreak: TieBreak, stop_on_tie: bool
            ) -> Tuple[FrozenSet[int], List[EliminationRound]]:
    ids = range(m)
    if rule.family == STV:
        return single_elimination(ids, lambda s: top_choice_counts(profile, s), tiebreak, stop_on_tie)
    counts = pairwise_counts(profile, m)
    pairwise = lambda c, d: counts[c][d]
    scorer = lambda s: restricted_borda(pairwise, s)
    if rule.family == BALDWIN:
        return single_elimination(ids, scorer, tiebreak, stop_on_tie)
    return average_elimination(ids, scorer, tiebreak, stop_on_tie)


def score_table(rule: Rule, profile: Profile, m: int) -> Dict[int, Fraction]:
    """Per-candidate score for score-based rules (Bucklin: negated majority level, so larger is better)."""

    if rule.family == POSITIONAL:
        return dict(enumerate(positional_scores(profile, rule.scoring_vector(m))))
    if rule.family in (COPELAND, MAXIMIN):
        counts = pairwise_counts(profile, m)
        pairwise = lambda c, d: counts[c][d]
        if rule.family == COPELAND:
            return copeland_scores(pairwise, range(m), rule.alpha)
        return maximin_scores(pairwise, range(m))
    if rule.family == BUCKLIN:
        if profile.is_empty():
            return {c: Fraction(0) for c in range(m)}
        return {c: Fraction(-level) for c, level in bucklin_levels(profile, m).items()}
    raise ValueError(f"{rule.label} has no single score table.")


def cowinner_ids(rule: Rule, profile: Profile, m: int, tiebreak: TieBreak) -> FrozenSet[int]:
    if rule.family in (STV, BALDWIN, NANSON):
        survivors, _ = _runoff(rule, profile, m, tiebreak, stop_on_tie=True)
        return survivors
    if rule.family == RANKED_PAIRS:
        counts = pairwise_counts(profile, m)
        locked = lock_edges(ranked_pairs_order(lambda a, b: counts[a][b] - counts[b][a], range(m)))
        return graph_sources(range(m), locked)
    if rule.family == SCHULZE:
        counts = pairwise_counts(profile, m)
        return schulze_winners(lambda c, d: counts[c][d], range(m))
    return argmax_set(score_table(rule, profile, m))


def winner_id(rule: Rule, profile: Profile, m: int, tiebreak: TieBreak) -> int:
    if rule.family in (STV, BALDWIN):
        if profile.is_empty():
            logger.warning(f"Empty profile under {rule.label}: the tie-break-first candidate wins.")
        survivors, _ = _runoff(rule, profile, m, tiebreak, stop_on_tie=False)
        (winner,) = survivors
        return winner
    return tiebreak.first(cowinner_ids(rule, profile, m, tiebreak))


def evaluate(rule: Rule, election: Election) -> Candidate:
    """Unique winner: the rule's co-winner semantics followed by the tie-break order."""

    return election.candidates[winner_id(rule, election.profile, election.m, election.tiebreak)]


def cowinners(rule: Rule, election: Election) -> FrozenSet[Candidate]:
    ids = cowinner_ids(rule, election.profile, election.m, election.tiebreak)
    return frozenset(election.candidates[c] for c in ids)


def rule_scores(rule: Rule, election: Election) -> Dict[Candidate, Fraction]:
    table = score_table(rule, election.profile, election.m)
    return {election.candidates[c]: s for c, s in table.items()}


def elimination_trace(rule: Rule, election: Election) -> List[EliminationRound]:
    if not rule.is_runoff:
        raise ValueError(f"{rule.label} is not a runoff rule.")
    _, trace = _runoff(rule, election.profile, election.m, election.tiebreak, stop_on_tie=False)
    return trace


def ranked_pairs_locks(election: Election) -> List[Edge]:
    counts = pairwise_counts(election.profile, election.m)
    return lock_edges(ranked_pairs_order(lambda a, b: counts[a][b] - counts[b][a], range(election.m)))


def schulze_paths(election: Election) -> Dict[Edge, Optional[Fraction]]:
    counts = pairwise_counts(election.profile, election.m)
    return schulze_strengths(lambda c, d: counts[c][d], range(election.m))
