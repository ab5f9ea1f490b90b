"""Attack solvers: manipulation, bribery and vote control through winning conditions plus exact
integer feasibility; candidate control by enumerating candidate subsets; destructive questions by
trying every rival as the constructive target."""

import logging
from dataclasses import replace
from functools import lru_cache
from itertools import combinations, product
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from utils.config import load_config
from utils.conditions import cowinner_systems, winning_systems
from utils.election import Candidate, Election, Profile, Rule, Vote, all_votes
from utils.ilp import DEFAULT_ENUM_VOLUME, ILPInstance, ILPVariable, Witness, solve_feasibility
from utils.instances import (
    AttackInstance, AttackKind, AttackResult, AttackWitness, Mode, TieModel,
    SPOILER_KINDS, candidate_partition_winner, final_winner, pair_reassignments,
)
from utils.linear import LinConstraint, LinExpr, compare

logger = logging.getLogger(__name__)

Counts = Dict[Vote, LinExpr]
StageOption = Tuple[Tuple[LinConstraint, ...], str]


def _subsets(items: Sequence[str], max_size: Optional[int] = None) -> Iterator[Tuple[str, ...]]:
    # by size, then lexicographic in the given order
    top = len(items) if max_size is None else min(max_size, len(items))
    for size in range(top + 1):
        yield from combinations(items, size)


def _vote_total(m: int) -> LinExpr:
    return LinExpr({v: 1 for v in all_votes(m)})


class AttackSolver:

    # class for deciding election attacks exactly

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        self.config = config if config is not None else load_config()
        self.enum_volume = self.config.get('ilp_enum_volume', DEFAULT_ENUM_VOLUME)
        self.dump_dir = self.config.get('ilp_dump_dir')
        self.ilp_calls = 0

    def _feasible(self, variables: List[ILPVariable], constraints: Iterable[LinConstraint]) -> Optional[Witness]:
        self.ilp_calls += 1
        inst = ILPInstance(tuple(variables), tuple(constraints))
        return solve_feasibility(inst, self.enum_volume, self.dump_dir)

    def _first_winning(self, rule: Rule, election: Election, p: Candidate, variables: List[ILPVariable],
                       base: List[LinConstraint], counts: Counts) -> Optional[Witness]:
        # first winning system, in generation order, that the action variables can satisfy
        for system in winning_systems(rule, election.candidates, p, election.tiebreak):
            witness = self._feasible(variables, base + [c.substitute(counts) for c in system.constraints])
            if witness is not None:
                logger.info(f"Feasible system: {system.description}")
                return witness
        return None

    @staticmethod
    def _final_counts(election: Election, extra: Dict[Vote, LinExpr]) -> Counts:
        # every linear order gets an expression: its fixed count plus the action terms
        return {v: LinExpr.const(election.profile.count(v)) + extra.get(v, LinExpr()) for v in all_votes(election.m)}

    # vote attacks

    def solve_manipulation(self, rule: Rule, election: Election, p: Candidate, t: int) -> AttackResult:
        """t manipulators each cast one unrestricted ballot."""

        if t < 0:
            raise ValueError("The manipulator count must be nonnegative.")
        votes = all_votes(election.m)
        variables = [ILPVariable(i, t, f"ballot[{election.render(v)}]") for i, v in enumerate(votes)]
        extra = {v: LinExpr.var(i) for i, v in enumerate(votes)}
        base = [compare(LinExpr.sum(extra.values()), '=', t)]
        logger.info(f"Manipulation: {rule.label}, target {p.name}, {t} manipulators")
        witness = self._first_winning(rule, election, p, variables, base, self._final_counts(election, extra))
        if witness is None:
            return AttackResult.no()
        return AttackResult.yes(AttackWitness(ballots=Profile({v: witness[i] for i, v in enumerate(votes)})))

    def solve_bribery(self, rule: Rule, election: Election, p: Candidate, budget: int) -> AttackResult:
        """At most `budget` existing votes are recast."""

        if budget < 0:
            raise ValueError("The bribery budget must be nonnegative.")
        profile = election.profile
        sources = profile.votes()
        targets = all_votes(election.m)
        # votes taken from each present type and votes cast for each order; pairing them gives the recasts
        variables = [ILPVariable(i, min(profile.count(v), budget), f"out[{election.render(v)}]") for i, v in enumerate(sources)]
        offset = len(variables)
        variables += [ILPVariable(offset + i, budget, f"in[{election.render(v)}]") for i, v in enumerate(targets)]
        removed = {v: LinExpr.var(i) for i, v in enumerate(sources)}
        added = {v: LinExpr.var(offset + i) for i, v in enumerate(targets)}
        extra = {v: added[v] - removed.get(v, LinExpr()) for v in targets}
        moved = LinExpr.sum(removed.values())
        base = [compare(moved, '=', LinExpr.sum(added.values())), compare(moved, '<=', budget)]
        logger.info(f"Bribery: {rule.label}, target {p.name}, budget {budget}")
        witness = self._first_winning(rule, election, p, variables, base, self._final_counts(election, extra))
        if witness is None:
            return AttackResult.no()
        out = Profile({v: witness[i] for i, v in enumerate(sources)})
        into = Profile({v: witness[offset + i] for i, v in enumerate(targets)})
        return AttackResult.yes(AttackWitness(reassignments=pair_reassignments(out, into)))

    def solve_control_add_votes(self, rule: Rule, election: Election, p: Candidate, unregistered: Profile,
                                budget: int) -> AttackResult:
        if budget < 0:
            raise ValueError("The budget must be nonnegative.")
        if any(v.m != election.m for v in unregistered.votes()):
            raise ValueError("Unregistered votes must rank exactly the election's candidates.")
        pool = unregistered.votes()
        variables = [ILPVariable(i, min(unregistered.count(v), budget), f"add[{election.render(v)}]") for i, v in enumerate(pool)]
        extra = {v: LinExpr.var(i) for i, v in enumerate(pool)}
        base = [compare(LinExpr.sum(extra.values()), '<=', budget)]
        logger.info(f"Adding votes: {rule.label}, target {p.name}, budget {budget}, pool of {unregistered.n}")
        witness = self._first_winning(rule, election, p, variables, base, self._final_counts(election, extra))
        if witness is None:
            return AttackResult.no()
        return AttackResult.yes(AttackWitness(added=Profile({v: witness[i] for i, v in enumerate(pool)})))

    def solve_control_delete_votes(self, rule: Rule, election: Election, p: Candidate, budget: int) -> AttackResult:
        if budget < 0:
            raise ValueError("The budget must be nonnegative.")
        present = election.profile.votes()
        variables = [ILPVariable(i, min(election.profile.count(v), budget), f"del[{election.render(v)}]") for i, v in enumerate(present)]
        extra = {v: -LinExpr.var(i) for i, v in enumerate(present)}
        base = [compare(LinExpr.sum(LinExpr.var(i) for i in range(len(present))), '<=', budget)]
        logger.info(f"Deleting votes: {rule.label}, target {p.name}, budget {budget}")
        witness = self._first_winning(rule, election, p, variables, base, self._final_counts(election, extra))
        if witness is None:
            return AttackResult.no()
        return AttackResult.yes(AttackWitness(deleted=Profile({v: witness[i] for i, v in enumerate(present)})))

    # vote partition

    def _stage_options(self, rule: Rule, election: Election, winners: Iterable[Candidate]) -> List[StageOption]:
        """Alternatives (over a sub-profile's counts) under which its co-winner set is exactly `winners`."""

        winners = frozenset(winners)
        size = _vote_total(election.m)
        if not winners:
            return [((compare(size, '=', 0),), 'empty')]
        return [(system.constraints + (compare(size, '>=', 1),), system.description)
                for system in cowinner_systems(rule, election.candidates, winners, election.tiebreak)]

    def _partition_guesses(self, rule: Rule, election: Election, p: Candidate,
                           ties: TieModel) -> Iterator[Tuple[str, List[StageOption], List[StageOption]]]:
        candidates = election.candidates
        if ties == TieModel.TE:
            # p comes out of the first part alone; the second part yields one finalist or none
            first = self._stage_options(rule, election, [p])
            for rival in list(candidates) + [None]:
                promoted = {p.name} | ({rival.name} if rival else set())
                if final_winner(rule, election, promoted) != p.name:
                    logger.info(f"Discarding rival {rival.name if rival else 'none'}: {p.name} loses the final")
                    continue
                if rival is not None:
                    yield rival.name, first, self._stage_options(rule, election, [rival])
                    continue
                second = self._stage_options(rule, election, [])
                for tied in _subsets([c.name for c in candidates]):
                    if len(tied) >= 2:
                        second += self._stage_options(rule, election, [election.candidate(n) for n in tied])
                yield 'none', first, second
            return

        names = [c.name for c in candidates]
        for first_names in _subsets(names):
            if p.name not in first_names:
                continue
            for second_names in _subsets(names):
                if final_winner(rule, election, set(first_names) | set(second_names)) != p.name:
                    continue
                first = self._stage_options(rule, election, [election.candidate(n) for n in first_names])
                second = self._stage_options(rule, election, [election.candidate(n) for n in second_names])
                yield f"{{{','.join(first_names)}}} / {{{','.join(second_names)}}}", first, second

    def solve_control_partition_votes(self, rule: Rule, election: Election, p: Candidate, ties: TieModel) -> AttackResult:
        """Split the votes into two first-stage elections; their promoted winners face all voters."""

        present = election.profile.votes()
        variables = [ILPVariable(i, election.profile.count(v), f"first[{election.render(v)}]") for i, v in enumerate(present)]
        first_counts = {v: LinExpr() for v in all_votes(election.m)}
        second_counts = {v: LinExpr.const(election.profile.count(v)) for v in all_votes(election.m)}
        for i, v in enumerate(present):
            first_counts[v] = LinExpr.var(i)
            second_counts[v] = second_counts[v] - LinExpr.var(i)

        logger.info(f"Partition of votes ({ties.value}): {rule.label}, target {p.name}")
        for label, first, second in self._partition_guesses(rule, election, p, ties):
            for (first_constraints, first_desc), (second_constraints, second_desc) in product(first, second):
                constraints = [c.substitute(first_counts) for c in first_constraints]
                constraints += [c.substitute(second_counts) for c in second_constraints]
                witness = self._feasible(variables, constraints)
                if witness is None:
                    continue
                logger.info(f"Feasible guess {label}: {first_desc} | {second_desc}")
                part = Profile({v: witness[i] for i, v in enumerate(present)})
                return AttackResult.yes(AttackWitness(parts=(part, election.profile.subtract(part))))
        return AttackResult.no()

    # candidate control

    def solve_candidate_control(self, inst: AttackInstance) -> AttackResult:
        """First successful candidate set in size-then-lexicographic order."""

        kind, rule, election, target = inst.kind, inst.rule, inst.election, inst.target
        names = list(election.names)
        logger.info(f"Candidate control {kind.value}: {rule.label}, target {target}")

        if kind in SPOILER_KINDS:
            limit = min(inst.budget, len(inst.spoilers)) if kind == AttackKind.ADD_CANDIDATES else None
            for chosen in _subsets([n for n in names if n in inst.spoilers], limit):
                if final_winner(rule, election, set(inst.registered) | set(chosen)) == target:
                    return AttackResult.yes(AttackWitness(candidates=chosen))
            return AttackResult.no()

        if kind == AttackKind.DELETE_CANDIDATES:
            deletable = [n for n in names if n != target and n not in inst.protected]
            for chosen in _subsets(deletable, inst.budget):
                if final_winner(rule, election, set(names) - set(chosen)) == target:
                    return AttackResult.yes(AttackWitness(candidates=chosen))
            return AttackResult.no()

        runoff = kind == AttackKind.RUNOFF_PARTITION_CANDIDATES
        for first in _subsets(names):
            second = tuple(n for n in names if n not in first)
            if candidate_partition_winner(rule, election, first, second, inst.ties, runoff) == target:
                return AttackResult.yes(AttackWitness(candidate_parts=(first, second)))
        return AttackResult.no()

    # dispatch

    def _solve_constructive(self, inst: AttackInstance) -> AttackResult:
        kind, rule, election, p = inst.kind, inst.rule, inst.election, inst.p
        if kind == AttackKind.MANIPULATION:
            return self.solve_manipulation(rule, election, p, inst.budget)
        if kind == AttackKind.BRIBERY:
            return self.solve_bribery(rule, election, p, inst.budget)
        if kind == AttackKind.ADD_VOTES:
            return self.solve_control_add_votes(rule, election, p, inst.unregistered, inst.budget)
        if kind == AttackKind.DELETE_VOTES:
            return self.solve_control_delete_votes(rule, election, p, inst.budget)
        if kind == AttackKind.PARTITION_VOTES:
            return self.solve_control_partition_votes(rule, election, p, inst.ties)
        return self.solve_candidate_control(inst)

    def solve_destructive(self, inst: AttackInstance) -> AttackResult:
        """YES iff some other candidate can be made the winner with the same action budget."""

        if not inst.is_destructive:
            raise ValueError("solve_destructive expects a destructive instance.")
        for rival in inst.election.candidates:
            if rival.name == inst.target:
                continue
            result = self._solve_constructive(inst.retarget(rival.name))
            if result.is_yes:
                logger.info(f"Destructive {inst.kind.value}: {rival.name} can be made the winner")
                return AttackResult.yes(replace(result.witness, winner=rival.name))
        return AttackResult.no()

    def solve(self, inst: AttackInstance) -> AttackResult:
        if inst.mode == Mode.DESTRUCTIVE:
            return self.solve_destructive(inst)
        return self._solve_constructive(inst)


# module-level helpers

@lru_cache(maxsize=1)
def default_solver() -> AttackSolver:
    return AttackSolver()


def solve_manipulation(rule: Rule, election: Election, p: Candidate, t: int) -> AttackResult:
    return default_solver().solve_manipulation(rule, election, p, t)


def solve_bribery(rule: Rule, election: Election, p: Candidate, budget: int) -> AttackResult:
    return default_solver().solve_bribery(rule, election, p, budget)


def solve_control_add_votes(rule: Rule, election: Election, p: Candidate, unregistered: Profile, budget: int) -> AttackResult:
    return default_solver().solve_control_add_votes(rule, election, p, unregistered, budget)


def solve_control_delete_votes(rule: Rule, election: Election, p: Candidate, budget: int) -> AttackResult:
    return default_solver().solve_control_delete_votes(rule, election, p, budget)


def solve_control_partition_votes(rule: Rule, election: Election, p: Candidate, ties: TieModel) -> AttackResult:
    return default_solver().solve_control_partition_votes(rule, election, p, ties)


def solve_candidate_control(rule: Rule, election: Election, p: Candidate, variant: AttackKind, budget: int = 0,
                            spoilers: Sequence[str] = (), ties: Optional[TieModel] = None) -> AttackResult:
    inst = AttackInstance(variant, rule, election, p.name, budget=budget, spoilers=tuple(spoilers), ties=ties)
    return default_solver().solve_candidate_control(inst)


def solve_destructive(inst: AttackInstance) -> AttackResult:
    return default_solver().solve_destructive(inst)


def solve(inst: AttackInstance) -> AttackResult:
    return default_solver().solve(inst)
