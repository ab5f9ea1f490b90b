import os
import logging
from collections import Counter
from typing import Any, Dict, List, Optional, Tuple

from utils.election import Candidate, Election, Profile, TieBreak, Vote

logger = logging.getLogger(__name__)

FORBIDDEN_NAME_CHARS = set(',>:#')


class ElectionFormatError(ValueError):
    """Raised when an election document is malformed; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message}, line {line}")
        self.line = line


def _parse_names(raw: str, line: int) -> List[str]:
    names = [n.strip() for n in raw.split(',')]
    for name in names:
        if not name:
            raise ElectionFormatError("empty candidate name", line)
        if FORBIDDEN_NAME_CHARS & set(name):
            raise ElectionFormatError(f"invalid character in candidate name '{name}'", line)
    return names


def _parse_order(raw: str, separator: str, ids: Dict[str, int], line: int, what: str) -> Tuple[int, ...]:
    order = []
    for name in (n.strip() for n in raw.split(separator)):
        if name not in ids:
            raise ElectionFormatError(f"unknown candidate '{name}' in {what}", line)
        if ids[name] in order:
            raise ElectionFormatError(f"duplicate candidate in {what}", line)
        order.append(ids[name])
    if len(order) != len(ids):
        raise ElectionFormatError(f"missing candidate in {what}", line)
    return tuple(order)


# parse an election document

def parse_election(text: str) -> Election:
    names: Optional[List[str]] = None
    ids: Dict[str, int] = {}
    priority: Optional[Tuple[int, ...]] = None
    counts: Counter = Counter()

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(':')
        if not sep:
            raise ElectionFormatError("malformed line (expected 'key: value')", number)
        key = key.strip()
        if key == 'candidates':
            if names is not None:
                raise ElectionFormatError("candidates declared twice", number)
            names = _parse_names(value, number)
            if len(set(names)) != len(names):
                raise ElectionFormatError("duplicate candidate name", number)
            ids = {n: i for i, n in enumerate(names)}
        elif names is None:
            raise ElectionFormatError("candidates must be declared first", number)
        elif key == 'tiebreak':
            if priority is not None:
                raise ElectionFormatError("tiebreak declared twice", number)
            priority = _parse_order(value, ',', ids, number, 'tiebreak')
        elif key.isascii() and key.isdigit():
            ranking = _parse_order(value, '>', ids, number, 'ranking')
            counts[Vote(ranking)] += int(key)
        else:
            raise ElectionFormatError(f"malformed line (unknown key '{key}')", number)

    if names is None:
        raise ElectionFormatError("no candidates line", max(1, len(text.splitlines())))

    candidates = tuple(Candidate(i, n) for i, n in enumerate(names))
    tiebreak = TieBreak(priority) if priority is not None else TieBreak.default(len(names))
    return Election(candidates, Profile(counts), tiebreak)


# canonical document: candidates, tiebreak, then vote lines in lexicographic ranking order

def serialize_election(election: Election) -> str:
    lines = [
        'candidates: ' + ','.join(election.names),
        'tiebreak: ' + ','.join(election.candidates[c].name for c in election.tiebreak.priority),
    ]
    for vote, count in election.profile:
        lines.append(f"{count}: {election.render(vote)}")
    return '\n'.join(lines) + '\n'


def load_election(file_path: str) -> Election:

    try:
        # verify that file exists

        if not os.path.exists(file_path):
            raise FileNotFoundError(f"Election file not found: {file_path}")

        logger.info(f"Loading election from {file_path}")
        with open(file_path, 'r', encoding='utf-8') as f:
            election = parse_election(f.read())

        logger.info(f"Election loaded: {election.m} candidates, {election.n} votes, {len(election.profile)} vote types")
        return election

    except Exception as e:
        logger.error(f"Error loading election file {file_path}: {e}")
        raise


def validate_election(election: Election, required_candidates: Optional[List[str]] = None) -> Dict[str, Any]:

    validation_result = {
        'is_valid': True,
        'candidates': election.m,
        'voters': election.n,
        'vote_types': len(election.profile),
        'missing_candidates': [],
        'empty_profile': False,
    }

    # verify required candidates

    missing = [n for n in (required_candidates or []) if n not in election.names]
    if missing:
        validation_result['is_valid'] = False
        validation_result['missing_candidates'] = missing
        logger.error(f"Missing candidates: {missing}")

    # an empty profile is legal but degenerate

    if election.profile.is_empty():
        validation_result['empty_profile'] = True
        logger.warning("The election has no votes.")

    return validation_result


# main load function

def load_and_validate_election(file_path: str, required_candidates: Optional[List[str]] = None
                               ) -> Tuple[Optional[Election], Dict[str, Any]]:

    try:
        election = load_election(file_path)
        return election, validate_election(election, required_candidates)

    except Exception as e:
        logger.error(f"Error loading and validating election: {e}")
        return None, {'is_valid': False, 'error': str(e)}
