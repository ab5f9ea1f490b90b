import os
import json
import logging
from datetime import datetime
from typing import Dict, List, Optional, Tuple

from utils.election import Election, Profile, Rule
from utils.instances import AttackInstance, AttackKind, AttackResult, AttackWitness

logger = logging.getLogger(__name__)

Line = Tuple[str, str]


def _profile_lines(key: str, profile: Profile, election: Election) -> List[Line]:
    if profile.is_empty():
        return [(key, '(none)')]
    return [(key, f"{count} x {election.render(vote)}") for vote, count in profile]


# one action per line

def witness_lines(kind: AttackKind, witness: AttackWitness, election: Election) -> List[Line]:
    lines: List[Line] = []
    if witness.ballots is not None:
        lines += _profile_lines('ballot', witness.ballots, election)
    if witness.reassignments is not None:
        if not witness.reassignments:
            lines.append(('bribe', '(none)'))
        for source, target, count in witness.reassignments:
            lines.append(('bribe', f"{count} x {election.render(source)} -> {election.render(target)}"))
    if witness.added is not None:
        lines += _profile_lines('add', witness.added, election)
    if witness.deleted is not None:
        lines += _profile_lines('delete', witness.deleted, election)
    if witness.parts is not None:
        lines += _profile_lines('first', witness.parts[0], election)
        lines += _profile_lines('second', witness.parts[1], election)
    if witness.candidates is not None:
        key = 'delete-candidate' if kind == AttackKind.DELETE_CANDIDATES else 'add-candidate'
        lines += [(key, name) for name in witness.candidates] or [(key, '(none)')]
    if witness.candidate_parts is not None:
        lines.append(('first-candidates', ','.join(witness.candidate_parts[0]) or '(none)'))
        lines.append(('second-candidates', ','.join(witness.candidate_parts[1]) or '(none)'))
    if witness.winner is not None:
        lines.append(('winner', witness.winner))
    return lines


def _render(fields: List[Tuple[str, object]], fmt: str) -> str:
    if fmt == 'json':
        document = {}
        for key, value in fields:
            document[key] = [{'action': k, 'value': v} for k, v in value] if key == 'witness' else value
        return json.dumps(document, indent=2) + '\n'

    lines = []
    for key, value in fields:
        if key == 'witness':
            lines.append('witness:')
            lines += [f"  {k}: {v}" for k, v in value]
        else:
            lines.append(f"{key}: {value}")
    return '\n'.join(lines) + '\n'


def format_result(command: str, inst: AttackInstance, result: AttackResult, elapsed_ms: Optional[int] = None,
                  engines: Optional[Dict[str, AttackResult]] = None, fmt: str = 'text') -> str:
    """Result document with stable keys: command, rule, target, mode, decision, witness, engines, elapsed_ms."""

    fields: List[Tuple[str, object]] = [
        ('command', command),
        ('kind', inst.kind.value + (f"-{inst.ties.value}" if inst.ties else '')),
        ('rule', inst.rule.label),
        ('target', inst.target),
        ('mode', inst.mode.value),
        ('decision', result.decision.value),
    ]
    if result.is_yes:
        fields.append(('witness', witness_lines(inst.kind, result.witness, inst.election)))
    if engines:
        decisions = {name: r.decision.value for name, r in engines.items()}
        fields.append(('engines', ', '.join(f"{name}={d}" for name, d in decisions.items())))
        fields.append(('match', 'yes' if len(set(decisions.values())) == 1 else 'no'))
    if elapsed_ms is not None:
        fields.append(('elapsed_ms', elapsed_ms))
    return _render(fields, fmt)


def format_winner(rule: Rule, election: Election, winner: str, cowinners: List[str],
                  elapsed_ms: Optional[int] = None, fmt: str = 'text') -> str:

    fields: List[Tuple[str, object]] = [
        ('command', 'winner'),
        ('rule', rule.label),
        ('winner', winner),
        ('cowinners', ','.join(cowinners)),
    ]
    if elapsed_ms is not None:
        fields.append(('elapsed_ms', elapsed_ms))
    return _render(fields, fmt)


# save a document in the output directory

def save_report(document: str, output_dir: str, command: str, fmt: str = 'text') -> str:

    try:
        os.makedirs(output_dir, exist_ok=True)
        extension = 'json' if fmt == 'json' else 'txt'
        path = os.path.join(output_dir, f"{command}_{datetime.now().strftime('%Y%m%d_%H%M%S')}.{extension}")
        with open(path, 'w', encoding='utf-8') as f:
            f.write(document)
        logger.info(f"Report saved to {path}")
        return path
    except Exception as e:
        logger.error(f"Error saving report: {str(e)}")
        raise
