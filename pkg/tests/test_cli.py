import json

import pytest

from main import EXIT_ERROR, EXIT_NO, EXIT_REFUSED, EXIT_YES, run

ELECTION = "candidates: p,a\ntiebreak: p,a\n2: a>p\n"


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch, tmp_path):
    # no stray .env or attacks_config.env from the working tree
    monkeypatch.chdir(tmp_path)
    for name in ('ATTACKS_LOG_LEVEL', 'ATTACKS_ORACLE_MAX_STATES', 'ATTACKS_ILP_ENUM_VOLUME',
                 'ATTACKS_ILP_DUMP_DIR', 'ATTACKS_OUTPUT_DIR', 'ATTACKS_ENGINE'):
        monkeypatch.delenv(name, raising=False)


def test_winner(write_election, capsys):
    code = run(['winner', write_election(ELECTION), '--rule', 'plurality', '--no-timing'])
    out = capsys.readouterr().out
    assert code == EXIT_YES
    assert 'winner: a' in out.splitlines()
    assert 'cowinners: a' in out.splitlines()


def test_borda_winner(write_election, capsys):
    assert run(['winner', write_election("candidates: p,a,b\n2: a>b>p\n"), '--rule', 'borda', '--no-timing']) == EXIT_YES
    assert 'winner: a' in capsys.readouterr().out.splitlines()


def test_winner_details_adds_tables(write_election, capsys):
    assert run(['winner', write_election(ELECTION), '--rule', 'borda', '--details', '--no-timing']) == EXIT_YES
    out = capsys.readouterr().out
    assert 'pairwise:' in out and 'scores:' in out


@pytest.mark.parametrize('rule', ['borda', 'plurality'])
def test_manipulation_yes(rule, write_election, capsys):
    code = run(['manipulate', write_election(ELECTION), '--rule', rule, '--target', 'p', '--manipulators', '2', '--no-timing'])
    out = capsys.readouterr().out
    assert code == EXIT_YES
    assert 'decision: YES' in out
    assert '  ballot: 2 x p>a' in out.splitlines()


def test_bribery_without_budget_is_no(write_election, capsys):
    code = run(['bribe', write_election(ELECTION), '--rule', 'borda', '--target', 'p', '--budget', '0'])
    out = capsys.readouterr().out
    assert code == EXIT_NO
    assert 'decision: NO' in out
    assert 'witness:' not in out
    assert 'elapsed_ms: ' in out


def test_both_engines_report_agreement(write_election, capsys):
    code = run(['bribe', write_election(ELECTION), '--rule', 'plurality', '--target', 'p', '--budget', '1',
                '--engine', 'both', '--no-timing'])
    lines = capsys.readouterr().out.splitlines()
    assert code == EXIT_YES
    assert 'engines: main=YES, oracle=YES' in lines
    assert 'match: yes' in lines


def test_json_output(write_election, capsys):
    code = run(['manipulate', write_election(ELECTION), '--rule', 'borda', '--target', 'p', '--manipulators', '2',
                '--format', 'json', '--no-timing'])
    document = json.loads(capsys.readouterr().out)
    assert code == EXIT_YES
    assert document['decision'] == 'YES'
    assert document['witness'] == [{'action': 'ballot', 'value': '2 x p>a'}]
    assert 'elapsed_ms' not in document


def test_output_is_deterministic_without_timing(write_election, capsys):
    path = write_election("candidates: p,a,b\n2: a>b>p\n1: b>p>a\n1: p>a>b\n")
    argv = ['control', path, '--rule', 'stv', '--target', 'p', '--variant', 'partition-votes-tp', '--no-timing']
    first_code = run(argv)
    first = capsys.readouterr().out
    assert run(argv) == first_code
    assert capsys.readouterr().out == first


def test_add_votes_reads_the_unregistered_file(write_election, capsys):
    path = write_election(ELECTION)
    pool = write_election("candidates: a,p\n3: p>a\n", 'pool.txt')
    code = run(['control', path, '--rule', 'plurality', '--target', 'p', '--variant', 'add-votes', '--budget', '2',
                '--unregistered', pool, '--no-timing'])
    assert code == EXIT_YES
    assert '  add: 2 x p>a' in capsys.readouterr().out.splitlines()


def test_destructive_control(write_election, capsys):
    path = write_election("candidates: p,a,b\ntiebreak: p,a,b\n2: a>p>b\n1: p>a>b\n2: b>p>a\n")
    code = run(['control', path, '--rule', 'plurality', '--target', 'a', '--variant', 'delete-cands', '--budget', '1',
                '--destructive', '--no-timing'])
    lines = capsys.readouterr().out.splitlines()
    assert code == EXIT_YES
    assert 'mode: destructive' in lines
    assert any(line.startswith('  winner: ') for line in lines)


@pytest.mark.parametrize('argv', [
    ['winner', 'missing.txt', '--rule', 'borda'],
    ['winner', '{election}', '--rule', 'young'],
    ['manipulate', '{election}', '--rule', 'borda', '--target', 'z', '--manipulators', '1'],
    ['bribe', '{election}', '--rule', 'borda', '--target', 'p', '--budget', '-1'],
    ['control', '{election}', '--rule', 'borda', '--target', 'p', '--variant', 'add-votes'],
    ['control', '{election}', '--rule', 'borda', '--target', 'p', '--variant', 'delete-cands', '--spoilers', 'a'],
    ['manipulate', '{election}', '--rule', 'borda', '--target', 'p'],
])
def test_usage_errors_exit_with_two(argv, write_election, capsys):
    path = write_election(ELECTION)
    assert run([arg.format(election=path) for arg in argv]) == EXIT_ERROR


def test_malformed_election_reports_the_line(write_election, capsys):
    assert run(['winner', write_election("candidates: p,a\n1: a>z\n"), '--rule', 'borda']) == EXIT_ERROR
    assert 'line 2' in capsys.readouterr().err


def test_oracle_refusal(write_election, monkeypatch, capsys):
    monkeypatch.setenv('ATTACKS_ORACLE_MAX_STATES', '1')
    code = run(['manipulate', write_election(ELECTION), '--rule', 'borda', '--target', 'p', '--manipulators', '2',
                '--engine', 'oracle'])
    assert code == EXIT_REFUSED
    assert 'refused: 3 states exceed' in capsys.readouterr().err


def test_invalid_configuration(write_election, monkeypatch, capsys):
    monkeypatch.setenv('ATTACKS_ENGINE', 'fast')
    assert run(['winner', write_election(ELECTION), '--rule', 'borda']) == EXIT_ERROR


def test_save_writes_the_document(write_election, monkeypatch, tmp_path, capsys):
    monkeypatch.setenv('ATTACKS_OUTPUT_DIR', str(tmp_path / 'reports'))
    assert run(['winner', write_election(ELECTION), '--rule', 'borda', '--no-timing', '--save']) == EXIT_YES
    (saved,) = list((tmp_path / 'reports').glob('winner_*.txt'))
    assert saved.read_text(encoding='utf-8') == capsys.readouterr().out
