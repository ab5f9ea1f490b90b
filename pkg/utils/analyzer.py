import pandas as pd
import logging
from typing import Any, Dict

from utils.election import BUCKLIN, RANKED_PAIRS, SCHULZE, Election, Rule
from utils import rules

logger = logging.getLogger(__name__)


class ElectionAnalyzer:

    # class to tabulate an election: ballots, head-to-head counts and rule scores

    def __init__(self, election: Election):

        self.election = election
        self.results = {}

    # ballot types with counts and shares

    def profile_table(self) -> pd.DataFrame:

        election = self.election
        rows = [{'ranking': election.render(vote), 'count': count} for vote, count in election.profile]
        df = pd.DataFrame(rows, columns=['ranking', 'count'])
        if df.empty:
            df['share'] = pd.Series(dtype=float)
            return df
        df['share'] = df['count'] / election.n
        return df.sort_values(['count', 'ranking'], ascending=[False, True]).reset_index(drop=True)

    # N(c, d): voters preferring row candidate c to column candidate d

    def pairwise_matrix(self) -> pd.DataFrame:

        counts = rules.pairwise_counts(self.election.profile, self.election.m)
        names = list(self.election.names)
        return pd.DataFrame(counts, index=names, columns=names)

    def score_table(self, rule: Rule) -> pd.DataFrame:

        try:
            scores = rules.rule_scores(rule, self.election)
            column = 'level' if rule.family == BUCKLIN else 'score'
            rows = [{'candidate': c.name, column: -s if rule.family == BUCKLIN else s, 'rank_key': s}
                    for c, s in scores.items()]
            df = pd.DataFrame(rows)
            df = df.sort_values('rank_key', ascending=False, kind='stable').drop(columns='rank_key')
            df[column] = df[column].map(str)
            logger.info(f"Score table computed for {rule.label}.")
            return df.reset_index(drop=True)
        except Exception as e:
            logger.error(f"Error computing the score table: {str(e)}")
            raise

    # one row per elimination round of a runoff rule

    def elimination_table(self, rule: Rule) -> pd.DataFrame:

        names = self.election.names
        rows = []
        for number, round_ in enumerate(rules.elimination_trace(rule, self.election), start=1):
            rows.append({
                'round': number,
                'survivors': ','.join(names[c] for c in sorted(round_.survivors)),
                'scores': ', '.join(f"{names[c]}={s}" for c, s in sorted(round_.scores.items())),
                'eliminated': ','.join(names[c] for c in sorted(round_.eliminated)),
            })
        return pd.DataFrame(rows, columns=['round', 'survivors', 'scores', 'eliminated'])

    def locked_pairs(self) -> pd.DataFrame:

        names = self.election.names
        counts = rules.pairwise_counts(self.election.profile, self.election.m)
        rows = [{'winner': names[a], 'loser': names[b], 'margin': counts[a][b] - counts[b][a]}
                for a, b in rules.ranked_pairs_locks(self.election)]
        return pd.DataFrame(rows, columns=['winner', 'loser', 'margin'])

    # strongest path strengths, '-' where there is no path

    def path_strengths(self) -> pd.DataFrame:

        names = list(self.election.names)
        strengths = rules.schulze_paths(self.election)
        table = [['' if a == b else ('-' if strengths[(a, b)] is None else str(strengths[(a, b)]))
                  for b in range(self.election.m)] for a in range(self.election.m)]
        return pd.DataFrame(table, index=names, columns=names)

    def summarize(self, rule: Rule) -> Dict[str, Any]:

        cowinners = sorted(rules.cowinners(rule, self.election))
        return {
            'rule': rule.label,
            'candidates': self.election.m,
            'voters': self.election.n,
            'vote_types': len(self.election.profile),
            'winner': rules.evaluate(rule, self.election).name,
            'cowinners': [c.name for c in cowinners],
        }

    # do full analysis

    def full_analysis(self, rule: Rule) -> Dict[str, Any]:

        try:
            logger.info(f"Analyzing election under {rule.label}.")
            self.results = {
                'profile': self.profile_table(),
                'pairwise': self.pairwise_matrix(),
                'summary_metrics': self.summarize(rule),
            }
            if rule.is_runoff:
                self.results['trace'] = self.elimination_table(rule)
            elif rule.family == RANKED_PAIRS:
                self.results['locks'] = self.locked_pairs()
            elif rule.family == SCHULZE:
                self.results['paths'] = self.path_strengths()
            else:
                self.results['scores'] = self.score_table(rule)
            return self.results

        except Exception as e:
            logger.error(f"Error in the full election analysis: {str(e)}")
            raise

    # get text summary

    def get_text_summary(self, rule: Rule) -> str:

        if not self.results or self.results['summary_metrics']['rule'] != rule.label:
            self.full_analysis(rule)

        metrics = self.results['summary_metrics']
        sections = [
            f"rule: {metrics['rule']}",
            f"candidates: {metrics['candidates']}",
            f"voters: {metrics['voters']}",
            f"vote types: {metrics['vote_types']}",
            f"winner: {metrics['winner']}",
            f"cowinners: {','.join(metrics['cowinners'])}",
            '',
            'profile:',
            self.results['profile'].to_string(index=False),
            '',
            'pairwise:',
            self.results['pairwise'].to_string(),
        ]
        for key in ('scores', 'trace', 'locks'):
            if key in self.results:
                sections += ['', f"{key}:", self.results[key].to_string(index=False)]
        if 'paths' in self.results:
            sections += ['', 'paths:', self.results['paths'].to_string()]
        return '\n'.join(sections) + '\n'


# aux function for direct use

def analyze_election(election: Election, rule: Rule) -> Dict[str, Any]:

    analyzer = ElectionAnalyzer(election)
    return analyzer.full_analysis(rule)
