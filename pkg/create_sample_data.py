import os
import random
from collections import Counter
from typing import List

from utils.data_loader import serialize_election
from utils.election import Candidate, Election, Profile, TieBreak, all_votes


def _random_election(rng: random.Random, names: List[str], voters: int) -> Election:
    orders = all_votes(len(names))
    counts = Counter(rng.choice(orders) for _ in range(voters))
    candidates = tuple(Candidate(i, n) for i, n in enumerate(names))
    priority = list(range(len(names)))
    rng.shuffle(priority)
    return Election(candidates, Profile(counts), TieBreak(tuple(priority)))


def create_sample_data(directory: str = 'data', seed: int = 42) -> List[str]:

    # init config
    rng = random.Random(seed)
    os.makedirs(directory, exist_ok=True)
    paths = []

    # a registered electorate over p, a, b
    election = _random_election(rng, ['p', 'a', 'b'], 9)
    # an unregistered pool over the same candidates, for adding votes
    pool = _random_election(rng, ['p', 'a', 'b'], 5)
    # an election that also ranks two spoiler candidates d and e, for adding candidates
    spoilers = _random_election(rng, ['p', 'a', 'b', 'd', 'e'], 12)

    # the small example from the command-line help: a plurality race p can win with two manipulators
    manipulable = Election.from_rankings(['p', 'a'], [(2, 'a>p')], tiebreak=['p', 'a'])

    for name, doc in (('election.txt', election), ('unregistered.txt', pool),
                      ('spoilers.txt', spoilers), ('manipulable.txt', manipulable)):
        path = os.path.join(directory, name)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(serialize_election(doc))
        paths.append(path)
        print(f"File '{name}' created in '{directory}': {doc.m} candidates, {doc.n} votes")

    return paths


if __name__ == "__main__":
    create_sample_data()
