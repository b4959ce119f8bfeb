"""Accessories for test cases."""
import os

import pavlovpp


def norm_file(fname):
    """Absolute path for a scratch file under the repository, creating its directory if necessary"""
    fname = os.path.abspath(fname)
    os.makedirs(os.path.dirname(fname), exist_ok=True)
    return fname


def catalog(name):
    """Fresh catalog entry by name."""
    return pavlovpp.library.get(name)


def verdict_jobs():
    """(protocol, predicate, n) triples whose verdicts the autocommit run caches."""
    jobs = []
    for name in ('or', 'threshold2'):
        artifact = catalog(name)
        jobs.extend((artifact.protocol, artifact.predicate, n) for n in range(2, 9))
    p = catalog('threshold2').protocol
    three = pavlovpp.parse_predicate('count(sigma) >= 3')
    jobs.extend((p, three, n) for n in range(2, 6))
    return jobs
