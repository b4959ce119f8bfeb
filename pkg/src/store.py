#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# This code is distributed under the terms and conditions
# from the Apache License, Version 2.0
#
# http://opensource.org/licenses/apache2.0.php

"""
Persistent cache of stable-computation verdicts, backed by sqlite3::

>>> with VerdictStore('verdicts.sqlite', autocommit=True) as store:
...     check_stable(protocol, predicate, 6, store=store)

Keys are text, values JSON objects. Without autocommit, call `store.commit()`
before closing or the new verdicts are lost.
"""

import hashlib
import json
import logging
import os
import sqlite3
import tempfile
from collections.abc import MutableMapping
from typing import Dict

from .core import Protocol
from .errors import PavlovError
from .storethread import StoreThread

logger = logging.getLogger(__name__)

VALID_FLAGS = ('c', 'r', 'w', 'n')


def encode(obj):
    return json.dumps(obj, sort_keys=True)


def decode(text):
    return json.loads(text)


def canonical_text(p: Protocol) -> str:
    """Dressing plus effective relation; identity-only pairs are omitted."""
    lines = ['states %s' % ' '.join(p.state_names),
             'inputs %s' % ' '.join('%s:%d' % (s, q) for s, q in zip(p.symbol_names, p.input_map)),
             'outputs %s' % ''.join(str(b) for b in p.output_map)]
    for (q1, q2), out in sorted(p.effective.items()):
        if out != frozenset([(q1, q2)]):
            lines.append('%d %d -> %s' % (q1, q2, ' '.join('%d,%d' % pair for pair in sorted(out))))
    return '\n'.join(lines)


def protocol_fingerprint(p: Protocol) -> str:
    return hashlib.sha1(canonical_text(p).encode('utf8')).hexdigest()


def verdict_key(p: Protocol, pred, n: int) -> str:
    return '%s|%s|%d' % (protocol_fingerprint(p), pred.describe(), n)


class VerdictStore(MutableMapping):
    """
    Dict-like verdict cache in one sqlite table.

    `flag` is 'c' (open or create), 'r' (read-only), 'w' (open and empty the
    table) or 'n' (start from a new file). With `filename=None` a temporary
    file is used and removed on close.
    """

    def __init__(self, filename=None, tablename='verdicts', flag='c', autocommit=False,
                 journal_mode='DELETE', timeout=5, outer_stack=True):
        self.in_temp = filename is None
        if self.in_temp:
            fd, filename = tempfile.mkstemp(prefix='pavlovpp', suffix='.sqlite')
            os.close(fd)
        if flag not in VALID_FLAGS:
            raise PavlovError('unrecognized flag %r, expected one of %s' % (flag, ', '.join(VALID_FLAGS)))
        self.flag = flag

        if flag == 'n' and os.path.exists(filename):
            os.remove(filename)
        dirname = os.path.dirname(filename)
        if dirname and not os.path.isdir(dirname):
            raise PavlovError('directory does not exist: %s' % dirname)

        self.filename = filename
        self.tablename = tablename.replace('"', '""')
        self.autocommit = autocommit
        self.conn = StoreThread(filename, autocommit, journal_mode, timeout, outer_stack)

        if flag == 'r':
            if tablename not in self.get_tablenames(filename):
                self.close()
                raise PavlovError('refusing to create table %r in read-only mode' % tablename)
        else:
            self.conn.execute('CREATE TABLE IF NOT EXISTS "%s" '
                              '(key TEXT PRIMARY KEY, verdict TEXT, value TEXT)' % self.tablename)
            self.conn.commit()
        if flag == 'w':
            self.clear()
        logger.debug('opened %s (flag=%s)', self, flag)

    def __str__(self):
        return 'VerdictStore %s' % self.filename

    def __repr__(self):
        return '<%s table=%s flag=%s>' % (self, self.tablename, self.flag)

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()

    @staticmethod
    def get_tablenames(filename):
        if not os.path.isfile(filename):
            raise IOError('file %s does not exist' % filename)
        with sqlite3.connect(filename) as conn:
            rows = conn.execute("SELECT name FROM sqlite_master WHERE type='table'").fetchall()
        return [row[0] for row in rows]

    def _writable(self, action):
        if self.flag == 'r':
            raise PavlovError('refusing to %s a read-only VerdictStore' % action)
        if self.conn is None:
            raise PavlovError('%s is closed' % self)

    def __len__(self):
        return self.conn.select_one('SELECT COUNT(*) FROM "%s"' % self.tablename)[0]

    def __iter__(self):
        for row in self.conn.select('SELECT key FROM "%s" ORDER BY rowid' % self.tablename):
            yield row[0]

    def __contains__(self, key):
        return self.conn.select_one('SELECT 1 FROM "%s" WHERE key = ?' % self.tablename, (key,)) is not None

    def __getitem__(self, key):
        row = self.conn.select_one('SELECT value FROM "%s" WHERE key = ?' % self.tablename, (key,))
        if row is None:
            raise KeyError(key)
        return decode(row[0])

    def __setitem__(self, key, value):
        self._writable('write to')
        self.conn.execute('REPLACE INTO "%s" (key, verdict, value) VALUES (?, ?, ?)' % self.tablename,
                          (key, value.get('verdict'), encode(value)))
        if self.autocommit:
            self.commit()

    def __delitem__(self, key):
        self._writable('delete from')
        if key not in self:
            raise KeyError(key)
        self.conn.execute('DELETE FROM "%s" WHERE key = ?' % self.tablename, (key,))
        if self.autocommit:
            self.commit()

    def update(self, items=(), **kwds):
        self._writable('update')
        if hasattr(items, 'items'):
            items = items.items()
        rows = [(k, v.get('verdict'), encode(v)) for k, v in list(items) + list(kwds.items())]
        self.conn.executemany('REPLACE INTO "%s" (key, verdict, value) VALUES (?, ?, ?)' % self.tablename, rows)
        if self.autocommit:
            self.commit()

    def clear(self):
        self._writable('clear')
        self.conn.commit()
        self.conn.execute('DELETE FROM "%s"' % self.tablename)
        self.conn.commit()

    def summary(self) -> Dict[str, int]:
        """Number of stored verdicts per verdict name."""
        rows = self.conn.select('SELECT verdict, COUNT(*) FROM "%s" GROUP BY verdict' % self.tablename)
        return {verdict: count for verdict, count in rows}

    def commit(self, blocking=True):
        if self.conn is not None:
            self.conn.commit(blocking)

    def close(self, force=False):
        if getattr(self, 'conn', None) is not None:
            if self.autocommit and not force:
                self.conn.commit(blocking=True)
            self.conn.close(force=force)
            self.conn = None
        if getattr(self, 'in_temp', False):
            try:
                os.remove(self.filename)
            except OSError:
                pass

    def terminate(self):
        """Close and delete the underlying file."""
        if self.flag == 'r':
            raise PavlovError('refusing to terminate a read-only VerdictStore')
        self.close()
        if self.filename != ':memory:' and os.path.isfile(self.filename):
            os.remove(self.filename)

    def __del__(self):
        try:
            self.close(force=True)
        except Exception:
            pass
