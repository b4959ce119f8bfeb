#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# This code is distributed under the terms and conditions
# from the Apache License, Version 2.0
#
# http://opensource.org/licenses/apache2.0.php

import logging
import sqlite3
import sys
import threading
import traceback
import weakref
from queue import Queue

_CLOSE = '--close--'
_COMMIT = '--commit--'
_DONE = '--done--'


def _deliver(reply_ref, item):
    """Put `item` on the caller's reply queue; False once the caller has dropped it."""
    if reply_ref is None:
        return True
    reply = reply_ref()
    if reply is None:
        return False
    reply.put(item)
    return True


class StoreThread(threading.Thread):
    """
    Owns the single sqlite3 connection of a VerdictStore.

    Statements from any thread are queued and executed here in arrival order.
    A failing statement does not stop the thread: the error is logged together
    with the caller's stack and re-raised on that caller's next request.
    """

    def __init__(self, filename, autocommit, journal_mode, timeout=5, outer_stack=True):
        super().__init__(daemon=True)
        self.filename = filename
        self.autocommit = autocommit
        self.journal_mode = journal_mode
        self.timeout = timeout
        self.requests = Queue()
        self.outer_stack = outer_stack
        self.log = logging.getLogger('pavlovpp.StoreThread')
        self.failure = None
        self._lock = threading.Lock()
        self._ready = threading.Event()
        self.start()
        self._ready.wait()
        self.raise_pending()

    def _connect(self):
        try:
            conn = sqlite3.connect(self.filename, timeout=self.timeout, check_same_thread=False,
                                   isolation_level=None if self.autocommit else '')
            conn.execute('PRAGMA journal_mode = %s' % self.journal_mode)
            conn.execute('PRAGMA synchronous = OFF')
        except Exception:
            self.log.exception('cannot open verdict store %s', self.filename)
            self.failure = sys.exc_info()
            return None
        return conn

    def _report(self, caller_stack):
        e_type, e_value, _ = self.failure
        self.log.error('statement failed: %s', ''.join(traceback.format_exception_only(e_type, e_value)).strip())
        if caller_stack:
            self.log.error('issued from:\n%s', ''.join(traceback.format_list(caller_stack)))
        else:
            self.log.error('caller stack not recorded (outer_stack=False)')
        self.log.error('the error will be re-raised at the next call')

    def run(self):
        conn = self._connect()
        self._ready.set()
        if conn is None:
            return

        reply_ref = None
        while True:
            statement, params, reply_ref, caller_stack = self.requests.get()
            if statement == _CLOSE:
                break
            if statement == _COMMIT:
                conn.commit()
                _deliver(reply_ref, _DONE)
                continue
            try:
                cursor = conn.execute(statement, params)
            except Exception:
                with self._lock:
                    self.failure = sys.exc_info()
                self._report(caller_stack)
                cursor = ()
            for row in cursor:
                if not _deliver(reply_ref, row):
                    break
            _deliver(reply_ref, _DONE)
            if self.autocommit:
                conn.commit()

        self.log.debug('closing %s', self.filename)
        conn.close()
        _deliver(reply_ref, _DONE)

    def raise_pending(self):
        with self._lock:
            failure, self.failure = self.failure, None
        if failure:
            raise failure[1].with_traceback(failure[2])

    def execute(self, statement, params=(), reply=None):
        self.raise_pending()
        caller_stack = traceback.extract_stack()[:-1] if self.outer_stack else None
        reply_ref = weakref.ref(reply) if reply is not None else None
        self.requests.put((statement, tuple(params), reply_ref, caller_stack))

    def executemany(self, statement, rows):
        for params in rows:
            self.execute(statement, params)
        self.raise_pending()

    def select(self, statement, params=()):
        reply = Queue()
        self.execute(statement, params, reply)
        while True:
            row = reply.get()
            self.raise_pending()
            if row == _DONE:
                return
            yield row

    def select_one(self, statement, params=()):
        return next(self.select(statement, params), None)

    def commit(self, blocking=True):
        if blocking:
            self.select_one(_COMMIT)
        else:
            self.execute(_COMMIT)

    def close(self, force=False):
        if force:
            self.requests.put((_CLOSE, (), None, None))
        else:
            self.select_one(_CLOSE)
            self.join()
