import pavlovpp
from accessories import norm_file, verdict_jobs

store = pavlovpp.VerdictStore(norm_file('tests/db/autocommit.sqlite'), flag='n', autocommit=True)

# no close(): autocommit alone must get every verdict to disk
for p, pred, n in verdict_jobs():
    pavlovpp.check_stable(p, pred, n, store=store)
