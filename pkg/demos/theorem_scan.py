"""Hypothesis checking and a family scan on I8.

For a big ambient lattice (here Z^8) and a small target, local
representability everywhere plus an isotropy condition at an auxiliary
prime q is expected to force a global representation once the target's
minimum is large enough.  `check` evaluates the hypotheses for a single
pair; `scan` sweeps a family of binary targets diag(a, b), flags any
locally representable target missed by some class of the genus, and
reports the empirical constant (0 when there are no exceptions).
"""

import json
import time

from latrep import GramMatrix
from latrep.reports import check_theorem_hypotheses, report_emit, scan_family

def main():
    S = GramMatrix.identity(8)

    print("single pair: S = I8, T = diag(3, 5), q = 3, j = 1, c = 1, C = 0")
    report = check_theorem_hypotheses(S, GramMatrix.diagonal([3, 5]),
                                      q=3, j=1, c=1, C=0)
    blob = json.loads(report_emit(report, "json"))
    for key in ("rank_check", "condition_i_ok", "condition_ii_ok",
                "condition_iii_ok", "globally_represented"):
        print("  %-22s %s" % (key, blob[key]))
    print()

    print("family scan: diag(a, b), 1 <= a <= b <= 12, against the genus of I8")
    t0 = time.time()
    result = scan_family(S, "diag2:12", q=3, j=1, c=1, neighbor_prime=3)
    locally_ok = sum(1 for r in result.rows if r.local_ok)
    print("  %d targets, %d pass all local hypotheses, %d exceptions (%.1fs)"
          % (len(result.rows), locally_ok, len(result.exceptions),
             time.time() - t0))
    print("  empirical constant:", result.empirical_C)
    print()
    print("rows failing a hypothesis (condition (ii) or a local obstruction):")
    for r in result.rows:
        if not r.local_ok:
            print("  diag%s  det %d" % (r.target, r.det))


if __name__ == "__main__":
    main()
