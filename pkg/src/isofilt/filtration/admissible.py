"""Weak admissibility of one-step filtrations.

A filtration F over L is admissible for D when dim(N_L cap F) is at most the
slope sum of N for every sub-phi-module N, with equality at N = D.  Exact
mode enumerates all submodules (complete for multiplicity-free D at the
working level); sampled mode adds pseudo-random submodules and can only err
by accepting, never by rejecting: an inadmissible verdict always carries a
violating N as a re-checkable certificate.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import PrecisionError
from ..padic import linalg as la
from ..isocrystal.module import PhiModule
from ..isocrystal.submodules import submodules
from .galois import lift_matrix


def t_H(F_cols_L, N_cols_K, ext, guard: int = la.DEFAULT_GUARD) -> int:
    """dim(N_L cap F), certified."""
    if not (N_cols_K and N_cols_K[0]):
        return 0
    if not (F_cols_L and F_cols_L[0]):
        return 0
    NL = lift_matrix(ext, N_cols_K)
    return la.intersection_dim(NL, F_cols_L, guard)


class AdmissibilityReport:
    def __init__(self, verdict, entries, mode, samples, violation=None,
                 equality_at_top=None):
        self.verdict = verdict
        self.entries = entries        # [(dim N, t_H, t_N bound)]
        self.mode = mode
        self.samples = samples
        self.violation = violation    # offending N basis columns, if any
        self.equality_at_top = equality_at_top

    def as_dict(self):
        return {
            "verdict": "admissible" if self.verdict else "inadmissible",
            "mode": self.mode,
            "samples": self.samples,
            "equality_at_top": self.equality_at_top,
            "ledger": [{"dim_N": d, "t_H": th, "t_N": str(tn)}
                       for d, th, tn in self.entries],
            "violation_dim": (len(self.violation[0])
                              if self.violation and self.violation[0] else None),
        }


def is_admissible(D: PhiModule, F_cols_L, ext, mode: str = "exact",
                  seed: int = 0, budget: int = 200,
                  guard: int = la.DEFAULT_GUARD) -> AdmissibilityReport:
    """Check the slope bound over all (exact) or many (sampled) submodules.

    Sampled mode is one-sidedly sound: 'inadmissible' verdicts carry an
    explicit violating submodule; 'admissible' verdicts are complete only
    over the enumerated family.
    """
    subs = submodules(D, mode, budget=budget, seed=seed, guard=guard)
    entries = []
    dimF = len(F_cols_L[0]) if F_cols_L and F_cols_L[0] else 0
    violation = None
    verdict = True
    equality_at_top = None
    for N in subs.subspaces:
        dN = len(N[0]) if N and N[0] else 0
        if dN == 0:
            entries.append((0, 0, Fraction(0)))
            continue
        if dN == D.n:
            bound = D.t_N(guard)
            th = dimF
        else:
            sub = D.submodule(N, guard)
            bound = sub.t_N(guard)
            th = t_H(F_cols_L, N, ext, guard)
        entries.append((dN, th, bound))
        if th > bound:
            verdict = False
            if violation is None:
                violation = N
        if dN == D.n:
            equality_at_top = (Fraction(th) == bound)
            if not equality_at_top:
                verdict = False
                if violation is None:
                    violation = N
    return AdmissibilityReport(verdict, entries, subs.mode,
                               len(subs.subspaces), violation, equality_at_top)


def verify_violation(D: PhiModule, F_cols_L, ext, N_cols,
                     guard: int = la.DEFAULT_GUARD) -> bool:
    """Independently re-check a claimed violating submodule."""
    if not D.is_stable(N_cols, guard):
        return False
    bound = D.submodule(N_cols, guard).t_N(guard) if len(N_cols[0]) < D.n \
        else D.t_N(guard)
    return t_H(F_cols_L, N_cols, ext, guard) > bound
