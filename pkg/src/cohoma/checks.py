"""Comparisons of derivations and operators, recorded into reports."""
from __future__ import annotations

from .core import Derivation, Polynomial, apply
from .errors import TruncationExceeded
from .report import Report, Witness


def relation(report: Report, name: str, lhs: Derivation, rhs: Derivation | None = None,
             gens=None, max_witnesses: int = 3) -> bool:
    """Check lhs == rhs generator by generator (rhs None means zero).

    Generators where either side is undefined (beyond a jet truncation) are skipped.
    """
    alg = lhs.alg
    ids = range(len(alg.gens)) if gens is None else [alg.resolve(g) for g in gens]
    zero = alg.zero()
    ok = True
    nw = 0
    for gid in ids:
        if gid in lhs.undefined or (rhs is not None and gid in rhs.undefined):
            continue
        a = lhs.action.get(gid, zero)
        b = zero if rhs is None else rhs.action.get(gid, zero)
        if a != b:
            ok = False
            if nw < max_witnesses:
                report.witnesses.append(Witness(alg.gens[gid].label, str(a), str(b), name))
                nw += 1
    report.entries.append((name, ok))
    return ok


def operator_relation(report: Report, name: str, lhs, rhs, inputs, labels=None,
                      max_witnesses: int = 3) -> bool:
    """Check two linear operators (callables) agree on every polynomial in ``inputs``."""
    ok = True
    nw = 0
    for k, f in enumerate(inputs):
        try:
            a = lhs(f)
            b = rhs(f)
        except TruncationExceeded:
            continue
        if a != b:
            ok = False
            if nw < max_witnesses:
                lab = labels[k] if labels else str(f)
                report.witnesses.append(Witness(lab, str(a), str(b), name))
                nw += 1
    report.entries.append((name, ok))
    return ok


def nilpotent(report: Report, name: str, D: Derivation, gens=None) -> bool:
    """D(D(g)) == 0 on every generator where defined."""
    alg = D.alg
    ids = range(len(alg.gens)) if gens is None else [alg.resolve(g) for g in gens]
    ok = True
    nw = 0
    for gid in ids:
        if gid in D.undefined:
            continue
        try:
            r = apply(D, D.image(gid))
        except TruncationExceeded:
            continue
        if r:
            ok = False
            if nw < 3:
                report.witnesses.append(Witness(alg.gens[gid].label, str(r), "0", name))
                nw += 1
    report.entries.append((name, ok))
    return ok


def polys_equal(report: Report, name: str, lhs: Polynomial, rhs: Polynomial, generator="") -> bool:
    return report.equal(name, lhs, rhs, generator)
