"""Test-side reference implementations.

The reference solver below mirrors the production search but takes every
acyclicity decision on explicitly constructed graphs, so agreement with
`solve` exercises the production gate tables end to end.
"""

from __future__ import annotations

from mmcheck import derive, get_model, oota_check
from mmcheck.graphs import (
    WriteIndex,
    build_base_graphs,
    build_coherence_graphs,
    kahn_acyclic,
)


def solve_reference(h, spec, derived=None):
    """Subset search over explicit graphs; returns (consistent, memo)."""
    dm = derived if derived is not None else derive(h, spec)
    if spec.requires_oota and not oota_check(h):
        return False, {}
    g_loc, g_mm = build_base_graphs(h, dm)
    if not kahn_acyclic(g_loc)[0] or not kahn_acyclic(g_mm)[0]:
        return False, {}
    index = WriteIndex(h)
    memo = {0: index.k}

    def orderable(mask):
        cached = memo.get(mask)
        if cached is not None:
            return cached >= 0
        m = mask
        while m:
            bit = m & -m
            m ^= bit
            j = bit.bit_length() - 1
            rest = mask ^ bit
            gl, gm = build_coherence_graphs(h, dm, index, rest, index.ids[j])
            if kahn_acyclic(gl)[0] and kahn_acyclic(gm)[0] and orderable(rest):
                memo[mask] = j
                return True
        memo[mask] = -1
        return False

    return orderable(index.full_mask), memo
