"""Memory model definitions and per-history relation derivation.

A model is a pair of derivation rules: which part of program order the
memory is obliged to keep, and which reads-from edges are globally
visible.  The four supported models:

  sc    keeps full program order and full reads-from.
  tso   drops write-to-read program-order pairs; only cross-thread
        reads-from is visible (store buffering with early reads).
  pso   additionally drops write-to-write pairs (a buffer per variable).
  rmo   keeps only the explicit dependency edges, permits load-load
        hazards, and requires the dependency/reads-from cycle test.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import (
    InitialReadVisibilityWarning,
    InvalidDpError,
    UnknownModelError,
)
from .events import History, Relation, po_loc
from .graphs import EventGraph, find_cycle, kahn_acyclic


@dataclass(frozen=True)
class ModelSpec:
    """A memory model name plus its auxiliary-check flags."""

    name: str
    allows_llh: bool
    requires_oota: bool


MODELS: dict[str, ModelSpec] = {
    "sc": ModelSpec("sc", allows_llh=False, requires_oota=False),
    "tso": ModelSpec("tso", allows_llh=False, requires_oota=False),
    "pso": ModelSpec("pso", allows_llh=False, requires_oota=False),
    "rmo": ModelSpec("rmo", allows_llh=True, requires_oota=True),
}


def get_model(name: str) -> ModelSpec:
    """Look up a model by name, case-insensitively."""
    try:
        return MODELS[name.lower()]
    except KeyError:
        raise UnknownModelError(
            f"unknown model {name!r}; expected one of {', '.join(MODELS)}"
        ) from None


@dataclass(frozen=True)
class DerivedModel:
    """The relations a model actually exposes for one history."""

    po_mm: Relation
    rf_mm: Relation
    po_loc_effective: Relation


def rf_external(h: History) -> Relation:
    """Reads-from restricted to pairs unrelated by program order.

    Same-thread pairs vanish, and so do pairs sourced by initial writes,
    because initial writes precede everything in program order.
    """
    po = h.po.pairs
    return Relation(
        (w, r)
        for w, r in h.rf.pairs
        if (w, r) not in po and (r, w) not in po
    )


def derive(h: History, spec: ModelSpec) -> DerivedModel:
    """Compute the preserved program order and visible reads-from.

    Pure: equal inputs give identical relations.  For rmo the dependency
    relation must be read-sourced and lie inside program order; histories
    built by this package guarantee that, but it is re-checked here.
    """
    events = h.events
    if spec.name == "sc":
        po_mm, rf_mm = h.po, h.rf
    elif spec.name == "tso":
        po_mm = Relation(
            (a, b)
            for a, b in h.po.pairs
            if not (events[a].is_write and events[b].is_read)
        )
        rf_mm = rf_external(h)
    elif spec.name == "pso":
        po_mm = Relation(
            (a, b) for a, b in h.po.pairs if not events[a].is_write
        )
        rf_mm = rf_external(h)
    elif spec.name == "rmo":
        for a, b in h.dp.pairs:
            if not events[a].is_read or (a, b) not in h.po:
                raise InvalidDpError(
                    f"dp edge {h.ref(a)} -> {h.ref(b)} is not a read-sourced "
                    "program-order edge"
                )
        po_mm = h.dp
        rf_mm = rf_external(h)
    else:  # pragma: no cover - MODELS is closed
        raise UnknownModelError(spec.name)

    if spec.name != "sc":
        if any(events[w].is_init and (w, r) not in rf_mm.pairs
               for w, r in h.rf.pairs):
            warnings.warn(
                "initial writes source reads; those edges are hidden from "
                "the relaxed model's visible reads-from",
                InitialReadVisibilityWarning,
                stacklevel=2,
            )

    return DerivedModel(
        po_mm=po_mm,
        rf_mm=rf_mm,
        po_loc_effective=po_loc(h, llh=spec.allows_llh),
    )


def oota_check(h: History) -> bool:
    """Whether the dependency/reads-from union is acyclic.

    A cycle would mean some value justifies itself through a loop of
    dependencies and reads; models with explicit dependencies reject such
    histories outright.
    """
    return oota_cycle(h) is None


def oota_cycle(h: History) -> list[int] | None:
    """Like :func:`oota_check` but returns one offending cycle, if any."""
    g = EventGraph(h.n)
    g.add_pairs(h.dp.pairs)
    g.add_pairs(h.rf.pairs)
    acyclic, _ = kahn_acyclic(g)
    if acyclic:
        return None
    return find_cycle(g)
