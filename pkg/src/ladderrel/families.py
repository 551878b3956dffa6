"""Recursive graph families: per-cell parameters, boundary conventions,
uniform constructors, JSON (de)serialization, and expansion into explicit
node/edge lists for the enumeration oracles.

Families
--------
K4_LADDER       two-terminal ladder of complete K4 cells (5x5 transfer matrix)
K3_CYLINDER     two-terminal width-3 cylinder; the ``f_zero`` variant removes
                the S-U chord in every level (13x13 transfer matrix either way)
K4_ALL_TERMINAL all-terminal reliability of the K4 ladder (2x2 transfer matrix)

Boundary conventions (cell 0): the K4 ladder sets a0=1, c0=d0=e0=0 and keeps
b0; the K3 cylinder sets a0=1, c0=e0=0 and keeps the level-0 triangle b0, d0,
f0 (with f0=0 in the f_zero variant -- this is pinned by the oracle-vs-matrix
equality tests, see tests/test_transfer.py).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .rings import Q, format_rational, rational

K4_LADDER = "k4-ladder"
K3_CYLINDER_F0 = "k3-cylinder-f0"
K3_CYLINDER_F = "k3-cylinder-f"
K4_ALL_TERMINAL = "k4-all-terminal"

FAMILIES = (K4_LADDER, K3_CYLINDER_F0, K3_CYLINDER_F, K4_ALL_TERMINAL)

_K4_EDGES = ("a", "b", "c", "d", "e")
_K3_EDGES = ("a", "b", "c", "d", "e", "f")
_K4_NODES = ("S", "T")
_K3_NODES = ("S", "T", "U")


class FamilyError(ValueError):
    """Malformed family spec (bad family name, destination, or cell count)."""


@dataclass(frozen=True)
class CellParams:
    """Edge and node reliabilities of one elementary cell.

    Entries may be exact rationals or ring elements (e.g. polynomials in p)
    when the transfer product is evaluated symbolically.  ``f`` and ``U`` are
    None for K4 families.
    """

    a: object
    b: object
    c: object
    d: object
    e: object
    S: object
    T: object
    f: object = None
    U: object = None

    def edge_names(self) -> tuple[str, ...]:
        return _K3_EDGES if self.f is not None or self.U is not None else _K4_EDGES

    def get(self, name: str):
        return getattr(self, name)


@dataclass(frozen=True)
class FamilySpec:
    """A fully parameterized member of one of the recursive families."""

    family: str
    n: int
    cells: tuple[CellParams, ...]
    destination: str | None = None  # "S" | "T" | "U"; None for all-terminal

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise FamilyError(f"unknown family {self.family!r}")
        if self.n < 0:
            raise FamilyError("cell count must be >= 0")
        if len(self.cells) != self.n + 1:
            raise FamilyError(f"expected {self.n + 1} cells, got {len(self.cells)}")
        if self.family == K4_ALL_TERMINAL:
            if self.destination is not None:
                raise FamilyError("all-terminal spec takes no destination")
        else:
            allowed = _K3_NODES if self.family.startswith("k3") else _K4_NODES
            if self.destination not in allowed:
                raise FamilyError(
                    f"destination must be one of {allowed} for {self.family}"
                )

    @property
    def is_k3(self) -> bool:
        return self.family in (K3_CYLINDER_F0, K3_CYLINDER_F)

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        cells = []
        for c in self.cells:
            d = {}
            for name in ("a", "b", "c", "d", "e", "f"):
                v = getattr(c, name)
                if v is not None or name != "f":
                    if name == "f" and v is None:
                        continue
                    d[name] = format_rational(v)
            for name in ("S", "T", "U"):
                v = getattr(c, name)
                if v is None and name == "U":
                    continue
                d[name] = format_rational(v)
            cells.append(d)
        out = {"family": self.family, "n": self.n, "cells": cells}
        if self.destination is not None:
            out["destination"] = self.destination
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json_dict(data: dict) -> "FamilySpec":
        cells = []
        for d in data["cells"]:
            kw = {k: rational(v) for k, v in d.items()}
            for name in ("a", "b", "c", "d", "e", "S", "T"):
                if name not in kw:
                    raise FamilyError(f"cell missing field {name!r}")
            cells.append(CellParams(**kw))
        return FamilySpec(
            family=data["family"],
            n=int(data["n"]),
            cells=tuple(cells),
            destination=data.get("destination"),
        )

    @staticmethod
    def from_json(text: str) -> "FamilySpec":
        return FamilySpec.from_json_dict(json.loads(text))


def boundary_cell(family: str, cell: CellParams) -> CellParams:
    """Apply the cell-0 boundary convention to the given parameters."""
    if family in (K4_LADDER, K4_ALL_TERMINAL):
        return CellParams(a=Q(1), b=cell.b, c=Q(0), d=Q(0), e=Q(0), S=cell.S, T=cell.T)
    return CellParams(
        a=Q(1), b=cell.b, c=Q(0), d=cell.d, e=Q(0), f=cell.f,
        S=cell.S, T=cell.T, U=cell.U,
    )


def uniform_spec(family: str, n: int, p, rho, destination: str | None = None) -> FamilySpec:
    """All cell-i (i >= 1) edges = p and nodes = rho; boundary cell per the
    family convention, with b0 = p (K4) / b0 = d0 = p (K3) and f0 = p or 0
    depending on the K3 variant."""
    if n < 0:
        raise FamilyError("cell count must be >= 0")
    p = rational(p)
    rho = rational(rho) if rho is not None else Q(1)
    if family in (K4_LADDER, K4_ALL_TERMINAL):
        inner = CellParams(a=p, b=p, c=p, d=p, e=p, S=rho, T=rho)
        cell0 = CellParams(a=Q(1), b=p, c=Q(0), d=Q(0), e=Q(0), S=rho, T=rho)
    elif family in (K3_CYLINDER_F0, K3_CYLINDER_F):
        f_inner = Q(0) if family == K3_CYLINDER_F0 else p
        # f0 = 0 in the f_zero variant: pinned by the z^0 term of the printed
        # generating function (p^2 = b0*d0 for S->U with perfect nodes).
        f0 = Q(0) if family == K3_CYLINDER_F0 else p
        inner = CellParams(a=p, b=p, c=p, d=p, e=p, f=f_inner, S=rho, T=rho, U=rho)
        cell0 = CellParams(a=Q(1), b=p, c=Q(0), d=p, e=Q(0), f=f0, S=rho, T=rho, U=rho)
    else:
        raise FamilyError(f"unknown family {family!r}")
    cells = (cell0,) + (inner,) * n
    if family == K4_ALL_TERMINAL:
        return FamilySpec(family=family, n=n, cells=cells)
    return FamilySpec(family=family, n=n, cells=cells, destination=destination or "S")


# -- explicit graphs ---------------------------------------------------------


@dataclass(frozen=True)
class ExplicitGraph:
    """Simple undirected graph with per-node and per-edge reliabilities."""

    nodes: tuple[tuple[str, object], ...]       # (id, reliability)
    edges: tuple[tuple[str, str, object], ...]  # (endpoint, endpoint, reliability)
    terminals: tuple[str, str] | None           # (source, destination); None = all-terminal

    def __post_init__(self):
        ids = {nid for nid, _ in self.nodes}
        for u, v, _ in self.edges:
            if u not in ids or v not in ids:
                raise FamilyError(f"edge endpoint missing: {u}-{v}")
        if self.terminals is not None:
            s, t = self.terminals
            if s not in ids or t not in ids:
                raise FamilyError("terminal not in node set")


def explicit_graph(spec: FamilySpec) -> ExplicitGraph:
    """Expand a spec into an explicit node/edge list.

    Topology (reverse-engineered from the transfer-matrix entries and pinned
    by the oracle-equality tests):
      K4 cell i>=1:  a_i: S_{i-1}-S_i,  c_i: T_{i-1}-T_i,  e_i: S_{i-1}-T_i,
                     d_i: T_{i-1}-S_i,  b_i: S_i-T_i;  boundary: b_0: S_0-T_0.
      K3 cell i>=1:  a_i: S_{i-1}-S_i,  c_i: T_{i-1}-T_i,  e_i: U_{i-1}-U_i,
                     b_i: S_i-T_i,  d_i: T_i-U_i,  f_i: S_i-U_i;
                     boundary triangle: b_0: S_0-T_0, d_0: T_0-U_0, f_0: S_0-U_0.
    Zero-reliability edges are omitted (identical semantics, smaller state
    space for the oracle).
    """
    for cell in spec.cells:
        for name in cell.edge_names() + (_K3_NODES if spec.is_k3 else _K4_NODES):
            v = cell.get(name)
            if v is not None and not _is_numeric(v):
                raise FamilyError("explicit graphs require numeric parameters")

    nodes: list[tuple[str, object]] = []
    edges: list[tuple[str, str, object]] = []

    def add_edge(u, v, r):
        if r != 0:
            edges.append((u, v, r))

    if spec.is_k3:
        for i in range(spec.n + 1):
            c = spec.cells[i]
            nodes += [(f"S{i}", c.S), (f"T{i}", c.T), (f"U{i}", c.U)]
            if i > 0:
                add_edge(f"S{i-1}", f"S{i}", c.a)
                add_edge(f"T{i-1}", f"T{i}", c.c)
                add_edge(f"U{i-1}", f"U{i}", c.e)
            add_edge(f"S{i}", f"T{i}", c.b)
            add_edge(f"T{i}", f"U{i}", c.d)
            add_edge(f"S{i}", f"U{i}", c.f)
    else:
        for i in range(spec.n + 1):
            c = spec.cells[i]
            nodes += [(f"S{i}", c.S), (f"T{i}", c.T)]
            if i > 0:
                add_edge(f"S{i-1}", f"S{i}", c.a)
                add_edge(f"T{i-1}", f"T{i}", c.c)
                add_edge(f"S{i-1}", f"T{i}", c.e)
                add_edge(f"T{i-1}", f"S{i}", c.d)
            add_edge(f"S{i}", f"T{i}", c.b)

    if spec.family == K4_ALL_TERMINAL:
        terminals = None
    else:
        terminals = ("S0", f"{spec.destination}{spec.n}")
    return ExplicitGraph(tuple(nodes), tuple(edges), terminals)


def _is_numeric(v) -> bool:
    import numbers

    return isinstance(v, numbers.Rational)
