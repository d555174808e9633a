"""The core library and its textual registry."""

from __future__ import annotations

import re
from pathlib import Path

from ..dpcore import DPCore
from ..errors import ConjectureSyntaxError
from ..graphs import Multigraph, graph_from_json
from .colorable import ColorableCore, colorable_core
from .connectivity import ConnCore, EdgeConnCore, VertexConnCore, conn_core, econn_core, vconn_core
from .degree import DegreeCore, max_deg_core, min_deg_core
from .flow import NZFlowCore, nzflow_core
from .hamiltonian import HamiltonianCore, hamiltonian_core
from .minor import MinorCore, minor_core
from .simple import SimpleCore, simple_core
from .vertex_cover import VertexCoverCore, min_vertex_cover_core, vertex_cover_core

__all__ = [
    "ColorableCore", "ConnCore", "DegreeCore", "EdgeConnCore", "HamiltonianCore", "MinorCore",
    "NZFlowCore", "SimpleCore", "VertexConnCore", "VertexCoverCore",
    "colorable_core", "conn_core", "econn_core", "hamiltonian_core", "max_deg_core", "min_deg_core",
    "min_vertex_cover_core", "minor_core", "nzflow_core", "simple_core", "vconn_core", "vertex_cover_core",
    "CORE_NAMES", "named_graph", "resolve_core", "witness_bitlength",
]


def named_graph(name: str) -> Multigraph:
    """Small named graphs: ``K<n>`` complete, ``C<n>`` cycle, ``P<n>`` path on n vertices."""
    m = re.fullmatch(r"([KCP])(\d+)", name)
    if not m:
        raise ValueError(f"unknown graph name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    vs = tuple(range(1, n + 1))
    if kind == "K":
        pairs = [(a, b) for a in vs for b in vs if a < b]
    elif kind == "P":
        pairs = [(a, a + 1) for a in vs[:-1]]
    else:
        if n < 3:
            raise ValueError("cycles need at least 3 vertices")
        pairs = [(a, a % n + 1) for a in vs]
    return Multigraph(vs, tuple((i + 1, a, b) for i, (a, b) in enumerate(pairs)))


def _int_args(name, args, count, pos):
    if len(args) != count:
        raise ConjectureSyntaxError(f"{name} takes {count} argument(s), got {len(args)}", pos)
    try:
        vals = [int(a) for a in args]
    except ValueError:
        raise ConjectureSyntaxError(f"{name} expects integer arguments", pos) from None
    if any(v < 0 for v in vals):
        raise ConjectureSyntaxError(f"{name} expects non-negative arguments", pos)
    return vals


def _minor(args, pos, base_dir):
    if len(args) != 1:
        raise ConjectureSyntaxError("Minor takes one argument", pos)
    arg = args[0]
    if arg.startswith("@"):
        path = Path(arg[1:])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        try:
            h = graph_from_json(path.read_text())
        except OSError as exc:
            raise ConjectureSyntaxError(f"cannot read graph file {path}: {exc}", pos) from exc
        return minor_core(h, arg)
    try:
        return minor_core(named_graph(arg), arg)
    except ValueError as exc:
        raise ConjectureSyntaxError(str(exc), pos) from exc


_FACTORIES = {
    "VertexCover": lambda a, p, d: vertex_cover_core(*_int_args("VertexCover", a, 1, p)),
    "MinVertexCover": lambda a, p, d: min_vertex_cover_core(*_int_args("MinVertexCover", a, 0, p)),
    "Simple": lambda a, p, d: simple_core(*_int_args("Simple", a, 0, p)),
    "MaxDegGe": lambda a, p, d: max_deg_core(*_int_args("MaxDegGe", a, 1, p)),
    "MinDegLe": lambda a, p, d: min_deg_core(*_int_args("MinDegLe", a, 1, p)),
    "Colorable": lambda a, p, d: colorable_core(*_int_args("Colorable", a, 1, p)),
    "Conn": lambda a, p, d: conn_core(*_int_args("Conn", a, 0, p)),
    "VConnLe": lambda a, p, d: vconn_core(*_int_args("VConnLe", a, 1, p)),
    "EConnLe": lambda a, p, d: econn_core(*_int_args("EConnLe", a, 1, p)),
    "Hamiltonian": lambda a, p, d: hamiltonian_core(*_int_args("Hamiltonian", a, 0, p)),
    "NZFlow": lambda a, p, d: _nzflow(a, p),
    "Minor": _minor,
}

CORE_NAMES = tuple(_FACTORIES)


def _nzflow(args, pos):
    (m,) = _int_args("NZFlow", args, 1, pos)
    if m < 2:
        raise ConjectureSyntaxError("NZFlow needs a group order of at least 2", pos)
    return nzflow_core(m)


def resolve_core(name: str, args: list[str] | tuple[str, ...] = (), position: int = 0, base_dir=None) -> DPCore:
    """Build a library core from its registry name and textual arguments."""
    if name not in _FACTORIES:
        raise ConjectureSyntaxError(f"unknown core {name!r}", position)
    return _FACTORIES[name](list(args), position, base_dir)


def witness_bitlength(core: DPCore, k: int, w) -> int:
    return core.witness_bitlength(k, w)
