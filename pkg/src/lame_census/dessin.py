"""Combinatorial dessins attached to rational spherical-torus configurations.

For edge lengths l_i = m_i/N (integer m_i >= 1 summing to N) the bipartite
graph pulled back from the three-point branched cover consists of 2n+1
loops through the marked point p, in 3 directions: direction i carries
2n+1-2*theta_i loops whose edge counts alternate between 2*m_i and
2*N-2*m_i. Alternation convention (a convention, not a given): loops are
ordered along the triangle edge and the first loop takes 2*m_i.

Every loop is an even cycle through p, vertices alternating between the
preimages of 0 (p included) and 1. Quotienting by the elliptic involution
z -> -z fixes p and the three 2-torsion points; in each direction the odd
loop stack reflects onto itself, so the middle loop (which carries the
2-torsion point opposite p) folds to a path of half its edges, while the
remaining loops swap in pairs, each pair contributing one loop downstairs.
The result is a planar (genus 0) dessin with n*N edges; the folding rule
travels with the JSON export.

Only combinatorics here: the intermediate rational maps are recorded as
metadata strings, never evaluated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import DomainError
from .torus import ThetaTriple

__all__ = [
    "BELYI_STEPS",
    "Loop",
    "QuotientDessin",
    "TorusDessin",
    "dessin_from_config",
    "dessin_from_json",
    "export_dessin",
    "quotient_dessin",
]

JSON_SCHEMA_VERSION = 1

# The two outer maps of the branched cover, recorded but never evaluated.
BELYI_STEPS = {
    "g": "((1 - z^N) / (1 + z^N))^2",
    "h": "z / (z - 1)",
}

FOLDING_RULE = (
    "middle loop of each direction folds to a path of half its edges "
    "(endpoints: marked point and the 2-torsion point of that direction); "
    "remaining loops swap in pairs, one loop per pair survives"
)


@dataclass(frozen=True)
class Loop:
    """One loop through the marked point; edge_count is a positive even integer."""

    edge_count: int


@dataclass(frozen=True)
class TorusDessin:
    """Dessin on the torus: 2n+1 loops in 3 directions through the marked point."""

    n: int
    N: int
    theta: ThetaTriple
    m: tuple[int, int, int]
    directions: tuple[tuple[Loop, ...], tuple[Loop, ...], tuple[Loop, ...]]

    def total_edges(self) -> int:
        return sum(loop.edge_count for direction in self.directions for loop in direction)

    def total_loops(self) -> int:
        return sum(len(direction) for direction in self.directions)

    def vertex_count(self) -> int:
        """Loops share only the marked point: each 2k-cycle adds 2k-1 vertices."""
        return 1 + self.total_edges() - self.total_loops()


@dataclass(frozen=True)
class QuotientDessin:
    """Genus-0 dessin obtained by folding a torus dessin along z -> -z."""

    n: int
    N: int
    vertices_0: int
    vertices_1: int
    edges: int
    faces: int
    genus: int
    # per direction: surviving full loops and the folded middle path (edge count)
    loops: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    paths: tuple[int, int, int]
    folding_rule: str = FOLDING_RULE

    def euler_characteristic(self) -> int:
        return self.vertices_0 + self.vertices_1 - self.edges + self.faces


def dessin_from_config(
    n: int, theta: ThetaTriple, m: tuple[int, int, int], N: int
) -> TorusDessin:
    """Build the torus dessin for angles theta and integer lengths m over N."""
    if theta.n != n:
        raise DomainError(f"angle triple {theta.as_tuple()} does not match n={n}")
    if len(m) != 3 or any(mi < 1 for mi in m) or sum(m) != N:
        raise DomainError(f"need positive integer lengths summing to N={N}, got {m}")
    directions = []
    for theta_i, m_i in zip(theta.as_tuple(), m):
        loop_count = 2 * n + 1 - 2 * theta_i
        direction = tuple(
            Loop(2 * m_i if j % 2 == 0 else 2 * N - 2 * m_i) for j in range(loop_count)
        )
        directions.append(direction)
    dessin = TorusDessin(n, N, theta, tuple(m), tuple(directions))
    if dessin.total_loops() != 2 * n + 1 or dessin.total_edges() != 2 * n * N:
        raise AssertionError(f"dessin bookkeeping broken for theta={theta}, m={m}")
    return dessin


def quotient_dessin(dessin: TorusDessin) -> QuotientDessin:
    """Fold a torus dessin along the elliptic involution onto the sphere."""
    n, N = dessin.n, dessin.N
    loops: list[tuple[int, ...]] = []
    paths: list[int] = []
    v0, v1 = 1, 0  # image of the marked point
    edges = 0
    for direction in dessin.directions:
        middle = len(direction) // 2  # loop counts are odd: 2n+1-2*theta_i
        survivors = tuple(direction[j].edge_count for j in range(middle))
        loops.append(survivors)
        for edge_count in survivors:
            edges += edge_count
            v1 += edge_count // 2
            v0 += edge_count // 2 - 1
        path_edges = direction[middle].edge_count // 2
        paths.append(path_edges)
        edges += path_edges
        v1 += (path_edges + 1) // 2
        v0 += path_edges // 2
    faces = 2 - (v0 + v1) + edges  # forced by genus 0
    quotient = QuotientDessin(
        n, N, v0, v1, edges, faces, 0, tuple(loops), (paths[0], paths[1], paths[2])
    )
    if quotient.edges != dessin.total_edges() // 2 or quotient.faces != n:
        raise AssertionError(
            f"quotient bookkeeping broken: edges {quotient.edges}, faces {quotient.faces}"
        )
    return quotient


def _torus_payload(dessin: TorusDessin) -> dict:
    return {
        "version": JSON_SCHEMA_VERSION,
        "kind": "torus",
        "n": dessin.n,
        "N": dessin.N,
        "theta": list(dessin.theta.as_tuple()),
        "m": list(dessin.m),
        "directions": [
            [loop.edge_count for loop in direction] for direction in dessin.directions
        ],
        "belyi_steps": BELYI_STEPS,
    }


def _quotient_payload(q: QuotientDessin) -> dict:
    return {
        "version": JSON_SCHEMA_VERSION,
        "kind": "quotient",
        "n": q.n,
        "N": q.N,
        "genus": q.genus,
        "vertices": {"zero": q.vertices_0, "one": q.vertices_1},
        "edges": q.edges,
        "faces": q.faces,
        "loops": [list(direction) for direction in q.loops],
        "paths": list(q.paths),
        "folding_rule": q.folding_rule,
    }


def _torus_dot(dessin: TorusDessin) -> str:
    lines = [
        "graph torus_dessin {",
        f'  // n={dessin.n} N={dessin.N} theta={dessin.theta.as_tuple()} m={dessin.m}',
        '  p [label="p", shape=circle];',
    ]
    for i, direction in enumerate(dessin.directions, start=1):
        for j, loop in enumerate(direction):
            lines.append(
                f'  p -- p [label="d{i}.l{j} ({loop.edge_count} edges)"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


def _quotient_dot(q: QuotientDessin) -> str:
    lines = [
        "graph quotient_dessin {",
        f"  // n={q.n} N={q.N} genus={q.genus} edges={q.edges}",
        '  p [label="p", shape=circle];',
    ]
    for i in range(3):
        for j, edge_count in enumerate(q.loops[i]):
            lines.append(f'  p -- p [label="d{i + 1}.l{j} ({edge_count} edges)"];')
        lines.append(f'  t{i + 1} [label="torsion{i + 1}", shape=box];')
        lines.append(f'  p -- t{i + 1} [label="d{i + 1}.path ({q.paths[i]} edges)"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dessin(dessin: TorusDessin | QuotientDessin, fmt: str) -> str:
    """Deterministic serialization: DOT multigraph or versioned JSON."""
    if fmt not in ("DOT", "JSON"):
        raise ValueError(f"format must be 'DOT' or 'JSON', got {fmt!r}")
    if isinstance(dessin, TorusDessin):
        if fmt == "DOT":
            return _torus_dot(dessin)
        return json.dumps(_torus_payload(dessin), indent=2, sort_keys=True) + "\n"
    if fmt == "DOT":
        return _quotient_dot(dessin)
    return json.dumps(_quotient_payload(dessin), indent=2, sort_keys=True) + "\n"


def dessin_from_json(text: str) -> TorusDessin:
    """Rebuild a torus dessin from its JSON export (schema round trip)."""
    data = json.loads(text)
    if data.get("version") != JSON_SCHEMA_VERSION or data.get("kind") != "torus":
        raise ValueError("not a torus dessin payload of a supported schema version")
    theta = ThetaTriple(*data["theta"])
    rebuilt = dessin_from_config(data["n"], theta, tuple(data["m"]), data["N"])
    if [
        [loop.edge_count for loop in direction] for direction in rebuilt.directions
    ] != data["directions"]:
        raise ValueError("directions in payload do not match the reconstruction")
    return rebuilt
