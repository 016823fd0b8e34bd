"""Reading and writing graphs, presentations and words (JSON, edge lists, DOT)."""
from __future__ import annotations

import json
from pathlib import Path

from .errors import InputError
from .graph import BallInfo, Graph
from .periagroup import Presentation

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def graph_from_json(obj) -> Graph:
    try:
        n = int(obj["vertices"])
        edges = [(int(e[0]), int(e[1])) for e in obj.get("edges", [])]
        ball = obj.get("ball")
        if ball is not None:
            ball = BallInfo(int(ball["center"]), int(ball["radius"]))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"malformed graph JSON: {exc}") from None
    return Graph(n, edges, ball=ball)


def graph_to_json(g: Graph) -> dict:
    out = {"vertices": g.n, "edges": [[u, v] for u, v in g.edges]}
    if g.ball is not None:
        out["ball"] = {"center": g.ball.center, "radius": g.ball.radius}
    return out


def parse_edge_list(text: str) -> Graph:
    """One ``u v`` pair per line; ``#`` starts a comment; a lone integer line sets the vertex count."""
    n = None
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(x) for x in parts]
        except ValueError:
            raise InputError(f"line {lineno}: expected integers, got {line!r}") from None
        if len(nums) == 1 and n is None and not edges:
            n = nums[0]
        elif len(nums) == 2:
            edges.append(tuple(nums))
        else:
            raise InputError(f"line {lineno}: expected 'u v'")
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return Graph(n, edges)


def edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges) if g.edges else f"{g.n}\n"


def _load(source):
    if isinstance(source, (str, Path)):
        path = Path(source)
        try:
            return path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from None
    return source.read()


def read_graph(source) -> Graph:
    text = _load(source)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            return graph_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
    return parse_edge_list(text)


def read_json(source):
    try:
        return json.loads(_load(source))
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def read_presentation(source) -> Presentation:
    return Presentation.from_json(read_json(source))


def read_word(p: Presentation, source):
    obj = read_json(source)
    if not isinstance(obj, list):
        raise InputError("a word is a JSON list of syllables")
    return p.word(obj)


def to_dot(g: Graph, colouring: dict | None = None, labels: dict | None = None, name: str = "G") -> str:
    """DOT text; ``colouring`` maps edges to class ids (coloured and tagged), ``labels`` to edge labels."""
    lines = [f"graph {name} {{"]
    lines += [f"  {v};" for v in range(g.n)]
    for e in g.edges:
        attrs = []
        if colouring is not None:
            k = colouring[e]
            attrs.append(f'color="{PALETTE[k % len(PALETTE)]}"')
            attrs.append(f'hyperplane="{k}"')
        if labels is not None and e in labels:
            attrs.append(f'label="{labels[e]}"')
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {e[0]} -- {e[1]}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
