"""Round-synchronous message-passing simulator with bandwidth accounting.

Execution model: every vertex runs the same program. ``init`` fires once
before any traffic and may send or halt; afterwards the engine repeatedly
delivers the previous step's messages and invokes ``on_round`` on each
non-halted vertex that received mail. A vertex that wants to act
spontaneously must do so in ``init``; everything else is message-driven.

Round accounting: a round is a delivery step in which at least one live
vertex receives a message. Late messages that only reach halted vertices
occupy their channels but do not extend the round count. Under this
convention a token flooded from one endpoint of a five-vertex path costs
4 rounds and the same program on a 4-clique costs 1.
"""

import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .graphcore import Graph, GraphError

DEFAULT_WORDS = 4
DEFAULT_ROUND_CAP = 1 << 20


class CongestError(GraphError):
    pass


class BandwidthError(CongestError):
    """Two messages pushed onto one directed edge in one round."""

    def __init__(self, round_index: int, edge: Tuple[int, int]):
        self.round_index = round_index
        self.edge = edge
        super().__init__(
            f"bandwidth violation at round {round_index} on directed edge {edge}"
        )


class StallError(CongestError):
    """No traffic, no halts, and live vertices remain."""


@dataclass(frozen=True)
class Message:
    kind: str
    payload: Tuple[int, ...]
    src: int


@dataclass
class Transcript:
    rounds: int = 0
    message_count: int = 0
    channel_load: int = 0
    phases: Dict[str, int] = field(default_factory=dict)
    seed: int = 0
    cap_exhausted: bool = False

    def as_json(self) -> Dict[str, Any]:
        return {
            "rounds": self.rounds,
            "message_count": self.message_count,
            "channel_load": self.channel_load,
            "phases": dict(sorted(self.phases.items())),
            "seed": self.seed,
            "cap_exhausted": self.cap_exhausted,
        }


class VertexProgram:
    """Base class: override init and on_round; both receive a Ctx."""

    def init(self, ctx: "Ctx") -> None:
        pass

    def on_round(self, ctx: "Ctx", inbox: List[Message]) -> None:
        raise NotImplementedError


class Ctx:
    """Per-vertex view handed to program handlers."""

    __slots__ = ("v", "n", "neighbors", "deg", "state", "rng", "round", "_engine", "halted")

    def __init__(self, v: int, g: Graph, rng: random.Random, engine: "_Engine"):
        self.v = v
        self.n = g.n
        self.neighbors = tuple(g.adj[v])
        self.deg = g.deg[v]
        self.state: Any = None
        self.rng = rng
        self.round = 0
        self._engine = engine
        self.halted = False

    def send(self, to: int, kind: str, *words: int) -> None:
        if self.halted:
            raise CongestError(f"vertex {self.v} tried to send after halting")
        if to not in self._engine.nbr_sets[self.v]:
            raise CongestError(f"vertex {self.v} has no edge to {to}")
        if len(words) > self._engine.w:
            raise CongestError(
                f"payload of {len(words)} words exceeds the {self._engine.w}-word limit"
            )
        for word in words:
            if not isinstance(word, int):
                raise CongestError("payload words must be integers")
        self._engine.push(self.v, to, Message(kind, tuple(words), self.v))

    def halt(self) -> None:
        self.halted = True


class _Engine:
    def __init__(self, g: Graph, w: int):
        self.g = g
        self.w = w
        self.nbr_sets = [g.neighbor_set(v) for v in range(g.n)]
        self.outbox: Dict[int, List[Message]] = {}
        self.sent_pairs: set = set()
        self.round_index = 0
        self.message_count = 0
        self.channel_load = 0

    def push(self, src: int, dst: int, msg: Message) -> None:
        if (src, dst) in self.sent_pairs:
            raise BandwidthError(self.round_index, (src, dst))
        self.sent_pairs.add((src, dst))
        self.outbox.setdefault(dst, []).append(msg)
        self.message_count += 1
        self.channel_load = max(self.channel_load, 1)

    def drain(self) -> Dict[int, List[Message]]:
        pending = self.outbox
        self.outbox = {}
        self.sent_pairs = set()
        for box in pending.values():
            box.sort(key=lambda m: m.src)
        return pending


def run(
    g: Graph,
    program: VertexProgram,
    seed: int = 0,
    round_cap: int = DEFAULT_ROUND_CAP,
    phase: str = "main",
    w: int = DEFAULT_WORDS,
) -> Tuple[Dict[int, Any], Transcript]:
    """Execute program on every vertex of g until all halt or the cap hits.

    Returns the final per-vertex states and a Transcript. Identical
    (g, program, seed) always produce identical results: vertices are
    processed in id order and each draws randomness only from its own
    stream seeded by (seed, vertex id, phase).
    """
    if round_cap <= 0:
        raise CongestError("round_cap must be positive")
    engine = _Engine(g, w)
    ctxs = [
        Ctx(v, g, random.Random(f"{seed}:{v}:{phase}"), engine) for v in range(g.n)
    ]
    for ctx in ctxs:
        program.init(ctx)

    transcript = Transcript(seed=seed)
    rounds = 0
    while True:
        if all(ctx.halted for ctx in ctxs):
            break
        pending = engine.drain()
        live = {v: box for v, box in pending.items() if not ctxs[v].halted}
        if not live:
            alive = [ctx.v for ctx in ctxs if not ctx.halted]
            raise StallError(
                f"no deliverable traffic after round {rounds}; "
                f"vertices still running: {alive[:8]}"
            )
        if rounds >= round_cap:
            transcript.cap_exhausted = True
            break
        rounds += 1
        engine.round_index = rounds
        for v in sorted(live):
            ctx = ctxs[v]
            ctx.round = rounds
            program.on_round(ctx, live[v])

    transcript.rounds = rounds
    transcript.message_count = engine.message_count
    transcript.channel_load = engine.channel_load
    transcript.phases[phase] = rounds
    return {ctx.v: ctx.state for ctx in ctxs}, transcript


# ---------------------------------------------------------------------------
# BFS trees and pipelined tree traffic
# ---------------------------------------------------------------------------


@dataclass
class BfsTree:
    root: int
    parent: Dict[int, Optional[int]]
    level: Dict[int, int]
    depth: int

    def children(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {v: [] for v in self.parent}
        for v, p in self.parent.items():
            if p is not None:
                out[p].append(v)
        for kids in out.values():
            kids.sort()
        return out


class _BfsWave(VertexProgram):
    def __init__(self, root: int, members: frozenset):
        self.root = root
        self.members = members

    def init(self, ctx: Ctx) -> None:
        if ctx.v not in self.members:
            ctx.halt()
            return
        ctx.state = {"level": None, "parent": None}
        if ctx.v == self.root:
            ctx.state["level"] = 0
            for u in ctx.neighbors:
                if u in self.members:
                    ctx.send(u, "wave", 0)
            ctx.halt()

    def on_round(self, ctx: Ctx, inbox: List[Message]) -> None:
        senders = {m.src for m in inbox if m.kind == "wave"}
        level = min(m.payload[0] for m in inbox) + 1
        ctx.state["level"] = level
        ctx.state["parent"] = min(senders)
        for u in ctx.neighbors:
            if u in self.members and u not in senders:
                ctx.send(u, "wave", level)
        ctx.halt()


def bfs_build(g: Graph, component: Sequence[int], root: int) -> Tuple[BfsTree, int]:
    """Grow a BFS tree over one connected component via the engine.

    Returns the tree and the rounds charged, which is the tree depth plus
    a constant for the kickoff.
    """
    members = frozenset(component)
    if root not in members:
        raise CongestError(f"root {root} is not in the component")
    states, transcript = run(g, _BfsWave(root, members), seed=0, phase="bfs")
    parent: Dict[int, Optional[int]] = {}
    level: Dict[int, int] = {}
    for v in members:
        st = states[v]
        parent[v] = st["parent"]
        level[v] = st["level"]
    depth = max(level.values())
    return BfsTree(root, parent, level, depth), transcript.rounds + 1


def pipelined_convergecast(tree: BfsTree, items_per_vertex: int) -> int:
    """Rounds for the root to aggregate k items per vertex up the tree.

    One item crosses each tree edge per round, items flow back to back, and
    an inner vertex folds its children's copies of item j before relaying
    it, so stream j reaches the root j - 1 rounds behind stream 1. Total:
    depth + k - 1.
    """
    k = items_per_vertex
    if k < 0:
        raise CongestError("items_per_vertex must be nonnegative")
    if k == 0 or tree.depth == 0:
        return 0
    return tree.depth + k - 1


def broadcast(tree: BfsTree, items: int) -> int:
    """Rounds for the root to push k items to every vertex; mirror schedule."""
    k = items
    if k < 0:
        raise CongestError("items must be nonnegative")
    if k == 0 or tree.depth == 0:
        return 0
    return tree.depth + k - 1
