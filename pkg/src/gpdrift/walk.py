"""Alternating random walks with incremental pivotal-time tracking.

A walk of n steps multiplies alternately by a letter s_k drawn uniformly
over the vertex groups and a word w_k from an arbitrary sampler that never
produces the identity.  After each half step (s appended) and each full
step (w folded in) the trace records the piling, and maintains the stack
of candidate pivotal times: a time k stays on the stack while its
half-step piling remains a prefix of every later recorded piling; it was
pushed only if the local geodesic condition held at k.  A time that falls
off the stack never returns, because the prefix requirement quantifies
over all intermediate pilings.

Anchors on the stack are nested (each is a prefix of the next), so pruning
inspects only the most recent anchor until one survives.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Sequence

from .graphs import Graph
from .groups import VertexGroup
from .piling import (
    Piling,
    Word,
    append,
    empty_piling,
    init,
    is_prefix,
    piling_of_word,
    render,
    term,
)

MuLetter = tuple[int, object]  # (vertex, nontrivial element)


def sample_mu(graph: Graph, groups: Sequence[VertexGroup], rng: Random) -> MuLetter:
    """Uniform vertex, then that group's nontrivial-element sampler."""
    vertex = rng.randrange(graph.vertex_count)
    return vertex, groups[vertex].sample_nontrivial(rng)


class FixedWord:
    """Nu sampler that always returns the same word."""

    def __init__(self, word: Word):
        word = tuple(word)
        if not word:
            raise ValueError("nu words must be nonempty")
        self.word = word

    def sample(self, rng: Random, graph: Graph, groups: Sequence[VertexGroup]) -> Word:
        return self.word


class WordChoice:
    """Nu sampler drawing uniformly from a finite list of words."""

    def __init__(self, words: Sequence[Word]):
        if not words:
            raise ValueError("need at least one word")
        self.words = tuple(tuple(w) for w in words)
        if any(not w for w in self.words):
            raise ValueError("nu words must be nonempty")

    def sample(self, rng: Random, graph: Graph, groups: Sequence[VertexGroup]) -> Word:
        return self.words[rng.randrange(len(self.words))]


class ParetoLetter:
    """Nu sampler: one letter with a heavy-tailed integer magnitude.

    The magnitude M satisfies P(M >= m) = m**-alpha, so small alpha has no
    finite mean; the drift bound must not care.  The vertex is uniform
    unless pinned, the sign uniform, and the magnitude is pushed through
    the group's ``from_int`` (re-drawing in finite groups when the residue
    is the identity).
    """

    def __init__(self, alpha: float, vertex: int | None = None):
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        self.alpha = alpha
        self.vertex = vertex

    def sample(self, rng: Random, graph: Graph, groups: Sequence[VertexGroup]) -> Word:
        v = self.vertex if self.vertex is not None else rng.randrange(graph.vertex_count)
        group = groups[v]
        while True:
            u = 1.0 - rng.random()  # in (0, 1]
            magnitude = int(u ** (-1.0 / self.alpha))
            if magnitude < 1:
                magnitude = 1
            sign = 1 if rng.random() < 0.5 else -1
            value = group.from_int(sign * magnitude)
            if not group.is_identity(value):
                return ((v, value),)


@dataclass(frozen=True)
class WalkConfig:
    graph: Graph
    groups: tuple[VertexGroup, ...]
    nu: object  # any object with .sample(rng, graph, groups) -> Word
    steps: int
    seed: int


@dataclass(frozen=True)
class PivotalReport:
    """Pivotal times with respect to the final step, strictly before it."""

    pivotal_times: tuple[int, ...]
    count: int
    syllable_length: int


class _Candidate:
    __slots__ = ("time", "anchor")

    def __init__(self, time: int, anchor: Piling):
        self.time = time
        self.anchor = anchor


class WalkTrace:
    """Everything one walk produced, plus the live pivotal-candidate stack.

    ``active_counts[k-1]`` counts the surviving candidates among times
    1..k after step k (the inclusive count the step-increment experiments
    use); ``strict_counts`` additionally excludes time k itself, matching
    the pivotal-time definition, which only looks strictly before the
    horizon.
    """

    def __init__(self, graph: Graph, groups: Sequence[VertexGroup]):
        self.graph = graph
        self.groups = tuple(groups)
        self.s_letters: list[MuLetter] = []
        self.nu_words: list[tuple] = []
        self.half: list[Piling] = []
        self.full: list[Piling] = []
        self.stack: list[_Candidate] = []
        self.active_counts: list[int] = []
        self.strict_counts: list[int] = []
        self._empty = empty_piling(graph.vertex_count)

    @classmethod
    def run(
        cls,
        graph: Graph,
        groups: Sequence[VertexGroup],
        steps: Sequence[tuple[MuLetter, Word]],
    ) -> "WalkTrace":
        trace = cls(graph, groups)
        for s, w in steps:
            trace.extend(s, w)
        return trace

    @property
    def n(self) -> int:
        return len(self.full)

    def piling_after(self, k: int) -> Piling:
        """The full-step piling after k steps (k = 0 gives the identity)."""
        return self.full[k - 1] if k > 0 else self._empty

    def extend(self, s: MuLetter, w: Word) -> None:
        """Fold one (letter, word) step in and update the pivotal stack."""
        w = tuple(w)
        if not w:
            raise ValueError("nu sampler produced an empty word")
        w_piling = piling_of_word(w, self.graph, self.groups)
        if w_piling.syllables == 0:
            raise ValueError("nu sampler produced a word equal to the identity")
        k = self.n + 1
        f_prev = self.piling_after(k - 1)
        vertex, value = s
        half = append(f_prev, vertex, value, self.graph, self.groups)
        self._prune(half)
        if not f_prev.ends_nontrivial(vertex) and not any(
            half.ends_nontrivial(u) for u in init(w_piling)
        ):
            self.stack.append(_Candidate(k, half))
        full = half
        for wv, wval in w:
            full = append(full, wv, wval, self.graph, self.groups)
        self._prune(full)
        self.s_letters.append(s)
        self.nu_words.append(w)
        self.half.append(half)
        self.full.append(full)
        active = len(self.stack)
        self.active_counts.append(active)
        self.strict_counts.append(
            active - (1 if self.stack and self.stack[-1].time == k else 0)
        )

    def _prune(self, piling: Piling) -> None:
        stack = self.stack
        while stack and not is_prefix(stack[-1].anchor, piling):
            stack.pop()

    def pivotal_times(self) -> tuple[int, ...]:
        """Times pivotal with respect to the walk length (strictly before it)."""
        n = self.n
        return tuple(c.time for c in self.stack if c.time < n)

    def report(self) -> PivotalReport:
        times = self.pivotal_times()
        return PivotalReport(times, len(times), self.piling_after(self.n).syllables)

    def to_debug_json(self) -> dict:
        labels = self.graph.labels
        return {
            "steps": [
                {
                    "s": f"{labels[v]}^{val}",
                    "w": [f"{labels[wv]}^{wval}" for wv, wval in word],
                    "half": render(h, labels),
                    "full": render(f, labels),
                }
                for (v, val), word, h, f in zip(
                    self.s_letters, self.nu_words, self.half, self.full
                )
            ],
            "pivotal_times": list(self.pivotal_times()),
        }


def is_local_geodesic(
    f_prev: Piling,
    s: MuLetter,
    w: Word,
    graph: Graph,
    groups: Sequence[VertexGroup],
) -> bool:
    """The letter leaves the terminal clique and the word cannot eat it.

    Both syllable-length increases are strict under this condition: the
    half step grows past the previous full step, and the following word
    grows past the half step.
    """
    vertex, value = s
    if f_prev.ends_nontrivial(vertex):
        return False
    half = append(f_prev, vertex, value, graph, groups)
    w_init = init(piling_of_word(w, graph, groups))
    return not any(half.ends_nontrivial(u) for u in w_init)


def is_strong_pivot_choice(
    f_prev: Piling,
    s: MuLetter,
    w: Word,
    graph: Graph,
    groups: Sequence[VertexGroup],
) -> bool:
    """Stronger than local geodesic: the vertex also avoids the closed
    neighbourhood of the word's initial clique, so swapping it in cannot
    disturb any other pivotal time."""
    vertex, _ = s
    if f_prev.ends_nontrivial(vertex):
        return False
    w_init = init(piling_of_word(w, graph, groups))
    if vertex in w_init:
        return False
    return not any(vertex in graph.neighbors[u] for u in w_init)


def strong_choice_vertices(
    f_prev: Piling, w: Word, graph: Graph, groups: Sequence[VertexGroup]
) -> frozenset[int]:
    """All vertices whose letters qualify under the strong pivot condition."""
    w_init = init(piling_of_word(w, graph, groups))
    blocked = set(term(f_prev)) | set(w_init)
    for u in w_init:
        blocked |= graph.neighbors[u]
    return frozenset(range(graph.vertex_count)) - blocked


def pivotal_times_bruteforce(trace: WalkTrace, n: int | None = None) -> list[int]:
    """Direct check of the pivotal-time definition against stored pilings.

    Quadratic; this is the oracle the incremental stack is tested against.
    """
    if n is None:
        n = trace.n
    if n > trace.n:
        raise ValueError("horizon exceeds the trace length")
    half, full = trace.half, trace.full
    out = []
    for k in range(1, n):
        f_prev = trace.piling_after(k - 1)
        if not is_local_geodesic(
            f_prev, trace.s_letters[k - 1], trace.nu_words[k - 1], trace.graph, trace.groups
        ):
            continue
        anchor = half[k - 1]
        if is_prefix(anchor, full[k - 1]) and all(
            is_prefix(anchor, half[j]) and is_prefix(anchor, full[j])
            for j in range(k, n)
        ):
            out.append(k)
    return out


def pivot_replace(trace: WalkTrace, k: int, s_new: MuLetter) -> WalkTrace:
    """Rebuild the walk with the letter at pivotal time ``k`` swapped out.

    Requires ``k`` pivotal and the replacement to satisfy the strong
    choice condition; the rebuilt walk then has the same pivotal times.
    """
    if k not in trace.pivotal_times():
        raise ValueError(f"time {k} is not pivotal for this trace")
    if not is_strong_pivot_choice(
        trace.piling_after(k - 1),
        s_new,
        trace.nu_words[k - 1],
        trace.graph,
        trace.groups,
    ):
        raise ValueError("replacement letter fails the strong pivot condition")
    steps = list(zip(trace.s_letters, trace.nu_words))
    steps[k - 1] = (s_new, trace.nu_words[k - 1])
    return WalkTrace.run(trace.graph, trace.groups, steps)


def run_walk(cfg: WalkConfig) -> WalkTrace:
    """Sample and fold a walk; deterministic in the seed.

    Per step the generator is consumed in a fixed order: the uniform
    letter first, then the nu word.
    """
    rng = Random(cfg.seed)
    steps = []
    for _ in range(cfg.steps):
        s = sample_mu(cfg.graph, cfg.groups, rng)
        w = tuple(cfg.nu.sample(rng, cfg.graph, cfg.groups))
        steps.append((s, w))
    return WalkTrace.run(cfg.graph, cfg.groups, steps)
