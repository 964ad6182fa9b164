"""Seeded storyform generators and independent oracles shared by the tests.

The oracles deliberately avoid the library's own geometry tables and
sequencing code so they can check them.
"""

from __future__ import annotations

import dataclasses
import itertools
import json
import random

from ncp.model import (
    Alignment,
    ConflictForm,
    Dynamics,
    Judgment,
    Outcome,
    Perspective,
    PerspectiveAssignment,
    Phase,
    Quad,
    QuadPosition,
    Resolve,
    ResolutionKind,
    Storybeat,
    Storyform,
    StorypointNode,
    StorypointPath,
)

# Grid coordinates (row, column) of each form, on the reference 2x2 grid:
# External Framing top-left, External Processing top-right,
# Internal Processing bottom-left, Internal Framing bottom-right.
GRID = {
    ConflictForm.EXTERNAL_FRAMING: (0, 0),
    ConflictForm.EXTERNAL_PROCESSING: (0, 1),
    ConflictForm.INTERNAL_PROCESSING: (1, 0),
    ConflictForm.INTERNAL_FRAMING: (1, 1),
}
FORM_RANK = {
    ConflictForm.EXTERNAL_FRAMING: 0,
    ConflictForm.EXTERNAL_PROCESSING: 1,
    ConflictForm.INTERNAL_PROCESSING: 2,
    ConflictForm.INTERNAL_FRAMING: 3,
}
PERSPECTIVES = ("os", "mc", "cp", "rs")
WORDS = "inequity crown mentor heir battle trial verdict doubt loyalty exile debt oath storm secret rival harbor".split()


def opposite(f, g) -> bool:
    (r1, c1), (r2, c2) = GRID[f], GRID[g]
    return r1 != r2 and c1 != c2


def oracle_valid(a) -> bool:
    forms = [a.get(Perspective(p)) for p in PERSPECTIVES]
    if None in forms or len(set(forms)) != 4:
        return False
    os_, mc, cp, rs = forms
    return opposite(mc, cp) and opposite(os_, rs)


def all_bijections() -> list[PerspectiveAssignment]:
    return [
        PerspectiveAssignment(dict(zip((Perspective(p) for p in PERSPECTIVES), perm)))
        for perm in itertools.permutations(ConflictForm)
    ]


def oracle_valid_assignments() -> list[PerspectiveAssignment]:
    valid = [a for a in all_bijections() if oracle_valid(a)]
    return sorted(valid, key=lambda a: (FORM_RANK[a[Perspective.OS]], FORM_RANK[a[Perspective.MC]]))


def oracle_repair(a) -> PerspectiveAssignment:
    """Brute-force minimum-change valid assignment, ties by (OS, MC) rank."""
    def cost(c):
        return sum(1 for p in Perspective if a.get(p) is not c[p])

    return min(oracle_valid_assignments(), key=lambda c: (cost(c), FORM_RANK[c[Perspective.OS]], FORM_RANK[c[Perspective.MC]]))


def oracle_beat_count(s: Storyform) -> int:
    total = 0
    for root in s.storypoints.values():
        if root.quad is None:
            continue
        for _, child in root.quad.items():
            total += 1 + (4 if child.quad is not None else 0)
    return total


def oracle_sequence(s: Storyform) -> list[tuple[str, tuple[str, ...], str, str | None]]:
    """Expected beats as (perspective, positions, phase, resolution_kind).

    Built by sorting every storypoint under a composite key instead of
    walking acts, so it is independent of the sequencer's loop structure.
    """
    d = s.dynamics
    forward = ["tl", "tr", "bl", "br"]
    flip = {
        "os": d.outcome is Outcome.FAILURE,
        "mc": d.resolve is Resolve.RELINQUISHED,
        "cp": d.resolve is Resolve.RELINQUISHED,
        "rs": d.judgment is Judgment.BAD,
    }
    interleave = ["os", "mc", "cp", "rs"]
    if d.alignment is Alignment.SEROTONIN:
        interleave.reverse()
    keyed = []
    for p in PERSPECTIVES:
        root = s.storypoints.get(Perspective(p))
        if root is None or root.quad is None:
            continue
        order = forward[::-1] if flip[p] else forward
        for pos in forward:
            act = order.index(pos)
            keyed.append(((act, interleave.index(p), -1), p, (pos,)))
            child = getattr(root.quad, pos)
            if child.quad is not None:
                for sub in forward:
                    keyed.append(((act, interleave.index(p), order.index(sub)), p, (pos, sub)))
    keyed.sort()
    phases = ["challenge_introduced", "reinforcement", "escalation", "crisis"]
    out = []
    for i, (key, p, positions) in enumerate(keyed):
        if i == len(keyed) - 1:
            if d.resolve is Resolve.MAINTAINED:
                kind = "holds"
            elif d.alignment is Alignment.SEROTONIN:
                kind = "released"
            else:
                kind = "relinquished"
            out.append((p, positions, "resolution", kind))
        else:
            out.append((p, positions, phases[key[0]], None))
    return out


def as_tuples(beats) -> list[tuple[str, tuple[str, ...], str, str | None]]:
    return [
        (
            b.perspective.value,
            tuple(p.value for p in b.path.positions),
            b.phase.value,
            b.resolution_kind.value if b.resolution_kind else None,
        )
        for b in beats
    ]


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def _term(rng: random.Random) -> str:
    return " ".join(rng.sample(WORDS, rng.randint(1, 3)))


def random_tree(rng: random.Random, expand_prob: float = 0.0, distinct: bool = True) -> StorypointNode:
    terms = rng.sample(WORDS, 4) if distinct else [_term(rng) for _ in range(4)]
    children = []
    for t in terms:
        quad = None
        if rng.random() < expand_prob:
            quad = Quad(*(StorypointNode(_term(rng)) for _ in range(4)))
        children.append(StorypointNode(t, storytelling=_term(rng) if rng.random() < 0.3 else None, quad=quad))
    return StorypointNode(_term(rng), quad=Quad(*children))


def random_dynamics(rng: random.Random, coherent: bool = True) -> Dynamics:
    d = Dynamics(rng.choice(list(Resolve)), rng.choice(list(Outcome)), rng.choice(list(Judgment)), rng.choice(list(Alignment)))
    if d.alignment is Alignment.SEROTONIN and (coherent or rng.random() < 0.5):
        if d.outcome is Outcome.SUCCESS and d.judgment is Judgment.GOOD:
            d = dataclasses.replace(d, attunement="Centered")
        elif rng.random() < 0.5:
            d = dataclasses.replace(d, attunement=rng.choice(["Centered", "Adrift", "Torn"]))
    elif not coherent and rng.random() < 0.3:
        d = dataclasses.replace(d, attunement="Adrift")
    return d


def random_valid_storyform(rng: random.Random, expand_prob: float = 0.0, with_beats: bool = True) -> Storyform:
    from ncp.justification import justify

    assignment = rng.choice(oracle_valid_assignments())
    s = Storyform(
        title=f"Story {rng.randrange(10_000)}",
        dynamics=random_dynamics(rng),
        assignment=assignment,
        storypoints={Perspective(p): random_tree(rng, expand_prob) for p in PERSPECTIVES},
    )
    if with_beats:
        s = dataclasses.replace(s, beats=justify(s))
    return s


def random_storyform(rng: random.Random) -> Storyform:
    """Arbitrary well-shaped storyform, frequently narratively broken."""
    forms = list(ConflictForm)
    assignment = {}
    for p in PERSPECTIVES:
        if rng.random() < 0.9:
            assignment[Perspective(p)] = rng.choice(forms)
    trees = {}
    for p in PERSPECTIVES:
        if rng.random() < 0.85:
            tree = random_tree(rng, expand_prob=0.3, distinct=False)
            if rng.random() < 0.1:
                tree = dataclasses.replace(tree, term="")
            if rng.random() < 0.1:
                # three levels of quads: representable but invalid
                deep = Quad(*(StorypointNode(_term(rng)) for _ in range(4)))
                grand = Quad(*(StorypointNode(_term(rng), quad=deep) for _ in range(4)))
                child = StorypointNode(_term(rng), quad=grand)
                tree = dataclasses.replace(tree, quad=dataclasses.replace(tree.quad, tl=child))
            if rng.random() < 0.2:
                tree = dataclasses.replace(tree, extras={"x_platform": json.dumps({"weight": rng.randint(0, 9)})})
            trees[Perspective(p)] = tree
    beats = []
    for i in range(rng.randint(0, 6)):
        positions = tuple(rng.choice(list(QuadPosition)) for _ in range(rng.randint(1, 2)))
        phase = rng.choice(list(Phase))
        kind = rng.choice(list(ResolutionKind)) if rng.random() < 0.5 else None
        beats.append(
            Storybeat(
                index=rng.choice([i, i, i, i + 1]),
                path=StorypointPath(Perspective(rng.choice(PERSPECTIVES)), positions),
                phase=phase,
                resolution_kind=kind,
                storytelling="ünïcödé beat\twith tab" if rng.random() < 0.2 else None,
            )
        )
    annotations = {}
    if rng.random() < 0.5:
        annotations["storypoints.mc.tl"] = _term(rng)
    if rng.random() < 0.3:
        annotations["dynamics.resolve"] = "line one\nline two"
    extras = {}
    if rng.random() < 0.3:
        extras["platform-params"] = json.dumps({"seed": rng.randint(0, 99), "tags": ["a", "b"], "ok": True, "none": None})
    return Storyform(
        title=_term(rng),
        dynamics=random_dynamics(rng, coherent=False),
        assignment=assignment,
        storypoints=trees,
        beats=tuple(beats),
        annotations=annotations,
        extras=extras,
    )


def shuffle_keys(obj, rng: random.Random):
    if isinstance(obj, dict):
        items = list(obj.items())
        rng.shuffle(items)
        return {k: shuffle_keys(v, rng) for k, v in items}
    if isinstance(obj, list):
        return [shuffle_keys(v, rng) for v in obj]
    return obj
