"""Random instance generators and independent oracles shared by the test modules."""
import random
from collections import deque

import numpy as np

from casmc import formula as sf
from casmc.closure import ClosureSpace, SpaceRelation
from casmc.meanfield import formula as pf
from casmc.meanfield.model import PopulationModel
from casmc.slcs import SpatialModel
from casmc.temporal import SnapshotModel

DIRECTIONS = ["forward", "inverse", "symmetric"]
ATOMS = ["p", "q", "r"]


def path_space(direction="symmetric"):
    """a -> b -> c as points 0, 1, 2."""
    return ClosureSpace(SpaceRelation(3, [(0, 1), (1, 2)]), direction)


def random_space(rng, max_points=50, direction=None):
    n = rng.randint(1, max_points)
    density = rng.random() * 0.3
    edges = [(a, b) for a in range(n) for b in range(n) if rng.random() < density]
    return ClosureSpace(SpaceRelation(n, edges), direction or rng.choice(DIRECTIONS))


def random_point_set(rng, space, p=None):
    p = rng.random() if p is None else p
    return space.point_set([i for i in range(space.size) if rng.random() < p])


def random_model(rng, max_points=12, n_atoms=3):
    space = random_space(rng, max_points)
    atoms = ATOMS[:rng.randint(1, n_atoms)]
    sets = {a: [i for i in range(space.size) if rng.random() < rng.random()] for a in atoms}
    return SpatialModel.from_sets(space, sets)


CORE_BINARY = [sf.And, sf.Surrounded, sf.Surrounded, sf.Propagate, sf.Reach]
CORE_UNARY = [sf.Not, sf.Near]


def random_core_formula(rng, atoms, depth):
    if depth == 0 or rng.random() < 0.2:
        return sf.Top() if rng.random() < 0.1 else sf.Atom(rng.choice(atoms))
    if rng.random() < 0.4:
        return rng.choice(CORE_UNARY)(random_core_formula(rng, atoms, depth - 1))
    return rng.choice(CORE_BINARY)(random_core_formula(rng, atoms, depth - 1),
                                   random_core_formula(rng, atoms, depth - 1))


SPATIAL_UNARY = [sf.Not, sf.Near, sf.Somewhere, sf.Everywhere]
SPATIAL_BINARY = [sf.And, sf.Or, sf.Implies, sf.Surrounded, sf.Propagate, sf.Reach]
TEMPORAL_UNARY = [sf.EX, sf.AX, sf.EF, sf.AF, sf.EG, sf.AG]
TEMPORAL_BINARY = [sf.EU, sf.AU]


def random_formula(rng, atoms, depth, temporal=False):
    """Random AST over the full surface grammar (sugar included)."""
    if depth == 0 or rng.random() < 0.15:
        r = rng.random()
        if r < 0.1:
            return sf.Top()
        if r < 0.2:
            return sf.Bottom()
        return sf.Atom(rng.choice(atoms))
    unary = SPATIAL_UNARY + (TEMPORAL_UNARY if temporal else [])
    binary = SPATIAL_BINARY + (TEMPORAL_BINARY if temporal else [])
    if rng.random() < 0.4:
        return rng.choice(unary)(random_formula(rng, atoms, depth - 1, temporal))
    return rng.choice(binary)(random_formula(rng, atoms, depth - 1, temporal),
                              random_formula(rng, atoms, depth - 1, temporal))


def random_snapshot_model(rng, max_states=6, max_points=10):
    space = random_space(rng, max_points)
    k = rng.randint(1, max_states)
    trans = {(s, rng.randrange(k)) for s in range(k)}
    trans |= {(a, b) for a in range(k) for b in range(k) if rng.random() < 0.25}
    val = {}
    for s in range(k):
        for x in range(space.size):
            names = {a for a in ATOMS if rng.random() < 0.4}
            if names:
                val[(s, x)] = names
    return SnapshotModel(space, k, trans, val, initial_state=0, atoms=ATOMS)


# ------------------------------------------------------------------ mean field

def random_population_model(rng, max_states=5):
    S = rng.randint(2, max_states)
    states = [f"s{i}" for i in range(S)]
    rules = {}
    budget = 1.0 / S  # each off-diagonal entry stays below 1/S so rows stay stochastic
    for a in states:
        for b in states:
            if a == b or rng.random() < 0.3:
                continue
            x = rng.choice(states)
            c0 = rng.random() * budget
            c1 = rng.random() * (budget - c0)
            shape = rng.random()
            if shape < 0.4:
                expr = f"{c0!r}"
            elif shape < 0.8:
                expr = f"{c0!r} + {c1!r} * m[{x}]"
            else:
                expr = f"min({budget!r}, {c0!r} + {2 * c1!r} * m[{x}] * m[{rng.choice(states)}])"
            rules[(a, b)] = expr
    w = [rng.random() for _ in states]
    init = {s: v / sum(w) for s, v in zip(states, w)}
    # fix rounding so the fractions sum to exactly 1 within tolerance
    init[states[-1]] = 1.0 - sum(init[s] for s in states[:-1])
    return PopulationModel(states, rules, init)


def random_pctl(rng, states, nesting, max_k=10, depth=3):
    ops = ["<", "<=", ">=", ">"]
    if depth == 0 or (nesting == 0 and rng.random() < 0.5):
        r = rng.random()
        if r < 0.15:
            return pf.PTrue()
        if r < 0.75:
            return pf.LocalAtom(rng.choice(states))
        terms = tuple((s, round(rng.uniform(-1, 1), 3)) for s in rng.sample(states, rng.randint(1, len(states))))
        return pf.OccPredicate(terms, rng.choice(ops), round(rng.uniform(-0.5, 0.5), 3))
    r = rng.random()
    if nesting > 0 and r < 0.6:
        if rng.random() < 0.3:
            path = pf.Next(random_pctl(rng, states, nesting - 1, max_k, depth - 1))
        else:
            path = pf.BoundedUntil(random_pctl(rng, states, nesting - 1, max_k, depth - 1),
                                   rng.randint(0, max_k),
                                   random_pctl(rng, states, nesting - 1, max_k, depth - 1))
        return pf.Prob(rng.choice(ops), rng.random(), path)
    if r < 0.75:
        return pf.PNot(random_pctl(rng, states, nesting, max_k, depth - 1))
    node = pf.PAnd if rng.random() < 0.5 else pf.POr
    return node(random_pctl(rng, states, nesting, max_k, depth - 1),
                random_pctl(rng, states, nesting, max_k, depth - 1))


def random_prob_formula(rng, states, max_nesting=3, max_k=10):
    """A top-level ``P`` formula with nesting between 1 and ``max_nesting``."""
    f = random_pctl(rng, states, max_nesting, max_k)
    while not isinstance(f, pf.Prob):
        f = random_pctl(rng, states, max_nesting, max_k)
    return f


# ------------------------------------------------------------------ maze

WALL, FLOOR, EXIT = 0, 255, 160
MAZE_CONFIG = """\
adjacency 4
atom wall: gray < 128
atom floor: gray >= 128
atom exit: gray >= 128, gray < 200
"""
MAZE_FORMULA = "reach(floor, exit)"


def generate_maze(size=32, seed=7, blocks=6):
    """Perfect maze by randomized DFS with cells on odd coordinates, two exits
    punched in the border, and ``blocks`` corridor pixels re-walled so that some
    regions are cut off. Returns a uint8 array."""
    rng = random.Random(seed)
    img = np.full((size, size), WALL, dtype=np.uint8)
    cells = (size - 1) // 2
    seen = {(0, 0)}
    stack = [(0, 0)]
    img[1, 1] = FLOOR
    links = []
    while stack:
        r, c = stack[-1]
        nbrs = [(r + dr, c + dc) for dr, dc in ((0, 1), (1, 0), (0, -1), (-1, 0))
                if 0 <= r + dr < cells and 0 <= c + dc < cells and (r + dr, c + dc) not in seen]
        if not nbrs:
            stack.pop()
            continue
        nr, nc = rng.choice(nbrs)
        img[2 * nr + 1, 2 * nc + 1] = FLOOR
        link = (r + nr + 1, c + nc + 1)
        img[link] = FLOOR
        links.append(link)
        seen.add((nr, nc))
        stack.append((nr, nc))
    for link in rng.sample(links, blocks):
        img[link] = WALL
    img[0, 1] = EXIT
    last = 2 * (cells - 1) + 1
    img[last, 0] = EXIT
    return img


def bfs_reach(img, allowed_value_test, target_test):
    """Pixels (row-major ids) connected to a target pixel through allowed pixels,
    4-neighbourhood; straightforward queue BFS on the pixel grid."""
    h, w = img.shape
    seen = set()
    q = deque()
    for r in range(h):
        for c in range(w):
            if target_test(img[r, c]):
                seen.add((r, c))
                q.append((r, c))
    while q:
        r, c = q.popleft()
        for nr, nc in ((r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)):
            if 0 <= nr < h and 0 <= nc < w and (nr, nc) not in seen and allowed_value_test(img[nr, nc]):
                seen.add((nr, nc))
                q.append((nr, nc))
    return sorted(r * w + c for r, c in seen)


def maze_reach_oracle(img):
    return bfs_reach(img, lambda v: v >= 128, lambda v: 128 <= v < 200)


def raw_ppm(img, ids, color=(255, 0, 0)):
    """P6 bytes of a gray image with pixels ``ids`` painted; written by hand."""
    h, w = img.shape
    body = bytearray()
    hit = set(ids)
    for i, v in enumerate(img.ravel()):
        body += bytes(color) if i in hit else bytes((v, v, v))
    return b"P6\n%d %d\n255\n" % (w, h) + bytes(body)


def raw_pgm(img):
    h, w = img.shape
    return b"P5\n%d %d\n255\n" % (w, h) + img.tobytes()
