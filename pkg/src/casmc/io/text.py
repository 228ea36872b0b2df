"""Line-oriented text formats: graph spaces, valuations, snapshot and population models.

All formats treat ``#`` as a comment to end of line. Loaders check every
invariant at load time and report the first violation with its line number.
"""
from __future__ import annotations

import re
from pathlib import Path

from ..closure import ClosureSpace, Direction, SpaceRelation
from ..errors import CasmcError, FormatError
from ..meanfield.expr import parse_expr
from ..meanfield.model import PopulationModel
from ..slcs import SpatialModel
from ..temporal import SnapshotModel


def _read(source):
    """Accept a path or a text blob (anything containing a newline)."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source):
        path = Path(source)
        try:
            return path.read_text(), str(path)
        except (OSError, UnicodeDecodeError) as e:
            raise FormatError(f"cannot read file: {e}", path=path) from None
    return source, None


def _statements(text):
    """Yield ``(line_no, stripped statement)``; braces become their own statements."""
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        for part in re.split(r"([{}])", line):
            part = part.strip()
            if part:
                yield no, part


def _int(tok, line, path, what):
    try:
        v = int(tok)
    except ValueError:
        raise FormatError(f"expected an integer {what}, got {tok!r}", path, line) from None
    if v < 0:
        raise FormatError(f"{what} must be non-negative", path, line)
    return v


class _GraphBlock:
    def __init__(self, path):
        self.path = path
        self.points = None
        self.edges = []
        self.seen = set()
        self.direction = None

    def feed(self, no, words):
        """Consume a graph statement; return False if it is not one."""
        key = words[0]
        if key == "points":
            if self.points is not None:
                raise FormatError("duplicate 'points' declaration", self.path, no)
            if len(words) != 2:
                raise FormatError("usage: points N", self.path, no)
            self.points = _int(words[1], no, self.path, "point count")
        elif key == "edge":
            if self.points is None:
                raise FormatError("'edge' before 'points'", self.path, no)
            if len(words) != 3:
                raise FormatError("usage: edge i j", self.path, no)
            a = _int(words[1], no, self.path, "point id")
            b = _int(words[2], no, self.path, "point id")
            for v in (a, b):
                if v >= self.points:
                    raise FormatError(f"point {v} outside [0, {self.points})", self.path, no)
            if (a, b) in self.seen:
                raise FormatError(f"duplicate edge {a} {b}", self.path, no)
            self.seen.add((a, b))
            self.edges.append((a, b))
        elif key == "direction":
            if len(words) != 2:
                raise FormatError("usage: direction forward|inverse|symmetric", self.path, no)
            try:
                self.direction = Direction.parse(words[1])
            except CasmcError as e:
                raise FormatError(str(e), self.path, no) from None
        else:
            return False
        return True

    def build(self, direction=None):
        if self.points is None:
            raise FormatError("missing 'points N' declaration", self.path)
        d = direction or self.direction or Direction.FORWARD
        return ClosureSpace(SpaceRelation(self.points, self.edges), d)


def load_space(source, direction=None) -> ClosureSpace:
    """``direction`` (if given) overrides a ``direction`` line in the file."""
    text, path = _read(source)
    block = _GraphBlock(path)
    for no, stmt in _statements(text):
        if not block.feed(no, stmt.split()):
            raise FormatError(f"unknown statement {stmt.split()[0]!r}", path, no)
    if direction is not None and isinstance(direction, str):
        direction = Direction.parse(direction)
    return block.build(direction)


_POINT = re.compile(r"point\s+(\S+)\s*:(.*)$")


def _point_line(stmt, no, path, size):
    m = _POINT.match(stmt)
    if not m:
        raise FormatError("expected 'point i: atom ...'", path, no)
    p = _int(m.group(1), no, path, "point id")
    if p >= size:
        raise FormatError(f"point {p} outside [0, {size})", path, no)
    names = m.group(2).split()
    for n in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
            raise FormatError(f"invalid atom name {n!r}", path, no)
    return p, names


def load_valuation(source, space: ClosureSpace) -> SpatialModel:
    """Valuation file: optional ``atoms a b ...`` then ``point i: a b`` lines."""
    text, path = _read(source)
    declared = None
    val = {}
    used = []
    for no, stmt in _statements(text):
        words = stmt.split()
        if words[0] == "atoms":
            declared = (declared or []) + words[1:]
            continue
        p, names = _point_line(stmt, no, path, space.size)
        if p in val:
            raise FormatError(f"point {p} listed twice", path, no)
        if declared is not None:
            bad = [n for n in names if n not in declared]
            if bad:
                raise FormatError(f"undeclared atom {bad[0]!r}", path, no)
        val[p] = set(names)
        used.extend(n for n in names if n not in used)
    atoms = declared if declared is not None else used
    return SpatialModel(space, list(dict.fromkeys(atoms)), val)


def load_spatial_model(space_source, valuation_source, direction=None) -> SpatialModel:
    return load_valuation(valuation_source, load_space(space_source, direction))


def load_snapshot_model(source, direction=None) -> SnapshotModel:
    text, path = _read(source)
    block = _GraphBlock(path)
    kstates = None
    trans = []
    init = None
    declared = None
    val = {}
    current = None  # state id while inside a state block
    pending = None  # state id awaiting its '{'
    for no, stmt in _statements(text):
        words = stmt.split()
        if pending is not None:
            if stmt != "{":
                raise FormatError("expected '{' after 'state i'", path, no)
            current, pending = pending, None
            continue
        if current is not None:
            if stmt == "}":
                current = None
                continue
            p, names = _point_line(stmt, no, path, block.points)
            key = (current, p)
            if key in val:
                raise FormatError(f"point {p} listed twice for state {current}", path, no)
            val[key] = set(names)
            continue
        if block.feed(no, words):
            continue
        if words[0] == "kstates":
            if len(words) != 2:
                raise FormatError("usage: kstates N", path, no)
            kstates = _int(words[1], no, path, "state count")
            if kstates < 1:
                raise FormatError("need at least one kripke state", path, no)
        elif words[0] == "ktrans":
            if kstates is None:
                raise FormatError("'ktrans' before 'kstates'", path, no)
            if len(words) != 3:
                raise FormatError("usage: ktrans i j", path, no)
            a, b = (_int(w, no, path, "state id") for w in words[1:])
            for v in (a, b):
                if v >= kstates:
                    raise FormatError(f"kripke state {v} outside [0, {kstates})", path, no)
            trans.append((a, b))
        elif words[0] == "kinit":
            if len(words) != 2:
                raise FormatError("usage: kinit i", path, no)
            init = _int(words[1], no, path, "state id")
        elif words[0] == "atoms":
            declared = (declared or []) + words[1:]
        elif words[0] == "state":
            if kstates is None or block.points is None:
                raise FormatError("'state' block before 'points' and 'kstates'", path, no)
            if len(words) != 2:
                raise FormatError("usage: state i { ... }", path, no)
            pending = _int(words[1], no, path, "state id")
            if pending >= kstates:
                raise FormatError(f"kripke state {pending} outside [0, {kstates})", path, no)
        else:
            raise FormatError(f"unknown statement {words[0]!r}", path, no)
    if pending is not None or current is not None:
        raise FormatError("unterminated state block", path)
    if kstates is None:
        raise FormatError("missing 'kstates N' declaration", path)
    if init is None:
        raise FormatError("missing 'kinit i' declaration", path)
    if init >= kstates:
        raise FormatError(f"initial state {init} outside [0, {kstates})", path)
    out = {s for s, _ in trans}
    for s in range(kstates):
        if s not in out:
            raise FormatError(f"kripke state {s} has no outgoing transition", path)
    space = block.build(Direction.parse(direction) if isinstance(direction, str) else direction)
    if declared is not None:
        for (s, p), names in val.items():
            bad = names - set(declared)
            if bad:
                raise FormatError(f"state {s}, point {p}: undeclared atom {sorted(bad)[0]!r}", path)
    try:
        return SnapshotModel(space, kstates, trans, val, init, atoms=declared)
    except CasmcError as e:
        raise FormatError(str(e), path) from None


_RULE = re.compile(r"rule\s+(\S+)\s*->\s*(\S+)\s*:(.*)$")


def load_population_model(source) -> PopulationModel:
    """``states``, ``init s:x ...``, ``rule a -> b : expr`` lines, optional ``population N``."""
    text, path = _read(source)
    states = None
    init = None
    rules = {}
    population = None
    for no, stmt in _statements(text):
        words = stmt.split()
        key = words[0]
        if key == "states":
            if states is not None:
                raise FormatError("duplicate 'states' declaration", path, no)
            states = words[1:]
            if not states or len(set(states)) != len(states):
                raise FormatError("states must be a non-empty list of distinct names", path, no)
        elif key == "init":
            if states is None:
                raise FormatError("'init' before 'states'", path, no)
            init = {}
            for item in re.findall(r"(\S+?)\s*:\s*(\S+)", stmt[len("init"):]):
                name, val = item
                if name not in states:
                    raise FormatError(f"undeclared state {name!r}", path, no)
                try:
                    init[name] = float(val)
                except ValueError:
                    raise FormatError(f"bad fraction {val!r}", path, no) from None
                if init[name] < 0:
                    raise FormatError(f"negative fraction for {name!r}", path, no)
            if abs(sum(init.values()) - 1.0) > 1e-9:
                raise FormatError(f"initial fractions sum to {sum(init.values())!r}, not 1", path, no)
        elif key == "rule":
            if states is None:
                raise FormatError("'rule' before 'states'", path, no)
            m = _RULE.match(stmt)
            if not m:
                raise FormatError("usage: rule a -> b : expression", path, no)
            a, b, expr = m.groups()
            for s in (a, b):
                if s not in states:
                    raise FormatError(f"undeclared state {s!r}", path, no)
            if a == b:
                raise FormatError("self-loop rules are implicit", path, no)
            if (a, b) in rules:
                raise FormatError(f"duplicate rule {a} -> {b}", path, no)
            try:
                rules[(a, b)] = parse_expr(expr, {s: i for i, s in enumerate(states)}, line=no)
            except FormatError as e:
                raise FormatError(str(e), path, no) from None
        elif key == "population":
            if len(words) != 2:
                raise FormatError("usage: population N", path, no)
            population = _int(words[1], no, path, "population size")
            if population < 1:
                raise FormatError("population must be positive", path, no)
        else:
            raise FormatError(f"unknown statement {key!r}", path, no)
    if states is None:
        raise FormatError("missing 'states' declaration", path)
    if init is None:
        raise FormatError("missing 'init' declaration", path)
    try:
        model = PopulationModel(states, rules, init, population)
        model.kernel(model.initial, time=0)
    except CasmcError as e:
        raise FormatError(f"model invalid at m(0): {e}", path) from None
    return model
