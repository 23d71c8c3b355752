"""Exact-sequence bookkeeping for equivariant homotopy classes.

The classes ``pi_0((Omega^d X)^Z2)`` of a Z2-space ``X`` are attacked with
the long exact sequences of the pairs ``(Omega^l X, (Omega^l X)^Z2)`` for
``l = 0 .. d-1``, glued by the isomorphism

    pi_D((Omega^{l+1} X)^Z2)  ~=  pi_{D+1}(Omega^l X, (Omega^l X)^Z2).

A :class:`SequenceLadder` holds one row per loop level.  Row ``l`` runs over
degrees ``K = d-l, ..., 1`` and ends in degree 0::

    fixed_K -> total_K -> pair_K -> fixed_{K-1} -> ... -> pair_1 -> fixed_0 -> total_0

Slots are filled from a :class:`GroupDataFile` and from user hints, then
:func:`propagate` runs the exactness rules to a fixed point.  Every change of
knowledge is appended to a trace which can be replayed.
"""

from __future__ import annotations

import copy
import itertools
import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .abgroup import AbGroup, ExtensionBoundError, extension_candidates, hom_is_zero

ACTIONS = ("BDI", "CII")
FIELDS = {"C": "complex", "R": "real", "H": "quaternionic"}
PROVENANCES = ("tabulated", "standard-reference", "user")
ZERO = AbGroup()


class ExactSequenceError(ValueError):
    pass


class DataFileError(ExactSequenceError):
    pass


class InconsistencyError(ExactSequenceError):
    def __init__(self, node: str, message: str):
        super().__init__(f"inconsistent at node {node}: {message}")
        self.node = node


# -- spaces and terms -------------------------------------------------------


@dataclass(frozen=True)
class Stiefel:
    n: int
    m: int
    field: str = "C"

    def __post_init__(self):
        if self.field not in FIELDS:
            raise ExactSequenceError(f"unknown field {self.field!r}")
        if not 0 <= self.n <= self.m or self.m < 1:
            raise ExactSequenceError(f"need 0 <= n <= m and m >= 1, got n={self.n}, m={self.m}")

    @property
    def codim(self) -> int:
        return self.m - self.n

    @property
    def family(self) -> str:
        return FIELDS[self.field]

    def __str__(self):
        return f"V_{self.n}({self.field}^{self.m})"


@dataclass(frozen=True)
class Z2Target:
    """A complex Stiefel manifold with one of the canonical time-reversal actions."""

    space: Stiefel
    action: str

    def __post_init__(self):
        if self.action not in ACTIONS:
            raise ExactSequenceError(f"unknown action tag {self.action!r}; expected one of {', '.join(ACTIONS)}")
        if self.space.field != "C":
            raise ExactSequenceError("the Z2 target must be a complex Stiefel manifold")
        if self.action == "CII" and (self.space.n % 2 or self.space.m % 2):
            raise ExactSequenceError("CII action needs even n and m")

    def fixed_space(self) -> Stiefel:
        n, m = self.space.n, self.space.m
        if self.action == "BDI":
            return Stiefel(n, m, "R")
        return Stiefel(n // 2, m // 2, "H")

    def __str__(self):
        return f"{self.space} [{self.action}]"


KINDS = ("absolute", "relative", "fixed", "equivariant_loop")


def _loop(x: str, j: int) -> str:
    return x if j == 0 else (f"Omega {x}" if j == 1 else f"Omega^{j} {x}")


@dataclass(frozen=True)
class HomotopyTerm:
    kind: str
    degree: int
    loop: int
    target: Z2Target

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ExactSequenceError(f"unknown term kind {self.kind!r}")
        if self.degree < 0 or self.loop < 0:
            raise ExactSequenceError("degree and loop exponent must be nonnegative")
        if self.kind == "relative" and self.degree < 1:
            raise ExactSequenceError("relative homotopy needs degree >= 1")
        if self.kind == "fixed" and self.loop:
            raise ExactSequenceError("fixed-set terms carry no loops; use equivariant_loop")

    @property
    def pointed(self) -> bool:
        """Degree-0 terms of the unlooped spaces are only pointed sets."""
        return self.degree == 0 and self.loop == 0 and self.kind in ("absolute", "fixed")

    def __str__(self):
        x = str(self.target.space)
        lx = _loop(x, self.loop)
        wrap = f"({lx})" if self.loop else lx
        if self.kind == "absolute":
            return f"pi_{self.degree}({lx})"
        if self.kind == "fixed":
            return f"pi_{self.degree}({x}^Z2)"
        if self.kind == "equivariant_loop":
            return f"pi_{self.degree}({wrap}^Z2)"
        return f"pi_{self.degree}({lx}, {wrap}^Z2)"


def apply_lemma(term: HomotopyTerm) -> HomotopyTerm:
    """``pi_D((Omega^j X)^Z2) -> pi_{D+1}(Omega^{j-1} X, (Omega^{j-1} X)^Z2)`` for ``j >= 1``."""
    if term.kind != "equivariant_loop" or term.loop < 1:
        raise ExactSequenceError(f"cannot rewrite {term}: needs an equivariant loop term with j >= 1")
    return HomotopyTerm("relative", term.degree + 1, term.loop - 1, term.target)


# -- group data -------------------------------------------------------------


def _match(spec, value: int) -> bool:
    if spec == "any":
        return True
    if isinstance(spec, int):
        return value == spec
    s = str(spec)
    if s.startswith(">="):
        return value >= int(s[2:])
    return value == int(s)


@dataclass(frozen=True)
class DataEntry:
    family: str
    degree: object
    codim: object
    m: object
    group: AbGroup
    provenance: str
    pointed: bool = False
    note: str = ""

    def matches(self, space: Stiefel, degree: int) -> bool:
        return (self.family == space.family and _match(self.degree, degree)
                and _match(self.codim, space.codim) and _match(self.m, space.m))


@dataclass
class GroupDataFile:
    entries: list[DataEntry]
    name: str = "builtin"

    @classmethod
    def from_obj(cls, obj, name: str = "user") -> "GroupDataFile":
        raw = obj["entries"] if isinstance(obj, dict) else obj
        out = []
        for i, e in enumerate(raw):
            prov = e.get("provenance")
            if not prov or not isinstance(prov, str):
                raise DataFileError(f"{name}: entry {i} has no provenance")
            if e.get("family") not in FIELDS.values():
                raise DataFileError(f"{name}: entry {i} has unknown family {e.get('family')!r}")
            try:
                g = AbGroup.parse(str(e["group"]))
            except (KeyError, ValueError) as exc:
                raise DataFileError(f"{name}: entry {i}: {exc}") from None
            out.append(DataEntry(e["family"], e.get("degree", "any"), e.get("codim", "any"),
                                 e.get("m", "any"), g, prov, bool(e.get("pointed", False)),
                                 e.get("note", "")))
        return cls(out, name)

    @classmethod
    def load(cls, path) -> "GroupDataFile":
        p = Path(path)
        try:
            obj = json.loads(p.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise DataFileError(f"{p}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
        return cls.from_obj(obj, str(p))

    @classmethod
    def builtin(cls) -> "GroupDataFile":
        return _builtin_data()

    def merged(self, other: "GroupDataFile") -> "GroupDataFile":
        """Entries of ``other`` take precedence over ours."""
        return GroupDataFile(list(other.entries) + list(self.entries), f"{other.name}+{self.name}")

    def lookup(self, space: Stiefel, degree: int) -> DataEntry | None:
        hits = [e for e in self.entries if e.matches(space, degree)]
        if not hits:
            return None
        # the first hit wins; later hits from the same source must agree
        first = hits[0]
        for h in hits[1:]:
            if h.provenance == first.provenance and h.group != first.group:
                raise DataFileError(
                    f"{self.name}: conflicting entries for pi_{degree}({space}): {first.group} vs {h.group}")
        return first


@lru_cache(maxsize=1)
def _builtin_data() -> GroupDataFile:
    text = resources.files("rigidity.data").joinpath("stiefel_groups.json").read_text(encoding="utf-8")
    return GroupDataFile.from_obj(json.loads(text), "builtin")


# -- ladder -----------------------------------------------------------------


def slot_name(kind: str, degree: int, level: int) -> str:
    return f"{kind}{degree}@{level}"


_SLOT_RE = re.compile(r"^(fixed|total|pair)(\d*)@(?:level)?(\d+)$")


def parse_slot(text: str) -> str:
    """Normalize ``"pair@level0"``, ``"pair1@0"`` or ``"fixed0@level1"`` to a slot name."""
    m = _SLOT_RE.match(text.strip())
    if not m:
        raise ExactSequenceError(f"cannot parse slot {text!r}; expected e.g. pair@level0 or fixed0@1")
    kind, deg, lvl = m.group(1), m.group(2), int(m.group(3))
    if deg == "":
        deg = 0 if kind == "fixed" else 1
    return slot_name(kind, int(deg), lvl)


@dataclass(frozen=True)
class Hint:
    slot: str
    group: AbGroup
    provenance: str = "user"

    @classmethod
    def parse(cls, text: str, provenance: str = "user") -> "Hint":
        if "=" not in text:
            raise ExactSequenceError(f"cannot parse hint {text!r}; expected slot=group")
        lhs, rhs = text.split("=", 1)
        return cls(parse_slot(lhs), AbGroup.parse(rhs), provenance)


@dataclass(frozen=True)
class TraceEntry:
    step: int
    rule: str
    node: str
    value: tuple[str, ...]
    tag: str
    detail: str = ""

    def __str__(self):
        val = "{" + ", ".join(self.value) + "}"
        return f"[{self.step:03d}] {self.rule:<14} {self.node:<16} {val:<24} ({self.tag}) {self.detail}".rstrip()


@dataclass
class SequenceLadder:
    target: Z2Target
    d: int
    rows: list[list[str]]
    terms: dict[str, HomotopyTerm]
    links: list[tuple[str, str, str]]             # (a, b, tag)
    parent: dict[str, str]
    knowledge: dict[str, frozenset | None]         # keyed by class root
    maps: dict[tuple[int, int], set[str]]
    trace: list[TraceEntry] = field(default_factory=list)

    def root(self, slot: str) -> str:
        while self.parent[slot] != slot:
            slot = self.parent[slot]
        return slot

    def know(self, slot: str) -> frozenset | None:
        return self.knowledge[self.root(slot)]

    def pointed(self, slot: str) -> bool:
        return self.terms[slot].pointed

    def log(self, rule, node, value, tag, detail=""):
        vals = tuple(str(g) for g in sorted(value)) if isinstance(value, frozenset) else tuple(value)
        self.trace.append(TraceEntry(len(self.trace), rule, node, vals, tag, detail))

    def narrow(self, slot: str, cands, rule: str, tag: str, detail: str = "") -> bool:
        cands = frozenset(cands)
        cur = self.know(slot)
        new = cands if cur is None else cur & cands
        if not new:
            have = "unknown" if cur is None else "{" + ", ".join(sorted(map(str, cur))) + "}"
            raise InconsistencyError(
                slot, f"{rule} requires one of {{{', '.join(sorted(map(str, cands)))}}} but slot holds {have}")
        if new == cur:
            return False
        self.knowledge[self.root(slot)] = new
        self.log(rule, slot, new, tag, detail)
        return True

    def mark(self, row: int, i: int, fact: str, rule: str, detail: str = "") -> bool:
        facts = self.maps[(row, i)]
        if fact in facts:
            return False
        facts.add(fact)
        a, b = self.rows[row][i], self.rows[row][i + 1]
        self.log(rule, f"{a}->{b}", (fact,), "exactness", detail)
        return True


def _row_slots(d: int, level: int) -> list[str]:
    top = d - level
    out = []
    for k in range(top, 0, -1):
        out += [slot_name("fixed", k, level), slot_name("total", k, level), slot_name("pair", k, level)]
    return out + [slot_name("fixed", 0, level), slot_name("total", 0, level)]


def _term_for(kind: str, degree: int, level: int, target: Z2Target) -> HomotopyTerm:
    if kind == "fixed":
        return HomotopyTerm("fixed" if level == 0 else "equivariant_loop", degree, level, target)
    return HomotopyTerm("absolute" if kind == "total" else "relative", degree, level, target)


def _slot_parts(slot: str) -> tuple[str, int, int]:
    m = _SLOT_RE.match(slot)
    return m.group(1), int(m.group(2)), int(m.group(3))


def empty_ladder(target: Z2Target, d: int) -> SequenceLadder:
    """Ladder structure with every slot unknown and no map facts."""
    if d < 1:
        raise ExactSequenceError("ladder dimension d must be >= 1")
    rows = [_row_slots(d, lvl) for lvl in range(d)]
    terms = {}
    for row in rows:
        for s in row:
            kind, deg, lvl = _slot_parts(s)
            terms[s] = _term_for(kind, deg, lvl, target)
    parent = {s: s for s in terms}
    links = []
    for lvl in range(d - 1):
        for deg in range(0, d - lvl):
            a, b = slot_name("pair", deg + 1, lvl), slot_name("fixed", deg, lvl + 1)
            extended = deg + 1 >= 3 or lvl >= 2
            links.append((a, b, "pattern-extended" if extended else "lemma"))
    # pi_K(Omega^l X) = pi_{K+l}(X): identify total slots of equal K + l
    by_abs: dict[int, list[str]] = {}
    for s in terms:
        kind, deg, lvl = _slot_parts(s)
        if kind == "total" and deg + lvl > 0:
            by_abs.setdefault(deg + lvl, []).append(s)
    for group in by_abs.values():
        group.sort(key=lambda s: _slot_parts(s)[2])
        for a, b in zip(group, group[1:]):
            links.append((a, b, "loop-shift"))
    lad = SequenceLadder(target, d, rows, terms, links, parent, {s: None for s in terms},
                         {(r, i): set() for r, row in enumerate(rows) for i in range(len(row) - 1)})
    for a, b, _ in links:
        ra, rb = lad.root(a), lad.root(b)
        if ra != rb:
            lad.parent[rb] = ra
    return lad


def build_ladder(target: Z2Target, d: int, data: GroupDataFile | None = None,
                 hints=()) -> SequenceLadder:
    """Ladder of ``d`` rows with data-file slots filled and hints applied.

    Absolute slots come from the complex Stiefel data, level-0 fixed slots
    from the fixed-point set (real Stiefel for BDI, quaternionic for CII).
    Slots without data stay unknown.
    """
    data = data or GroupDataFile.builtin()
    lad = empty_ladder(target, d)
    for a, b, tag in lad.links:
        lad.log("link", f"{a}={b}", (), tag,
                "equivariant loop isomorphism" if tag != "loop-shift" else "pi_K(Omega^l X) = pi_{K+l}(X)")
    fixed = target.fixed_space()
    for row in lad.rows:
        for s in row:
            kind, deg, lvl = _slot_parts(s)
            if kind == "total":
                space, degree = target.space, deg + lvl
            elif kind == "fixed" and lvl == 0:
                space, degree = fixed, deg
            else:
                continue
            entry = data.lookup(space, degree)
            if entry is None:
                continue
            lad.narrow(s, {entry.group}, "data", f"data:{entry.provenance}", f"pi_{degree}({space})")
    for h in hints:
        if isinstance(h, str):
            h = Hint.parse(h)
        if h.slot not in lad.terms:
            raise ExactSequenceError(f"hint names slot {h.slot} which is not in the ladder")
        lad.narrow(h.slot, {h.group}, "hint", f"hint:{h.provenance}")
    return lad


# -- propagation ------------------------------------------------------------


def _trivial(k) -> bool:
    return k is not None and k == frozenset({ZERO})


def _nontrivial(k) -> bool:
    return k is not None and ZERO not in k


def _step(lad: SequenceLadder) -> bool:
    changed = False
    for r, row in enumerate(lad.rows):
        L = len(row) - 1
        for i, s in enumerate(row):
            k = lad.know(s)
            # maps out of or into a trivial slot vanish
            if _trivial(k):
                if i > 0:
                    changed |= lad.mark(r, i - 1, "zero", "zero-slot", f"{s} is trivial")
                if i < L:
                    changed |= lad.mark(r, i, "zero", "zero-slot", f"{s} is trivial")
            if i < L:
                t = row[i + 1]
                kt = lad.know(t)
                if (k is not None and kt is not None and not lad.pointed(s) and not lad.pointed(t)
                        and all(hom_is_zero(a, b) for a in k for b in kt)):
                    changed |= lad.mark(r, i, "zero", "hom-zero", f"Hom({s}, {t}) = 0")
            if 0 < i < L:
                fin, fout = lad.maps[(r, i - 1)], lad.maps[(r, i)]
                # exactness at s: im(fin) = ker(fout)
                if "zero" in fin:
                    changed |= lad.mark(r, i, "injective", "exactness", f"incoming map to {s} is zero")
                if "injective" in fout:
                    changed |= lad.mark(r, i - 1, "zero", "exactness", f"outgoing map of {s} is injective")
                if "zero" in fout:
                    changed |= lad.mark(r, i - 1, "surjective", "exactness", f"outgoing map of {s} is zero")
                if "surjective" in fin:
                    changed |= lad.mark(r, i, "zero", "exactness", f"incoming map to {s} is onto")
            # rule (a): a slot whose outgoing map is both zero and injective is trivial
            if i < L and {"zero", "injective"} <= lad.maps[(r, i)]:
                changed |= lad.narrow(s, {ZERO}, "rule-a", "exactness", "0 -> A -> 0")
            if i > 0 and {"zero", "surjective"} <= lad.maps[(r, i - 1)]:
                changed |= lad.narrow(s, {ZERO}, "rule-a", "exactness", "0 -> A -> 0")
            # rule (b): a bijective group map identifies its ends
            if i < L and {"injective", "surjective"} <= lad.maps[(r, i)] and not lad.pointed(s):
                t = row[i + 1]
                kt = lad.know(t)
                if k is not None:
                    changed |= lad.narrow(t, k, "rule-b", "exactness", f"{s} ~= {t}")
                if kt is not None:
                    changed |= lad.narrow(s, kt, "rule-b", "exactness", f"{s} ~= {t}")
                k = lad.know(s)
        # rule (c): short exact 0 -> A -> G -> C -> 0
        for i in range(L - 1):
            a, g, c = row[i], row[i + 1], row[i + 2]
            if lad.pointed(g) or lad.pointed(a):
                continue
            if "injective" not in lad.maps[(r, i)] or "surjective" not in lad.maps[(r, i + 1)]:
                continue
            ka, kc = lad.know(a), lad.know(c)
            if ka is None or kc is None:
                continue
            cands = set()
            try:
                for x, y in itertools.product(sorted(ka), sorted(kc)):
                    cands.update(extension_candidates(x, y))
            except ExtensionBoundError as exc:
                if not any(e.rule == "rule-c" and e.node == g and not e.value for e in lad.trace):
                    lad.log("rule-c", g, (), "extension", str(exc))
                continue
            changed |= lad.narrow(g, cands, "rule-c", "extension", f"0 -> {a} -> {g} -> {c} -> 0")
    return changed


@dataclass(frozen=True)
class SlotStatus:
    slot: str
    term: str
    status: str                 # determined | up-to-extension | unknown
    candidates: tuple[AbGroup, ...]
    pointed: bool

    def __str__(self):
        if self.status == "unknown":
            val = "?"
        elif self.status == "determined":
            val = str(self.candidates[0])
        else:
            val = "{" + ", ".join(map(str, self.candidates)) + "}"
        flag = " (pointed set)" if self.pointed else ""
        return f"{self.slot:<11} {self.term:<40} {self.status:<16} {val}{flag}"


def _candidate_order(k) -> tuple[AbGroup, ...]:
    return tuple(sorted(k))


@dataclass
class ResolutionReport:
    ladder: SequenceLadder
    statuses: dict[str, SlotStatus]

    @property
    def trace(self) -> list[TraceEntry]:
        return self.ladder.trace

    def status(self, slot: str) -> SlotStatus:
        return self.statuses[parse_slot(slot)]

    def replay(self) -> "ResolutionReport":
        """Rebuild the knowledge state from the trace alone."""
        lad = empty_ladder(self.ladder.target, self.ladder.d)
        for e in self.ladder.trace:
            if e.rule == "link" or not e.value:
                continue
            if "->" in e.node:
                a, b = e.node.split("->")
                r, i = _find_map(lad, a, b)
                lad.maps[(r, i)].add(e.value[0])
            else:
                lad.knowledge[lad.root(e.node)] = frozenset(AbGroup.parse(v) for v in e.value)
        lad.trace = list(self.ladder.trace)
        return _report(lad)

    def same_conclusions(self, other: "ResolutionReport") -> bool:
        return (self.statuses == other.statuses
                and all(self.ladder.maps[k] == other.ladder.maps[k] for k in self.ladder.maps))


def _find_map(lad, a, b):
    for r, row in enumerate(lad.rows):
        for i in range(len(row) - 1):
            if row[i] == a and row[i + 1] == b:
                return r, i
    raise ExactSequenceError(f"no map {a} -> {b} in ladder")


def _report(lad: SequenceLadder) -> ResolutionReport:
    st = {}
    for s in lad.terms:
        k = lad.know(s)
        if k is None:
            status, c = "unknown", ()
        elif len(k) == 1:
            status, c = "determined", tuple(k)
        else:
            status, c = "up-to-extension", _candidate_order(k)
        st[s] = SlotStatus(s, str(lad.terms[s]), status, c, lad.pointed(s))
    return ResolutionReport(lad, st)


def propagate(ladder: SequenceLadder, max_rounds: int = 1000) -> ResolutionReport:
    """Run the deduction rules to a fixed point on a copy of ``ladder``."""
    lad = copy.deepcopy(ladder)
    for _ in range(max_rounds):
        if not _step(lad):
            break
    else:
        raise ExactSequenceError("propagation did not reach a fixed point")
    check_exactness(lad)
    return _report(lad)


def check_exactness(lad: SequenceLadder) -> None:
    """Rank and order bookkeeping on every short exact segment with known ends."""
    for r, row in enumerate(lad.rows):
        for i in range(len(row) - 2):
            a, g, c = row[i], row[i + 1], row[i + 2]
            if "injective" not in lad.maps[(r, i)] or "surjective" not in lad.maps[(r, i + 1)]:
                continue
            ka, kg, kc = lad.know(a), lad.know(g), lad.know(c)
            if any(x is None or len(x) != 1 for x in (ka, kg, kc)):
                continue
            (A,), (G,), (C,) = ka, kg, kc
            if lad.pointed(c):
                C = AbGroup.from_cyclic(C.free_rank, C.torsion)
            if G.free_rank != A.free_rank + C.free_rank:
                raise InconsistencyError(g, f"free rank {G.free_rank} != {A.free_rank} + {C.free_rank}")
            if G.is_finite and A.order * C.order != G.order:
                raise InconsistencyError(g, f"order {G.order} != {A.order} * {C.order}")


# -- queries ----------------------------------------------------------------

_QUERY_RE = re.compile(
    r"^\s*pi_?(\d+)\s*\(\s*(?:\(\s*)?(?:Omega(?:\^(\d+))?\s*)?V_?(\d+)\s*\(\s*C\^?(\d+)\s*\)\s*\)?\s*\)?"
    r"\s*\^\s*Z_?2\s*\[\s*([^\]]+?)\s*\]\s*$")


def parse_query(text: str) -> HomotopyTerm:
    """Parse ``pi<D> (Omega^<j> V_<n>(C^<m>))^Z2 [BDI|CII]``."""
    m = _QUERY_RE.match(text)
    if not m:
        raise ExactSequenceError(f"cannot parse query {text!r}; expected 'pi<D> (Omega^<j> V_<n>(C^<m>))^Z2 [BDI|CII]'")
    deg = int(m.group(1))
    has_omega = "Omega" in text
    j = int(m.group(2)) if m.group(2) else (1 if has_omega else 0)
    target = Z2Target(Stiefel(int(m.group(3)), int(m.group(4))), m.group(5).strip())
    if j == 0:
        return HomotopyTerm("fixed", deg, 0, target)
    return HomotopyTerm("equivariant_loop", deg, j, target)


@dataclass
class Derivation:
    query: HomotopyTerm
    rewritten: HomotopyTerm
    slot: str
    report: ResolutionReport

    @property
    def result(self) -> SlotStatus:
        return self.report.statuses[self.slot]

    def trace_lines(self) -> list[str]:
        lines = [f"query      {self.query}",
                 f"lemma      {self.query}  ~=  {self.rewritten}" if self.rewritten != self.query else "",
                 f"slot       {self.slot}"]
        lines = [x for x in lines if x]
        lines += [str(e) for e in self.report.trace]
        lines.append(f"result     {self.result}")
        return lines


def derive_query(query, data: GroupDataFile | None = None, hints=()) -> Derivation:
    """Resolve an equivariant loop term through the ladder."""
    term = parse_query(query) if isinstance(query, str) else query
    if term.kind == "equivariant_loop":
        rel = apply_lemma(term)
        d = term.loop + term.degree
        slot = slot_name("pair", rel.degree, rel.loop)
    elif term.kind == "fixed":
        rel = term
        d = max(term.degree, 1)
        slot = slot_name("fixed", term.degree, 0)
    else:
        raise ExactSequenceError(f"query must be an equivariant term, got {term.kind}")
    lad = build_ladder(term.target, d, data, hints)
    return Derivation(term, rel, slot, propagate(lad))
