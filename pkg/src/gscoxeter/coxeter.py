"""
Coxeter presentations as rewriting systems.

Given a Coxeter matrix this module builds the three relation families used
for the Gröbner-Shirshov basis:

* involutions ``s s = e``;
* braid relations ``m(s,t) = m(t,s)`` for ``s > t`` with finite order;
* chain relations, one per admissible block sequence ``(s_0,s'_0) .. (s_{k+1},s'_{k+1})``.

It also detects the four block patterns (``C1`` .. ``C4``) whose absence
guarantees that these families already form a Gröbner-Shirshov basis.

Generators are the integers ``1..n``; an infinite order is stored as ``None``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .freealg import Polynomial, Word, contains, format_word
from .rewrite import (
    CompletionOutcome,
    RewriteRule,
    RuleSystem,
    normal_form,
    shirshov_complete,
)

Block = tuple[int, int]

INVOLUTION = "involution"
BRAID = "braid"
CHAIN = "chain"

CONDITION_KINDS = ("C1", "C2", "C3", "C4")


class MatrixError(ValueError):
    pass


@dataclass(frozen=True)
class CoxeterMatrix:
    entries: tuple[tuple[int | None, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if n == 0:
            raise MatrixError("matrix must have at least one generator")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise MatrixError(f"row {i + 1} has {len(row)} entries, expected {n}")
        for i in range(n):
            if rows[i][i] != 1:
                raise MatrixError(f"diagonal entry m[{i + 1}][{i + 1}] must be 1")
            for j in range(n):
                if i == j:
                    continue
                m = rows[i][j]
                if m != rows[j][i]:
                    raise MatrixError(f"matrix is not symmetric at ({i + 1},{j + 1})")
                if m is not None and (not isinstance(m, int) or m < 2):
                    raise MatrixError(
                        f"off-diagonal entry m[{i + 1}][{j + 1}] = {m} must be >= 2 or infinite")

    @property
    def n(self) -> int:
        return len(self.entries)

    def order(self, s: int, t: int) -> int | None:
        return self.entries[s - 1][t - 1]

    def finite(self, s: int, t: int) -> bool:
        return self.entries[s - 1][t - 1] is not None

    @classmethod
    def from_orders(cls, n: int, orders: dict[tuple[int, int], int | None],
                    default: int | None = None) -> CoxeterMatrix:
        """Build from ``{(i, j): m_ij}``; unlisted off-diagonal pairs get ``default``."""
        rows = [[1 if i == j else default for j in range(1, n + 1)] for i in range(1, n + 1)]
        for (i, j), m in orders.items():
            rows[i - 1][j - 1] = m
            rows[j - 1][i - 1] = m
        return cls(tuple(map(tuple, rows)))

    @classmethod
    def parse(cls, text: str) -> CoxeterMatrix:
        """Read ``n`` followed by ``n`` rows; ``0`` or ``inf`` is an infinite order."""
        lines = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise MatrixError("empty matrix file")
        try:
            n = int(lines[0][0])
        except ValueError:
            raise MatrixError(f"first line must be the rank, got {lines[0][0]!r}") from None
        if len(lines[0]) != 1:
            raise MatrixError("first line must contain only the rank")
        if len(lines) != n + 1:
            raise MatrixError(f"expected {n} matrix rows, found {len(lines) - 1}")
        rows = []
        for row in lines[1:]:
            parsed = []
            for tok in row:
                if tok.lower() in ("0", "inf", "∞"):
                    parsed.append(None)
                else:
                    try:
                        parsed.append(int(tok))
                    except ValueError:
                        raise MatrixError(f"bad matrix entry {tok!r}") from None
            rows.append(tuple(parsed))
        return cls(tuple(rows))

    @classmethod
    def load(cls, path: str | Path) -> CoxeterMatrix:
        return cls.parse(Path(path).read_text())

    def to_text(self) -> str:
        out = [str(self.n)]
        for row in self.entries:
            out.append(" ".join("inf" if m is None else str(m) for m in row))
        return "\n".join(out) + "\n"


def type_a(n: int) -> CoxeterMatrix:
    """Symmetric group on ``n + 1`` letters."""
    return CoxeterMatrix.from_orders(n, {(i, i + 1): 3 for i in range(1, n)}, default=2)


def dihedral(m: int) -> CoxeterMatrix:
    return CoxeterMatrix.from_orders(2, {(1, 2): m})


def counterexample_matrix() -> CoxeterMatrix:
    """Rank 4 with m13 = 3, m14 = 2, m34 = 5 and every other pair free."""
    return CoxeterMatrix.from_orders(4, {(1, 3): 3, (1, 4): 2, (3, 4): 5})


def alternating_word(s: int, t: int, length: int) -> Word:
    """``s t s t ...`` with exactly ``length`` letters."""
    if length < 0:
        raise ValueError("negative length")
    return tuple(s if k % 2 == 0 else t for k in range(length))


def rhd(s: int, t: int, M: CoxeterMatrix) -> bool:
    """``s`` is larger than ``t`` and the two commute."""
    return s > t and M.order(s, t) == 2


def next_prime(s: int, t: int, M: CoxeterMatrix) -> int:
    """Partner generator of the following block: ``t`` for even order, ``s`` for odd."""
    m = M.order(s, t)
    if m is None:
        raise ValueError(f"order of s{s} s{t} is infinite")
    return t if m % 2 == 0 else s


def involution_relations(M: CoxeterMatrix) -> list[RewriteRule]:
    return [RewriteRule((s, s), Polynomial.monomial(()), INVOLUTION) for s in range(1, M.n + 1)]


def braid_relations(M: CoxeterMatrix) -> list[RewriteRule]:
    rules = []
    for s in range(1, M.n + 1):
        for t in range(1, s):
            m = M.order(s, t)
            if m is not None:
                rules.append(RewriteRule(alternating_word(s, t, m),
                                         Polynomial.monomial(alternating_word(t, s, m)), BRAID))
    rules.sort(key=lambda r: (len(r.lhs), r.lhs))
    return rules


@dataclass(frozen=True)
class Chain:
    """Block sequence ``(s_0, s'_0), .., (s_{k+1}, s'_{k+1})``."""

    blocks: tuple[Block, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(b) for b in self.blocks))

    @property
    def k(self) -> int:
        return len(self.blocks) - 2

    def orders(self, M: CoxeterMatrix) -> list[int]:
        return [M.order(s, t) for s, t in self.blocks]

    def block_word(self, j: int, M: CoxeterMatrix) -> Word:
        """``(m-1)(s_j, s'_j)``."""
        s, t = self.blocks[j]
        return alternating_word(s, t, M.order(s, t) - 1)

    def last_letter(self, j: int, M: CoxeterMatrix) -> int:
        """Last letter of ``(m-1)(s_j, s'_j)``."""
        s, t = self.blocks[j]
        return s if (M.order(s, t) - 1) % 2 == 1 else t

    def degree(self, M: CoxeterMatrix) -> int:
        ms = self.orders(M)
        return sum(m - 1 for m in ms) + 1

    def words(self, M: CoxeterMatrix) -> tuple[Word, Word]:
        """Both sides of the chain identity; no admissibility check."""
        if len(self.blocks) < 2:
            raise ValueError("a chain needs at least two blocks")
        for s, t in self.blocks:
            if s == t or M.order(s, t) is None:
                raise ValueError(f"block (s{s}, s{t}) has no finite order")
        parts = [self.block_word(j, M) for j in range(len(self.blocks))]
        (s0, t0), (s_last, t_last) = self.blocks[0], self.blocks[-1]
        lhs = sum(parts[:-1], ()) + alternating_word(s_last, t_last, M.order(s_last, t_last))
        rhs = alternating_word(t0, s0, M.order(s0, t0)) + sum(parts[1:], ())
        return lhs, rhs

    def violations(self, M: CoxeterMatrix) -> list[str]:
        """Broken admissibility constraints (empty for a valid chain)."""
        problems = []
        if len(self.blocks) < 2:
            return ["fewer than two blocks"]
        for j, (s, t) in enumerate(self.blocks):
            if not (1 <= s <= M.n and 1 <= t <= M.n) or s == t or M.order(s, t) is None:
                return [f"block {j} has no finite order"]
        s0, t0 = self.blocks[0]
        if not s0 > t0:
            problems.append("first block must have s_0 > s'_0")
        for j, (s, t) in enumerate(self.blocks[1:], start=1):
            if not s < t:
                problems.append(f"block {j} must have s_{j} < s'_{j}")
        for j in range(len(self.blocks) - 1):
            s, t = self.blocks[j]
            if self.blocks[j + 1][1] != next_prime(s, t, M):
                problems.append(f"block {j + 1} partner breaks the parity rule")
            if {s, t} == set(self.blocks[j + 1]):
                problems.append(f"blocks {j} and {j + 1} use the same pair")
        return problems

    def is_valid(self, M: CoxeterMatrix) -> bool:
        return not self.violations(M)

    def __str__(self) -> str:
        return "[" + ", ".join(f"(s{s},s{t})" for s, t in self.blocks) + "]"


def relation_from_chain(chain: Chain, M: CoxeterMatrix) -> RewriteRule:
    problems = chain.violations(M)
    if problems:
        raise ValueError(f"invalid chain {chain}: {'; '.join(problems)}")
    lhs, rhs = chain.words(M)
    return RewriteRule(lhs, Polynomial.monomial(rhs), CHAIN)


# Pair-transition graph: nodes are ordered pairs with finite order; the first
# block of a chain has s > s', every later block s < s'.

def _nodes(M: CoxeterMatrix) -> list[Block]:
    return [(s, t) for s in range(1, M.n + 1) for t in range(1, M.n + 1)
            if s != t and M.finite(s, t)]


def _successors(node: Block, M: CoxeterMatrix, admissible: bool = True) -> list[Block]:
    s, t = node
    t_next = next_prime(s, t, M)
    out = []
    for b in range(1, M.n + 1):
        if b == t_next or not M.finite(b, t_next):
            continue
        if admissible and (b > t_next or {b, t_next} == {s, t}):
            continue
        out.append((b, t_next))
    return out


def _initial_nodes(M: CoxeterMatrix) -> list[Block]:
    return [(s, t) for s, t in _nodes(M) if s > t]


def _walk(M: CoxeterMatrix, bound: int, starts: list[Block], admissible: bool) -> Iterator[Chain]:
    def extend(path: list[Block], body: int):
        # body = letters contributed by the (m-1) parts of every block in path
        node = path[-1]
        if len(path) >= 2 and body + 1 <= bound:
            yield Chain(tuple(path))
        if body + 2 > bound:
            return
        for nxt in _successors(node, M, admissible):
            m = M.order(*nxt)
            if body + m <= bound:
                path.append(nxt)
                yield from extend(path, body + m - 1)
                path.pop()

    for start in starts:
        yield from extend([start], M.order(*start) - 1)


def enumerate_chains(M: CoxeterMatrix, max_relation_degree: int) -> list[Chain]:
    """Every admissible chain whose relation has length at most the bound,
    ordered by (degree, blocks)."""
    if max_relation_degree < 2:
        raise ValueError("degree bound must be at least 2")
    chains = list(_walk(M, max_relation_degree, _initial_nodes(M), admissible=True))
    chains.sort(key=lambda c: (c.degree(M), c.blocks))
    return chains


def family_is_infinite(M: CoxeterMatrix) -> bool:
    """True when the admissible transition graph has a cycle reachable from a first block."""
    reachable: set[Block] = set()
    stack = [nxt for node in _initial_nodes(M) for nxt in _successors(node, M)]
    while stack:
        node = stack.pop()
        if node in reachable:
            continue
        reachable.add(node)
        stack.extend(_successors(node, M))
    # Kahn's algorithm on the reachable subgraph
    indeg = {v: 0 for v in reachable}
    for v in reachable:
        for w in _successors(v, M):
            indeg[w] += 1
    queue = [v for v, d in indeg.items() if d == 0]
    removed = 0
    while queue:
        v = queue.pop()
        removed += 1
        for w in _successors(v, M):
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return removed < len(reachable)


def chain_relations(M: CoxeterMatrix, max_relation_degree: int) -> list[RewriteRule]:
    return [relation_from_chain(c, M) for c in enumerate_chains(M, max_relation_degree)]


def coxeter_system(M: CoxeterMatrix, max_relation_degree: int) -> RuleSystem:
    """Involutions, braid relations and chain relations up to the degree bound."""
    rules = involution_relations(M) + braid_relations(M)
    if max_relation_degree >= 2:
        rules += chain_relations(M, max_relation_degree)
    return RuleSystem(M.n, rules)


def decode_chains(lhs: Word, M: CoxeterMatrix) -> list[Chain]:
    """Admissible chains whose relation has the given left-hand side."""
    found = []
    size = len(lhs)

    def extend(path: list[Block], pos: int):
        s, t = path[-1]
        t_next = next_prime(s, t, M)
        if pos >= size:
            return
        b = lhs[pos]
        if b >= t_next or not M.finite(b, t_next) or {b, t_next} == {s, t}:
            return
        m = M.order(b, t_next)
        if lhs[pos:] == alternating_word(b, t_next, m):
            found.append(Chain(tuple(path) + ((b, t_next),)))
        if lhs[pos:pos + m - 1] == alternating_word(b, t_next, m - 1):
            path.append((b, t_next))
            extend(path, pos + m - 1)
            path.pop()

    if size >= 3:
        s0 = lhs[0]
        for t0 in range(1, s0):
            m = M.finite(s0, t0) and M.order(s0, t0)
            if m and lhs[:m - 1] == alternating_word(s0, t0, m - 1):
                extend([(s0, t0)], m - 1)
    return [c for c in found if c.is_valid(M)]


def is_chain_relation(lhs: Word, rhs: Word, M: CoxeterMatrix) -> bool:
    return any(c.words(M)[1] == rhs for c in decode_chains(lhs, M))


# Obstruction patterns.  Indices i, l refer to block positions in the chain.

def _block_data(blocks: tuple[Block, ...], M: CoxeterMatrix):
    ms = [M.order(s, t) for s, t in blocks]
    ulen = [m - 1 for m in ms]
    x = [s if u % 2 == 1 else t for (s, t), u in zip(blocks, ulen)]
    return ms, ulen, x


def check_condition(kind: str, blocks: tuple[Block, ...], M: CoxeterMatrix, i: int, l: int) -> bool:
    """Literal test of condition ``kind`` at block positions ``i``, ``l``."""
    k = len(blocks) - 2
    if not (0 <= i <= l <= k):
        return False
    ms, ulen, x = _block_data(blocks, M)
    s = [b[0] for b in blocks]
    sp = [b[1] for b in blocks]
    if kind == "C1":
        return (ulen[i] >= 2 and ulen[l + 1] >= 2 and rhd(x[i], s[l + 1], M)
                and all(ulen[j] == 1 and rhd(s[l + 1], s[j], M) for j in range(i + 1, l + 1)))
    if kind in ("C2", "C4"):
        if not (i < l and ulen[i] > 2 and ulen[i + 1] == 1 and x[i] == s[l + 1]):
            return False
        if kind == "C2" and not x[i] > s[i + 1]:
            return False
        if kind == "C4" and not s[i + 1] > x[i]:
            return False
        return (M.order(x[i], s[i + 1]) == 3
                and all(ulen[j] == 1 and rhd(s[l + 1], s[j], M) for j in range(i + 2, l + 1)))
    if kind == "C3":
        if not (ulen[i] >= 2 and ms[i] % 2 == 0):
            return False
        if not all(ulen[j] == 1 for j in range(i + 1, l + 2)):
            return False
        tail = tuple(s[i + 1:l + 2])
        g_lhs = (sp[i + 1], x[i]) + tail
        for mm in range(i + 1, l + 2):
            if not (rhd(sp[i + 1], s[mm], M) and rhd(s[mm], x[i], M)):
                continue
            if not all(rhd(s[mm], s[nn], M) for nn in range(i + 1, mm - 1)):
                continue
            g_rhs = (s[mm], sp[i + 1], x[i]) + tail[:-1]
            if is_chain_relation(g_lhs, g_rhs, M):
                return True
        return False
    raise ValueError(f"unknown condition {kind!r}")


def subrelation_word(kind: str, blocks: tuple[Block, ...], M: CoxeterMatrix, i: int, l: int) -> Word:
    """Leading word of the relation whose occurrence inside the chain's lhs
    makes the pattern an obstruction."""
    _, _, x = _block_data(blocks, M)
    run = tuple(b[0] for b in blocks[i + 1:l + 2])
    if kind in ("C1", "C2"):
        return (x[i],) + run
    return (blocks[i + 1][1], x[i]) + run


@dataclass(frozen=True)
class ConditionWitness:
    kind: str
    chain: Chain
    i: int
    l: int
    subword: Word

    def recheck(self, M: CoxeterMatrix) -> bool:
        lhs, _ = self.chain.words(M)
        return (self.chain.is_valid(M)
                and check_condition(self.kind, self.chain.blocks, M, self.i, self.l)
                and contains(lhs, self.subword))

    def describe(self, M: CoxeterMatrix) -> str:
        return (f"{self.kind}: chain {self.chain} (degree {self.chain.degree(M)}) "
                f"at i={self.i}, l={self.l}; contains {format_word(self.subword)}")


def _cheapest_prefixes(M: CoxeterMatrix) -> dict[Block, tuple[Block, ...]]:
    """Shortest (in letters) admissible prefix reaching each block position."""
    best: dict[Block, tuple[int, tuple[Block, ...]]] = {}
    heap = []
    for node in _initial_nodes(M):
        heapq.heappush(heap, (M.order(*node) - 1, (node,)))
    while heap:
        cost, path = heapq.heappop(heap)
        for nxt in _successors(path[-1], M):
            if nxt in best:
                continue
            best[nxt] = (cost, path)
            heapq.heappush(heap, (cost + M.order(*nxt) - 1, path + (nxt,)))
    return {node: path for node, (_, path) in best.items()}


def _first_block_ok(kind: str, m: int) -> bool:
    if kind == "C1":
        return m - 1 >= 2
    if kind in ("C2", "C4"):
        return m - 1 > 2
    return m - 1 >= 2 and m % 2 == 0


def detect_conditions(M: CoxeterMatrix, max_window: int | None = None) -> list[ConditionWitness]:
    """One minimal-degree witness for every condition kind occurring in the
    chain family (infinite families included).

    Patterns only involve a window of blocks ``i .. l+1`` whose inner blocks
    have order 2, so windows are searched directly on the transition graph
    and attached to the cheapest admissible prefix.
    """
    if max_window is None:
        max_window = M.n + 3
    prefixes = _cheapest_prefixes(M)
    best: dict[str, tuple] = {}
    for start in sorted(_nodes(M)):
        if start[0] > start[1]:
            prefix: tuple[Block, ...] = ()
        elif start in prefixes:
            prefix = prefixes[start]
        else:
            continue
        kinds = [kd for kd in CONDITION_KINDS if _first_block_ok(kd, M.order(*start))]
        if not kinds:
            continue
        stack = [(start,)]
        while stack:
            window = stack.pop()
            if len(window) >= 2:
                for kind in kinds:
                    if check_condition(kind, window, M, 0, len(window) - 2):
                        chain = Chain(prefix + window)
                        i = len(prefix)
                        cand = (chain.degree(M), chain.blocks, i)
                        if kind not in best or cand < best[kind][0]:
                            best[kind] = (cand, chain, i, i + len(window) - 2, window)
            if len(window) < max_window and (len(window) == 1 or M.order(*window[-1]) == 2):
                for nxt in _successors(window[-1], M):
                    stack.append(window + (nxt,))
    witnesses = []
    for kind in CONDITION_KINDS:
        if kind in best:
            _, chain, i, l, _ = best[kind]
            witnesses.append(ConditionWitness(kind, chain, i, l,
                                              subrelation_word(kind, chain.blocks, M, i, l)))
    return witnesses


def scan_conditions(M: CoxeterMatrix, max_relation_degree: int) -> set[str]:
    """Brute force: every condition kind met at any (i, l) of any chain up to the bound."""
    kinds = set()
    for chain in enumerate_chains(M, max_relation_degree):
        k = chain.k
        for i in range(k + 1):
            for l in range(i, k + 1):
                for kind in CONDITION_KINDS:
                    if kind not in kinds and check_condition(kind, chain.blocks, M, i, l):
                        kinds.add(kind)
    return kinds


def gs_guaranteed(M: CoxeterMatrix) -> bool:
    """True when no obstruction pattern C1..C4 occurs in the chain family.

    For the three sufficient matrix shapes of :func:`classify_family` this
    does mean completion adds nothing.  Outside them it is not a proof: e.g.
    m12 = m13 = 4, m23 = 2 has no pattern, yet the braid ``s3 s1 s3 s1``
    overlaps the chain relation ``s3 s1 s2 s1 s2`` in a nontrivial composition.
    """
    return not detect_conditions(M)


def classify_family(M: CoxeterMatrix) -> set[str]:
    """Which of the sufficient shapes ``i``, ``ii``, ``iii`` the matrix has."""
    n = M.n

    def big(m):
        return m is None or m >= 3

    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, i)]
    found = set()
    if all(big(M.order(i, j)) for i, j in pairs):
        found.add("i")
    if all(M.order(i, j) in (2, None) for i, j in pairs):
        found.add("ii")
    if (all(M.order(i, 1) == 2 for i in range(2, n + 1))
            and all(big(M.order(i, j)) for i, j in pairs if j >= 2)):
        found.add("iii")
    return found


def unconstrained_chains(M: CoxeterMatrix, max_relation_degree: int) -> list[Chain]:
    """Block sequences obeying the parity rule but breaking ordering or
    adjacent-pair distinctness, up to the degree bound."""
    starts = _nodes(M)
    chains = [c for c in _walk(M, max_relation_degree, starts, admissible=False)
              if not c.is_valid(M)]
    chains.sort(key=lambda c: (c.degree(M), c.blocks))
    return chains


@dataclass
class UnconstrainedReport:
    status: str
    checked: int
    failures: list[Chain]
    completion: CompletionOutcome


def verify_unconstrained_chains(M: CoxeterMatrix, max_relation_degree: int,
                                cap: int | None = None) -> UnconstrainedReport:
    """Check that every parity-respecting chain identity (admissible or not)
    lies in the ideal: both sides reduce to the same normal form."""
    cap = max(cap or 0, max_relation_degree, 2)
    outcome = shirshov_complete(coxeter_system(M, cap), cap)
    chains = unconstrained_chains(M, max_relation_degree)
    if not outcome.closed:
        return UnconstrainedReport("inconclusive", 0, [], outcome)
    failures = []
    for c in chains:
        lhs, rhs = c.words(M)
        if not normal_form(Polynomial.binomial(lhs, rhs), outcome.system).is_zero():
            failures.append(c)
    return UnconstrainedReport("pass" if not failures else "fail", len(chains), failures, outcome)
