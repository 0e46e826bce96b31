"""Finite relational signatures and structures.

Element identifiers are strings and the universe tuple order is the
canonical iteration order for every algorithm in the package.  All
operations are pure; structures are immutable and hashable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Sequence


class InputError(ValueError):
    """Malformed input: bad structure, signature mismatch, missing data."""


class GuardExceeded(InputError):
    """A configured resource guard (size cap) was exceeded."""


EQUALITY_SYMBOL = "I"


# ---------------------------------------------------------------------------
# signatures


@dataclass(frozen=True)
class Signature:
    """A finite relational signature: relation symbols with arities >= 1."""

    relations: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.relations]
        if len(set(names)) != len(names):
            raise InputError("duplicate relation symbol in signature")
        for name, arity in self.relations:
            if arity < 1:
                raise InputError(f"arity of {name} must be >= 1")
        object.__setattr__(
            self, "relations", tuple(sorted(self.relations))
        )

    @classmethod
    def of(cls, **arities: int) -> "Signature":
        return cls(tuple(arities.items()))

    @cached_property
    def arity(self) -> Mapping[str, int]:
        return dict(self.relations)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.relations)

    @property
    def is_modal(self) -> bool:
        return all(arity in (1, 2) for _, arity in self.relations)

    def unary_symbols(self) -> tuple[str, ...]:
        return tuple(n for n, a in self.relations if a == 1)

    def binary_symbols(self) -> tuple[str, ...]:
        return tuple(n for n, a in self.relations if a == 2)

    def with_equality(self) -> "Signature":
        """The signature extended with the designated equality symbol."""
        if EQUALITY_SYMBOL in self.arity:
            raise InputError(
                f"signature already uses the reserved symbol {EQUALITY_SYMBOL!r}"
            )
        return Signature(self.relations + ((EQUALITY_SYMBOL, 2),))

    def without_equality(self) -> "Signature":
        if EQUALITY_SYMBOL not in self.arity:
            raise InputError(f"signature has no {EQUALITY_SYMBOL!r} symbol")
        return Signature(
            tuple((n, a) for n, a in self.relations if n != EQUALITY_SYMBOL)
        )


# ---------------------------------------------------------------------------
# structures


@dataclass(frozen=True)
class Structure:
    """A finite structure: ordered universe plus relation interpretations."""

    sig: Signature
    universe: tuple[str, ...]
    rels: tuple[tuple[str, frozenset[tuple[str, ...]]], ...]

    @classmethod
    def make(
        cls,
        sig: Signature,
        universe: Sequence[str],
        rels: Mapping[str, Iterable[Sequence[str]]] | None = None,
    ) -> "Structure":
        rels = rels or {}
        unknown = set(rels) - set(sig.arity)
        if unknown:
            raise InputError(f"interpretation for unknown symbol(s) {sorted(unknown)}")
        table = tuple(
            (name, frozenset(tuple(t) for t in rels.get(name, ())))
            for name in sig.symbols
        )
        return cls(sig, tuple(universe), table)

    @cached_property
    def interp(self) -> Mapping[str, frozenset[tuple[str, ...]]]:
        return dict(self.rels)

    def tuples(self, symbol: str) -> frozenset[tuple[str, ...]]:
        return self.interp[symbol]

    @cached_property
    def index(self) -> Mapping[str, int]:
        return {el: i for i, el in enumerate(self.universe)}

    def __len__(self) -> int:
        return len(self.universe)

    def replace_rels(
        self, rels: Mapping[str, Iterable[Sequence[str]]]
    ) -> "Structure":
        return Structure.make(self.sig, self.universe, rels)

    def rename(self, mapping: Mapping[str, str]) -> "Structure":
        """Relabel the universe along a bijective mapping."""
        return Structure.make(
            self.sig,
            [mapping[e] for e in self.universe],
            {
                sym: {tuple(mapping[x] for x in t) for t in ts}
                for sym, ts in self.rels
            },
        )

    def induced(self, elements: Sequence[str]) -> "Structure":
        """Induced substructure on `elements` (kept in the given order)."""
        keep = set(elements)
        return Structure.make(
            self.sig,
            list(elements),
            {
                sym: {t for t in ts if all(x in keep for x in t)}
                for sym, ts in self.rels
            },
        )


@dataclass(frozen=True)
class PointedStructure:
    """A structure over a modal signature with a distinguished element."""

    base: Structure
    point: str

    def __post_init__(self):
        if not self.base.sig.is_modal:
            raise InputError("pointed structures require a modal signature")
        if self.point not in self.base.index:
            raise InputError(f"point {self.point!r} not in the universe")

    def __len__(self) -> int:
        return len(self.base)


def validate(raw: Structure) -> list[str]:
    """All invariant violations of `raw`, empty iff well formed."""
    problems = []
    seen = set()
    for el in raw.universe:
        if el in seen:
            problems.append(f"duplicate element {el!r}")
        seen.add(el)
    declared = set(dict(raw.rels))
    for name in raw.sig.symbols:
        if name not in declared:
            problems.append(f"missing interpretation for {name}")
    for name, tuples in raw.rels:
        if name not in raw.sig.arity:
            problems.append(f"interpretation for unknown symbol {name}")
            continue
        arity = raw.sig.arity[name]
        for t in tuples:
            if len(t) != arity:
                problems.append(f"{name}: tuple {t} has length {len(t)}, want {arity}")
            for x in t:
                if x not in seen:
                    problems.append(f"{name}: tuple {t} mentions unknown element {x!r}")
    return problems


# ---------------------------------------------------------------------------
# Gaifman graphs


@dataclass(frozen=True)
class GaifmanGraph:
    vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]]

    def neighbours(self, v: str) -> set[str]:
        return {next(iter(e - {v})) for e in self.edges if v in e}

    def adjacent(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.edges


def gaifman(struct: Structure) -> GaifmanGraph:
    """Edges between distinct elements co-occurring in some related tuple."""
    edges = set()
    for _, tuples in struct.rels:
        for t in tuples:
            for a, b in itertools.combinations(set(t), 2):
                edges.add(frozenset((a, b)))
    return GaifmanGraph(struct.universe, frozenset(edges))


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class Hom:
    """A candidate homomorphism given by a total table on the domain."""

    domain: Structure
    codomain: Structure
    table: tuple[tuple[str, str], ...]

    @classmethod
    def make(cls, domain: Structure, codomain: Structure, mapping: Mapping[str, str]) -> "Hom":
        return cls(domain, codomain, tuple(sorted(mapping.items())))

    @cached_property
    def mapping(self) -> Mapping[str, str]:
        return dict(self.table)

    def __call__(self, el: str) -> str:
        return self.mapping[el]

    def compose(self, other: "Hom") -> "Hom":
        """self after other (other's codomain must be self's domain)."""
        if other.codomain.universe != self.domain.universe:
            raise InputError("composition mismatch")
        return Hom.make(
            other.domain,
            self.codomain,
            {e: self.mapping[other.mapping[e]] for e in other.domain.universe},
        )


def hom_check(h: Hom) -> bool:
    """True iff every related tuple maps to a related tuple."""
    m = h.mapping
    if set(m) != set(h.domain.universe):
        raise InputError("homomorphism table is not total on the domain")
    for x in m.values():
        if x not in h.codomain.index:
            raise InputError(f"table value {x!r} not in the codomain")
    for sym, tuples in h.domain.rels:
        target = h.codomain.tuples(sym)
        for t in tuples:
            if tuple(m[x] for x in t) not in target:
                return False
    return True


def is_embedding(h: Hom) -> bool:
    """True iff h is injective and reflects every relation."""
    if not hom_check(h):
        return False
    m = h.mapping
    values = list(m.values())
    if len(set(values)) != len(values):
        return False
    for sym, _ in h.domain.rels:
        dom_tuples = h.domain.tuples(sym)
        cod_tuples = h.codomain.tuples(sym)
        arity = h.domain.sig.arity[sym]
        for t in itertools.product(h.domain.universe, repeat=arity):
            if tuple(m[x] for x in t) in cod_tuples and t not in dom_tuples:
                return False
    return True


def _constraints_by_max_index(struct: Structure) -> list[list[tuple[str, tuple[str, ...]]]]:
    """For each universe position i, the tuples whose latest element sits at i."""
    idx = struct.index
    out: list[list[tuple[str, tuple[str, ...]]]] = [[] for _ in struct.universe]
    for sym, tuples in struct.rels:
        for t in tuples:
            out[max(idx[x] for x in t)].append((sym, t))
    return out


def find_homs(
    domain: Structure,
    codomain: Structure,
    limit: Optional[int] = None,
) -> list[Hom]:
    """All homomorphisms domain -> codomain by backtracking.

    Deterministic: assignments are explored in universe order on both
    sides, so the result order is lexicographic.
    """
    if domain.sig != codomain.sig:
        raise InputError("signature mismatch")
    n = len(domain.universe)
    constraints = _constraints_by_max_index(domain)
    cod_interp = codomain.interp
    found: list[Hom] = []
    partial: dict[str, str] = {}

    def extend(i: int) -> bool:
        if i == n:
            found.append(Hom.make(domain, codomain, partial))
            return limit is not None and len(found) >= limit
        el = domain.universe[i]
        for b in codomain.universe:
            partial[el] = b
            if all(
                tuple(partial[x] for x in t) in cod_interp[sym]
                for sym, t in constraints[i]
            ):
                if extend(i + 1):
                    return True
        del partial[el]
        return False

    if n == 0:
        return [Hom.make(domain, codomain, {})]
    extend(0)
    return found


def iso_check(a: Structure, b: Structure) -> Optional[Hom]:
    """An isomorphism a -> b if one exists, else None."""
    if a.sig != b.sig:
        raise InputError("signature mismatch")
    if len(a) != len(b):
        return None
    for sym, _ in a.rels:
        if len(a.tuples(sym)) != len(b.tuples(sym)):
            return None
    n = len(a.universe)
    constraints = _constraints_by_max_index(a)
    b_interp = b.interp
    partial: dict[str, str] = {}
    used: set[str] = set()

    def reflects(mapping: Mapping[str, str]) -> bool:
        inv = {v: k for k, v in mapping.items()}
        for sym, tuples in b.rels:
            a_tuples = a.tuples(sym)
            for t in tuples:
                if tuple(inv[x] for x in t) not in a_tuples:
                    return False
        return True

    def extend(i: int) -> Optional[Hom]:
        if i == n:
            if reflects(partial):
                return Hom.make(a, b, partial)
            return None
        el = a.universe[i]
        for cand in b.universe:
            if cand in used:
                continue
            partial[el] = cand
            used.add(cand)
            if all(
                tuple(partial[x] for x in t) in b_interp[sym]
                for sym, t in constraints[i]
            ):
                result = extend(i + 1)
                if result is not None:
                    return result
            used.discard(cand)
        partial.pop(el, None)
        return None

    if n == 0:
        return Hom.make(a, b, {})
    return extend(0)


# ---------------------------------------------------------------------------
# equality expansion and quotient


def i_expand(struct: Structure) -> Structure:
    """Expand with the designated equality symbol interpreted diagonally."""
    sig = struct.sig.with_equality()
    rels = {sym: set(ts) for sym, ts in struct.rels}
    rels[EQUALITY_SYMBOL] = {(a, a) for a in struct.universe}
    return Structure.make(sig, struct.universe, rels)


def i_quotient(struct: Structure) -> Structure:
    """Quotient by the equivalence generated by the equality symbol."""
    if EQUALITY_SYMBOL not in struct.sig.arity:
        raise InputError(f"signature has no {EQUALITY_SYMBOL!r} symbol")
    parent = {e: e for e in struct.universe}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in struct.tuples(EQUALITY_SYMBOL):
        ra, rb = find(a), find(b)
        if ra != rb:
            # keep the earlier universe element as class representative
            if struct.index[ra] > struct.index[rb]:
                ra, rb = rb, ra
            parent[rb] = ra
    cls = {e: find(e) for e in struct.universe}
    universe = []
    for e in struct.universe:
        if cls[e] == e:
            universe.append(e)
    sig = struct.sig.without_equality()
    rels = {
        sym: {tuple(cls[x] for x in t) for t in struct.tuples(sym)}
        for sym in sig.symbols
    }
    return Structure.make(sig, universe, rels)


# ---------------------------------------------------------------------------
# canonical forms and enumeration


_NAMES = "abcdefghijklmnopqrstuvwxyz"


def standard_universe(n: int) -> tuple[str, ...]:
    if n > len(_NAMES):
        raise GuardExceeded(f"standard universes support at most {len(_NAMES)} elements")
    return tuple(_NAMES[:n])


def _encode(struct: Structure, order: Sequence[str]) -> tuple:
    pos = {el: i for i, el in enumerate(order)}
    return tuple(
        tuple(sorted(tuple(pos[x] for x in t) for t in struct.tuples(sym)))
        for sym in struct.sig.symbols
    )


def canonical_form(struct: Structure) -> Structure:
    """The canonical representative of the isomorphism class.

    Minimises the relation encoding over all universe permutations and
    relabels with the standard universe; feasible for small structures.
    """
    n = len(struct.universe)
    if n == 0:
        return Structure.make(struct.sig, [])
    best = None
    for perm in itertools.permutations(struct.universe):
        enc = _encode(struct, perm)
        if best is None or enc < best[0]:
            best = (enc, perm)
    names = standard_universe(n)
    mapping = {el: names[i] for i, el in enumerate(best[1])}
    return struct.rename(mapping)


def canonical_key(struct: Structure) -> str:
    """A deterministic text key identifying the isomorphism class."""
    canon = canonical_form(struct)
    parts = [f"n={len(canon)}"]
    for sym in canon.sig.symbols:
        ts = sorted(canon.tuples(sym))
        parts.append(f"{sym}/{canon.sig.arity[sym]}=" + ",".join("".join(t) for t in ts))
    return ";".join(parts)


def enumerate_structures(sig: Signature, max_size: int) -> Iterator[Structure]:
    """One representative per isomorphism class, sizes 1..max_size.

    Deterministic order: by universe size, then by canonical encoding.
    Intended for max_size <= 5.
    """
    for n in range(1, max_size + 1):
        universe = standard_universe(n)
        perms = list(itertools.permutations(universe))
        spaces = [
            sorted(itertools.product(universe, repeat=arity))
            for _, arity in sig.relations
        ]
        seen = set()
        batch = []
        for choice in itertools.product(*(_powerset(space) for space in spaces)):
            struct = Structure.make(
                sig, universe, {sym: choice[i] for i, (sym, _) in enumerate(sig.relations)}
            )
            enc = min(_encode(struct, perm) for perm in perms)
            if enc in seen:
                continue
            seen.add(enc)
            batch.append((enc, struct))
        for enc, struct in sorted(batch):
            # emit the representative achieving the minimal encoding
            for perm in perms:
                if _encode(struct, perm) == enc:
                    names = {el: universe[i] for i, el in enumerate(perm)}
                    yield struct.rename(names)
                    break


def _powerset(items: Sequence) -> Iterator[tuple]:
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


# ---------------------------------------------------------------------------
# sums and products


def disjoint_union(a: Structure, b: Structure) -> Structure:
    if a.sig != b.sig:
        raise InputError("signature mismatch")
    left = {e: f"{e}@0" for e in a.universe}
    right = {e: f"{e}@1" for e in b.universe}
    rels = {
        sym: {tuple(left[x] for x in t) for t in a.tuples(sym)}
        | {tuple(right[x] for x in t) for t in b.tuples(sym)}
        for sym in a.sig.symbols
    }
    return Structure.make(
        a.sig, [left[e] for e in a.universe] + [right[e] for e in b.universe], rels
    )


def product(a: Structure, b: Structure) -> Structure:
    if a.sig != b.sig:
        raise InputError("signature mismatch")
    pair = {(x, y): f"({x},{y})" for x in a.universe for y in b.universe}
    universe = [pair[(x, y)] for x in a.universe for y in b.universe]
    rels = {}
    for sym in a.sig.symbols:
        ts = set()
        for ta in a.tuples(sym):
            for tb in b.tuples(sym):
                ts.add(tuple(pair[(x, y)] for x, y in zip(ta, tb)))
        rels[sym] = ts
    return Structure.make(a.sig, universe, rels)
