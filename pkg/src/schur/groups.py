"""Finite groups as dense Cayley tables.

Elements are the indices 0..n-1, ``table[i][j]`` is the index of the
product g_i * g_j, and index 0 is the identity in every group this
package constructs.  All structural computations downstream (coset
enumeration, homology, the catalog) speak in these terms.

Types are immutable after construction; derived data (center, derived
subgroup, conjugacy classes, ...) is cached lazily.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

from .errors import SizeError, UndecidedError, ValidationError

# Full associativity check up to this order; random triples above.
FULL_CHECK_LIMIT = 256
RANDOM_TRIPLE_CHECKS = 100_000
PRODUCT_ORDER_CAP = 10**6
ISO_ORDER_CAP = 1024
ISO_NODE_BUDGET = 10**7


def factorize(n: int) -> dict[int, int]:
    """Prime factorization as {prime: exponent}."""
    if n < 1:
        raise ValueError(f"cannot factorize {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(n: int) -> tuple[int, int] | None:
    """(p, e) with n = p**e, or None if n is not a prime power (n=1 -> None)."""
    if n < 2:
        return None
    f = factorize(n)
    if len(f) != 1:
        return None
    [(p, e)] = f.items()
    return p, e


@dataclass(frozen=True)
class AbelianInvariants:
    """A finite abelian group as its invariant-factor chain d_1 | d_2 | ... | d_r.

    Factors are stored ascending, each >= 2; the empty tuple is the
    trivial group.
    """

    factors: tuple[int, ...] = ()

    def __post_init__(self):
        fs = self.factors
        for a, b in zip(fs, fs[1:]):
            if b % a != 0:
                raise ValidationError(f"not a divisibility chain: {fs}")
        if any(d < 2 for d in fs):
            raise ValidationError(f"factors must be >= 2: {fs}")

    @classmethod
    def from_cyclic_orders(cls, orders) -> "AbelianInvariants":
        """Renormalize an arbitrary multiset of cyclic orders to a chain."""
        by_prime: dict[int, list[int]] = {}
        for d in orders:
            if d < 0:
                d = -d
            if d in (0, 1):
                continue
            for p, e in factorize(d).items():
                by_prime.setdefault(p, []).append(e)
        for exps in by_prime.values():
            exps.sort(reverse=True)
        width = max((len(v) for v in by_prime.values()), default=0)
        chain = []
        for i in range(width):
            d = 1
            for p, exps in by_prime.items():
                if i < len(exps):
                    d *= p ** exps[i]
            chain.append(d)
        chain.reverse()
        return cls(tuple(chain))

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    def p_exponents(self, p: int) -> tuple[int, ...]:
        """Exponents a_1 >= a_2 >= ... of the p-part (each factor's p-valuation)."""
        exps = []
        for d in reversed(self.factors):
            e = 0
            while d % p == 0:
                d //= p
                e += 1
            if e:
                exps.append(e)
        return tuple(exps)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " x ".join(f"C{d}" for d in self.factors)


@dataclass(frozen=True)
class GroupFingerprint:
    """Cheap isomorphism invariants; equality is necessary, never sufficient."""

    order: int
    abelianization: AbelianInvariants
    center: AbelianInvariants
    derived_order: int
    exponent: int
    class_sizes: tuple[int, ...]
    order_stats: tuple[tuple[int, int], ...]
    frattini_order: int | None
    is_abelian: bool
    is_elementary_abelian: bool
    is_extraspecial: bool


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by its sorted member indices inside a parent group."""

    parent: "FiniteGroup"
    members: tuple[int, ...]
    normal: bool = False

    def __post_init__(self):
        G = self.parent
        mem = self.members
        if tuple(sorted(set(mem))) != mem:
            raise ValidationError("subgroup members must be sorted and unique")
        ms = set(mem)
        if G.identity not in ms:
            raise ValidationError("subgroup must contain the identity")
        for a in mem:
            if G.inverse[a] not in ms:
                raise ValidationError("subgroup not closed under inverses")
            row = G.table[a]
            for b in mem:
                if row[b] not in ms:
                    raise ValidationError("subgroup not closed under products")
        if self.normal:
            for g in range(G.order):
                gi = G.inverse[g]
                for a in mem:
                    if G.mul(G.mul(g, a), gi) not in ms:
                        raise ValidationError("subgroup flagged normal is not normal")

    @property
    def order(self) -> int:
        return len(self.members)


class FiniteGroup:
    """A concrete finite group; the Cayley table is the single source of truth."""

    def __init__(self, table, identity: int = 0, name: str = "", validate: bool = True):
        self.table = tuple(tuple(row) for row in table)
        self.identity = identity
        self.name = name
        if validate:
            self._validate()
        self.inverse = tuple(row.index(self.identity) for row in self.table)

    # -- construction ---------------------------------------------------

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls(((0,),), name="1")

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        if n < 1:
            raise ValidationError("cyclic group order must be positive")
        table = [[(i + j) % n for j in range(n)] for i in range(n)]
        return cls(table, name=f"C{n}", validate=False)

    @classmethod
    def from_text(cls, text: str, name: str = "") -> "FiniteGroup":
        """Parse the Cayley-table text format: first line n, then n rows.

        Element 0 must be the identity.
        """
        lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
        if not lines:
            raise ValidationError("empty Cayley table input")
        try:
            n = int(lines[0])
        except ValueError:
            raise ValidationError(f"first line must be the order, got {lines[0]!r}")
        if len(lines) != n + 1:
            raise ValidationError(f"expected {n} table rows, got {len(lines) - 1}")
        table = []
        for ln in lines[1:]:
            row = [int(tok) for tok in ln.split()]
            if len(row) != n:
                raise ValidationError(f"row has {len(row)} entries, expected {n}")
            table.append(row)
        G = cls(table, name=name)
        if G.table[0] != tuple(range(n)):
            raise ValidationError("element 0 must be the identity")
        return G

    def to_text(self) -> str:
        lines = [str(self.order)]
        lines.extend(" ".join(map(str, row)) for row in self.table)
        return "\n".join(lines) + "\n"

    # -- validation -----------------------------------------------------

    def _validate(self):
        n = len(self.table)
        if n == 0:
            raise ValidationError("empty table")
        full = tuple(range(n))
        for i, row in enumerate(self.table):
            if len(row) != n:
                raise ValidationError(f"row {i} has length {len(row)}, expected {n}")
            if tuple(sorted(row)) != full:
                raise ValidationError(f"row {i} is not a permutation")
        for j, col in enumerate(zip(*self.table)):
            if tuple(sorted(col)) != full:
                raise ValidationError(f"column {j} is not a permutation")
        e = self.identity
        if not 0 <= e < n:
            raise ValidationError("identity index out of range")
        if self.table[e] != full or tuple(r[e] for r in self.table) != full:
            raise ValidationError("identity element does not act as identity")
        if n <= FULL_CHECK_LIMIT:
            for i in range(n):
                row_i = self.table[i]
                for j in range(n):
                    if self.table[row_i[j]] != tuple(row_i[x] for x in self.table[j]):
                        raise ValidationError(f"associativity fails at ({i}, {j})")
        else:
            rng = random.Random(0xA550C)
            t = self.table
            for _ in range(RANDOM_TRIPLE_CHECKS):
                i = rng.randrange(n)
                j = rng.randrange(n)
                k = rng.randrange(n)
                if t[t[i][j]][k] != t[i][t[j][k]]:
                    raise ValidationError(f"associativity fails at ({i}, {j}, {k})")

    # -- basic operations -----------------------------------------------

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse[a], -k
        out = self.identity
        while k:
            if k & 1:
                out = self.table[out][a]
            a = self.table[a][a]
            k >>= 1
        return out

    def commutator(self, a: int, b: int) -> int:
        t = self.table
        return t[t[self.inverse[a]][self.inverse[b]]][t[a][b]]

    def conjugate(self, a: int, g: int) -> int:
        """g^-1 * a * g"""
        t = self.table
        return t[t[self.inverse[g]][a]][g]

    # -- cached structure -----------------------------------------------

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        out = []
        for a in range(self.order):
            x, k = a, 1
            while x != self.identity:
                x = self.table[x][a]
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def order_stats(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(Counter(self.element_orders).items()))

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.element_orders)

    @cached_property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[i][j] == t[j][i] for i in range(self.order) for j in range(i))

    @cached_property
    def center(self) -> Subgroup:
        t = self.table
        n = self.order
        members = tuple(z for z in range(n) if all(t[z][g] == t[g][z] for g in range(n)))
        return Subgroup(self, members, normal=True)

    @cached_property
    def derived_subgroup(self) -> Subgroup:
        comms = {self.commutator(a, b) for a in range(self.order) for b in range(self.order)}
        return Subgroup(self, self.closure(comms), normal=True)

    @cached_property
    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        n = self.order
        seen = [False] * n
        classes = []
        for a in range(n):
            if seen[a]:
                continue
            orbit = sorted({self.conjugate(a, g) for g in range(n)})
            for x in orbit:
                seen[x] = True
            classes.append(tuple(orbit))
        return tuple(classes)

    @cached_property
    def class_size_of(self) -> tuple[int, ...]:
        sizes = [0] * self.order
        for cls_ in self.conjugacy_classes:
            for x in cls_:
                sizes[x] = len(cls_)
        return tuple(sizes)

    @cached_property
    def frattini_subgroup(self) -> Subgroup | None:
        """G' * G^p for p-groups (that identity is specific to them); None otherwise."""
        pp = prime_power(self.order)
        if pp is None:
            return None if self.order > 1 else Subgroup(self, (self.identity,), normal=True)
        p = pp[0]
        gens = set(self.derived_subgroup.members)
        gens.update(self.power(a, p) for a in range(self.order))
        return Subgroup(self, self.closure(gens), normal=True)

    @cached_property
    def is_elementary_abelian(self) -> bool:
        return self.is_abelian and (self.order == 1 or is_prime(self.exponent))

    @cached_property
    def is_extraspecial(self) -> bool:
        pp = prime_power(self.order)
        if pp is None:
            return False
        frat = self.frattini_subgroup
        z = self.center.members
        return (
            len(z) == pp[0]
            and z == self.derived_subgroup.members
            and frat is not None
            and z == frat.members
        )

    # -- subgroup machinery ----------------------------------------------

    def closure(self, gens) -> tuple[int, ...]:
        """Sorted member tuple of the subgroup generated by ``gens``."""
        known = {self.identity}
        frontier = [self.identity]
        gen_list = sorted(set(gens) | {self.identity})
        for g in gen_list:
            if g not in known:
                known.add(g)
                frontier.append(g)
        t = self.table
        while frontier:
            x = frontier.pop()
            for g in gen_list:
                y = t[x][g]
                if y not in known:
                    known.add(y)
                    frontier.append(y)
                y = t[g][x]
                if y not in known:
                    known.add(y)
                    frontier.append(y)
        return tuple(sorted(known))

    def subgroup(self, members, normal: bool = False) -> Subgroup:
        return Subgroup(self, tuple(sorted(set(members))), normal=normal)

    def is_normal(self, members) -> bool:
        ms = set(members)
        return all(
            self.conjugate(a, g) in ms for a in ms for g in range(self.order)
        )

    # -- quotients --------------------------------------------------------

    def quotient_with_map(self, N: Subgroup) -> tuple["FiniteGroup", tuple[int, ...]]:
        """Cayley table on cosets plus the natural projection element -> coset index.

        Coset 0 is N itself; cosets are numbered by ascending minimal member.
        """
        if N.parent is not self:
            raise ValidationError("subgroup belongs to a different group")
        if not N.normal and not self.is_normal(N.members):
            raise ValidationError("quotient requires a normal subgroup")
        n = self.order
        proj = [-1] * n
        reps: list[int] = []
        t = self.table
        for x in range(n):
            if proj[x] >= 0:
                continue
            idx = len(reps)
            reps.append(x)
            for m in N.members:
                proj[t[x][m]] = idx
        q = len(reps)
        qtable = [[proj[t[reps[a]][reps[b]]] for b in range(q)] for a in range(q)]
        name = f"{self.name}/N" if self.name else ""
        return FiniteGroup(qtable, name=name), tuple(proj)

    def quotient(self, N: Subgroup) -> "FiniteGroup":
        return self.quotient_with_map(N)[0]

    # -- abelian decomposition ---------------------------------------------

    def abelian_invariants(self) -> AbelianInvariants:
        """Invariant factors of this group, which must be abelian.

        Decomposed purely from order statistics: within each Sylow p-part
        the count of solutions of x^(p^k) = e determines the conjugate
        partition of the exponent multiset.
        """
        if not self.is_abelian:
            raise ValidationError("abelian decomposition of a non-abelian group")
        orders = self.element_orders
        parts: list[int] = []
        for p, e_max in factorize(self.order).items():
            counts = []
            for k in range(e_max + 1):
                pk = p**k
                counts.append(sum(1 for o in orders if pk % o == 0))
            s = [round(math.log(c, p)) for c in counts]
            # s[k] - s[k-1] = number of cyclic factors with exponent >= k
            mult_ge = [s[k] - s[k - 1] for k in range(1, e_max + 1)]
            for k, cnt in enumerate(mult_ge, start=1):
                nxt = mult_ge[k] if k < len(mult_ge) else 0
                parts.extend([p**k] * (cnt - nxt))
        return AbelianInvariants.from_cyclic_orders(parts)

    @cached_property
    def abelianization(self) -> AbelianInvariants:
        return self.quotient(self.derived_subgroup).abelian_invariants()

    def subgroup_as_group(self, members: tuple[int, ...]) -> "FiniteGroup":
        """Re-index a subgroup's members as a standalone group."""
        pos = {x: i for i, x in enumerate(members)}
        table = [[pos[self.table[a][b]] for b in members] for a in members]
        return FiniteGroup(table, validate=False)

    @cached_property
    def fingerprint(self) -> GroupFingerprint:
        frat = self.frattini_subgroup
        center_group = self.subgroup_as_group(self.center.members)
        return GroupFingerprint(
            order=self.order,
            abelianization=self.abelianization,
            center=center_group.abelian_invariants(),
            derived_order=self.derived_subgroup.order,
            exponent=self.exponent,
            class_sizes=tuple(sorted(len(c) for c in self.conjugacy_classes)),
            order_stats=self.order_stats,
            frattini_order=None if frat is None else frat.order,
            is_abelian=self.is_abelian,
            is_elementary_abelian=self.is_elementary_abelian,
            is_extraspecial=self.is_extraspecial,
        )

    # -- generation --------------------------------------------------------

    def minimal_generators(self) -> tuple[int, ...]:
        """A minimal generating sequence.

        For p-groups the generators are lifts of a basis of the Frattini
        quotient (Burnside basis theorem); otherwise a greedy closure.
        """
        n = self.order
        if n == 1:
            return ()
        pp = prime_power(n)
        if pp is not None:
            base = set(self.frattini_subgroup.members)
        else:
            base = {self.identity}
        gens: list[int] = []
        current = tuple(sorted(base))
        current_set = set(current)
        while len(current_set) < n:
            x = next(i for i in range(n) if i not in current_set)
            gens.append(x)
            current = self.closure(current_set | {x})
            current_set = set(current)
        return tuple(gens)

    def __repr__(self) -> str:
        label = self.name or "group"
        return f"<FiniteGroup {label} of order {self.order}>"


# -- module-level operations ------------------------------------------------


def direct_product(G: FiniteGroup, H: FiniteGroup, cap: int = PRODUCT_ORDER_CAP) -> FiniteGroup:
    """Componentwise product; element (i, j) is indexed as i * |H| + j."""
    order = G.order * H.order
    if order > cap:
        raise SizeError(f"product order {order} exceeds cap {cap}")
    m = H.order
    gt, ht = G.table, H.table
    table = []
    for i in range(G.order):
        gi = gt[i]
        for j in range(H.order):
            hj = ht[j]
            table.append([gi[a] * m + hj[b] for a in range(G.order) for b in range(m)])
    name = f"{G.name} x {H.name}" if G.name and H.name else ""
    return FiniteGroup(table, name=name)


def central_product(G: FiniteGroup, H: FiniteGroup, name: str = "") -> FiniteGroup:
    """(G x H) / <(z_G, z_H^-1)> for deterministically chosen central order-p elements.

    z is the smallest-index central element of prime order in each factor;
    both factors must agree on that prime.
    """
    def central_prime_element(K: FiniteGroup) -> tuple[int, int]:
        for z in K.center.members:
            o = K.element_orders[z]
            if is_prime(o):
                return z, o
        raise ValidationError("no central element of prime order")

    zg, pg = central_prime_element(G)
    zh, ph = central_prime_element(H)
    if pg != ph:
        raise ValidationError("central product factors disagree on the glued prime")
    GH = direct_product(G, H)
    z = zg * H.order + H.inverse[zh]
    N = GH.subgroup(GH.closure({z}), normal=True)
    Q = GH.quotient(N)
    if name:
        Q.name = name
    return Q


def center(G: FiniteGroup) -> Subgroup:
    return G.center


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    return G.derived_subgroup


def quotient(G: FiniteGroup, N: Subgroup) -> FiniteGroup:
    return G.quotient(N)


def abelianization(G: FiniteGroup) -> AbelianInvariants:
    return G.abelianization


def structure_predicates(G: FiniteGroup) -> GroupFingerprint:
    return G.fingerprint


def is_isomorphic(G: FiniteGroup, H: FiniteGroup, budget: int = ISO_NODE_BUDGET) -> bool:
    """Backtracking isomorphism test behind a fingerprint filter.

    Images of a minimal generating set are chosen with order/class-size
    pruning; raises UndecidedError when the node budget runs out rather
    than ever answering falsely.
    """
    if G.order != H.order:
        return False
    if G.order > ISO_ORDER_CAP:
        raise SizeError(f"isomorphism test capped at order {ISO_ORDER_CAP}")
    if G.fingerprint != H.fingerprint:
        return False
    if G.order == 1:
        return True
    if G.is_abelian:
        # fingerprint equality already compared invariant factors
        return True

    gens = G.minimal_generators()
    d = len(gens)
    g_orders = [G.element_orders[g] for g in gens]
    g_csizes = [G.class_size_of[g] for g in gens]
    h_orders = H.element_orders
    h_csizes = H.class_size_of
    class_reps = tuple(c[0] for c in H.conjugacy_classes)
    n = G.order
    nodes = 0

    def consistent_map(images: tuple[int, ...]):
        """BFS the subgroup generated on the G side, mirroring products in H.

        Returns the image set on success, None on any homomorphism or
        injectivity violation.  Walking every (element, generator) edge
        makes success at full size a complete isomorphism certificate.
        """
        phi = {G.identity: H.identity}
        order_list = [G.identity]
        used = {H.identity}
        i = 0
        while i < len(order_list):
            x = order_list[i]
            fx = phi[x]
            for g, fg in zip(gens[: len(images)], images):
                y = G.table[x][g]
                fy = H.table[fx][fg]
                if y in phi:
                    if phi[y] != fy:
                        return None
                else:
                    if fy in used:
                        return None
                    phi[y] = fy
                    used.add(fy)
                    order_list.append(y)
            i += 1
        return used

    def dfs(k: int, images: tuple[int, ...], image_set) -> bool:
        nonlocal nodes
        if k == d:
            return len(image_set) == n
        if k == 0:
            candidates = class_reps
        else:
            candidates = range(n)
        for h in candidates:
            if h_orders[h] != g_orders[k] or h_csizes[h] != g_csizes[k]:
                continue
            if k > 0 and h in image_set:
                continue
            nodes += 1
            if nodes > budget:
                raise UndecidedError(
                    f"isomorphism search exceeded {budget} node expansions"
                )
            new_set = consistent_map(images + (h,))
            if new_set is None:
                continue
            if dfs(k + 1, images + (h,), new_set):
                return True
        return False

    return dfs(0, (), {H.identity})
