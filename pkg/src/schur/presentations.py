"""Finite presentations and their realization as concrete groups.

The text DSL::

    # optional comment
    p: 3
    gens: a b
    rels: a^9 = 1, [a,b,a] = 1, [a,b,b] = a^6

accepts commutator sugar ``[x,y] = x^-1 y^-1 x y`` (left-normed for
longer brackets: ``[x,y,z] = [[x,y],z]``), parenthesized subwords,
integer exponents, equation chains ``u = v = w``, and the symbol ``p``
inside exponents (``a^p^2`` means a^(p^2), ``a^2p`` means a^(2p)); a
template with symbolic exponents is instantiated at a concrete prime
before enumeration.  Statements end at ';', a newline before a keyword,
or end of input.

Coset enumeration is HLT (relator scanning) over the trivial subgroup
with union-find coincidence handling; a closed enumeration yields the
regular-representation Cayley table, numbered by first coset
definition, so identical input text always produces an identical table.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

from .errors import EnumerationError, ParseError, SizeError, ValidationError
from .groups import FiniteGroup, is_prime

DEFAULT_MAX_COSETS = 100_000


# -- words --------------------------------------------------------------------


@dataclass(frozen=True)
class Word:
    """A freely reduced word: a sequence of (generator index, +/-1) letters."""

    letters: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_letters(cls, letters) -> "Word":
        out: list[tuple[int, int]] = []
        for g, s in letters:
            if s not in (1, -1):
                raise ValidationError(f"letter sign must be +/-1, got {s}")
            if out and out[-1][0] == g and out[-1][1] == -s:
                out.pop()
            else:
                out.append((g, s))
        return cls(tuple(out))

    def __mul__(self, other: "Word") -> "Word":
        return Word.from_letters(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -s) for g, s in reversed(self.letters)))

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        out = Word()
        for _ in range(k):
            out = out * self
        return out

    def __len__(self) -> int:
        return len(self.letters)

    def generators_used(self) -> set[int]:
        return {g for g, _ in self.letters}

    def display(self, names: tuple[str, ...]) -> str:
        if not self.letters:
            return "1"
        parts = []
        i = 0
        ls = self.letters
        while i < len(ls):
            g, s = ls[i]
            j = i
            while j < len(ls) and ls[j] == (g, s):
                j += 1
            e = (j - i) * s
            parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
            i = j
        return " ".join(parts)


def commutator_word(u: Word, v: Word) -> Word:
    return u.inverse() * v.inverse() * u * v


# -- expression AST (supports symbolic p in exponents) -------------------------


@dataclass(frozen=True)
class _Exp:
    """Exponent coeff * p^pdeg; pdeg == 0 makes it a plain integer."""

    coeff: int
    pdeg: int = 0

    def value(self, p: int | None) -> int:
        if self.pdeg == 0:
            return self.coeff
        if p is None:
            raise ValidationError("symbolic exponent used without a value for p")
        return self.coeff * p**self.pdeg

    @property
    def symbolic(self) -> bool:
        return self.pdeg > 0

    def __str__(self) -> str:
        if self.pdeg == 0:
            return str(self.coeff)
        ppart = "p" if self.pdeg == 1 else f"p^{self.pdeg}"
        if self.coeff == 1:
            return ppart
        if self.coeff == -1:
            return f"-{ppart}"
        return f"{self.coeff}{ppart}"


@dataclass(frozen=True)
class _Node:
    """Word AST node: kind is 'gen' | 'seq' | 'comm', with an exponent."""

    kind: str
    gen: int = 0
    parts: tuple["_Node", ...] = ()
    exp: _Exp = _Exp(1)

    def expand(self, p: int | None) -> Word:
        if self.kind == "gen":
            base = Word(((self.gen, 1),))
        elif self.kind == "seq":
            base = Word()
            for part in self.parts:
                base = base * part.expand(p)
        else:  # comm, left-normed
            acc = self.parts[0].expand(p)
            for part in self.parts[1:]:
                acc = commutator_word(acc, part.expand(p))
            base = acc
        return base ** self.exp.value(p)

    def symbolic(self) -> bool:
        return self.exp.symbolic or any(part.symbolic() for part in self.parts)


@dataclass(frozen=True)
class FpPresentation:
    """Generators plus relators, possibly still a template in the prime p."""

    generators: tuple[str, ...]
    relator_nodes: tuple[_Node, ...]
    p: int | None = None
    source: str = ""

    @property
    def is_template(self) -> bool:
        return self.p is None and any(n.symbolic() for n in self.relator_nodes)

    def instantiate(self, p: int) -> "FpPresentation":
        if not is_prime(p):
            raise ValidationError(f"p must be prime, got {p}")
        return FpPresentation(self.generators, self.relator_nodes, p=p, source=self.source)

    @property
    def relators(self) -> tuple[Word, ...]:
        if self.is_template:
            raise ValidationError("presentation is a template; instantiate a prime first")
        words = []
        for node in self.relator_nodes:
            w = node.expand(self.p)
            if len(w):
                words.append(w)
        return tuple(words)

    def display(self) -> str:
        body = ", ".join(self._display_node(n) for n in self.relator_nodes)
        return f"< {', '.join(self.generators)} | {body} >"

    def _display_node(self, node: _Node) -> str:
        names = self.generators
        if node.kind == "gen":
            base = names[node.gen]
        elif node.kind == "comm":
            base = "[" + ",".join(self._display_node(x) for x in node.parts) + "]"
        else:
            inner = " ".join(self._display_node(x) for x in node.parts)
            base = inner if len(node.parts) == 1 else f"({inner})"
        if node.exp == _Exp(1):
            return base
        return f"{base}^{node.exp}"


# -- parser ---------------------------------------------------------------------

_IDENT_START = set(string.ascii_letters + "_")
_IDENT_CHARS = _IDENT_START | set(string.digits)


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: list[tuple[str, str, int, int]] = []
        self._run()

    def _advance(self, k: int = 1):
        for _ in range(k):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def _run(self):
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch == "#":
                while self.pos < len(text) and text[self.pos] != "\n":
                    self._advance()
                continue
            if ch == "\n":
                self.tokens.append(("NEWLINE", "\n", self.line, self.col))
                self._advance()
                continue
            if ch in " \t\r":
                self._advance()
                continue
            if ch in _IDENT_START:
                start, line, col = self.pos, self.line, self.col
                while self.pos < len(text) and text[self.pos] in _IDENT_CHARS:
                    self._advance()
                self.tokens.append(("IDENT", text[start : self.pos], line, col))
                continue
            if ch.isdigit():
                start, line, col = self.pos, self.line, self.col
                while self.pos < len(text) and text[self.pos].isdigit():
                    self._advance()
                self.tokens.append(("INT", text[start : self.pos], line, col))
                continue
            if ch in "^[](),=;:*-":
                self.tokens.append((ch, ch, self.line, self.col))
                self._advance()
                continue
            raise ParseError(f"unexpected character {ch!r}", self.line, self.col)
        self.tokens.append(("EOF", "", self.line, self.col))


class _Parser:
    """Recursive-descent parser for the presentation DSL."""

    _KEYWORDS = ("p", "gens", "rels")

    def __init__(self, text: str):
        self.toks = _Tokenizer(text).tokens
        self.i = 0
        self.generators: list[str] = []
        self.gen_index: dict[str, int] = {}
        self.p: int | None = None
        self.relators: list[_Node] = []
        self.saw_gens = False

    # token helpers -------------------------------------------------------

    def peek(self, skip_newlines: bool = False):
        j = self.i
        if skip_newlines:
            while self.toks[j][0] == "NEWLINE":
                j += 1
        return self.toks[j]

    def next(self, skip_newlines: bool = False):
        if skip_newlines:
            while self.toks[self.i][0] == "NEWLINE":
                self.i += 1
        tok = self.toks[self.i]
        if tok[0] != "EOF":
            self.i += 1
        return tok

    def expect(self, kind: str, skip_newlines: bool = False):
        tok = self.next(skip_newlines)
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, got {tok[1]!r}", tok[2], tok[3])
        return tok

    def _is_keyword_at(self, j: int) -> bool:
        return (
            self.toks[j][0] == "IDENT"
            and self.toks[j][1] in self._KEYWORDS
            and self.toks[j + 1][0] == ":"
        )

    # grammar ---------------------------------------------------------------

    def parse(self) -> FpPresentation:
        while True:
            tok = self.peek(skip_newlines=True)
            if tok[0] == "EOF":
                break
            if tok[0] == ";":
                self.next(skip_newlines=True)
                continue
            if not self._is_keyword_at(self._skip_nl_index()):
                raise ParseError(f"expected a section keyword, got {tok[1]!r}", tok[2], tok[3])
            keyword = self.next(skip_newlines=True)[1]
            self.expect(":")
            if keyword == "p":
                tok = self.expect("INT")
                self.p = int(tok[1])
                if not is_prime(self.p):
                    raise ParseError(f"p must be prime, got {self.p}", tok[2], tok[3])
            elif keyword == "gens":
                self._parse_gens()
            else:
                self._parse_rels()
        if not self.saw_gens:
            tok = self.toks[-1]
            raise ParseError("missing 'gens:' section", tok[2], tok[3])
        return FpPresentation(tuple(self.generators), tuple(self.relators), p=self.p)

    def _skip_nl_index(self) -> int:
        j = self.i
        while self.toks[j][0] == "NEWLINE":
            j += 1
        return j

    def _parse_gens(self):
        self.saw_gens = True
        while self.peek()[0] == "IDENT":
            tok = self.next()
            name = tok[1]
            if name in self._KEYWORDS:
                raise ParseError(f"{name!r} is reserved and cannot name a generator", tok[2], tok[3])
            if name in self.gen_index:
                raise ParseError(f"duplicate generator {name!r}", tok[2], tok[3])
            self.gen_index[name] = len(self.generators)
            self.generators.append(name)
        if not self.generators:
            tok = self.peek()
            raise ParseError("gens: requires at least one generator", tok[2], tok[3])

    def _parse_rels(self):
        while True:
            chain = [self._parse_word()]
            while self.peek(skip_newlines=True)[0] == "=":
                self.next(skip_newlines=True)
                chain.append(self._parse_word())
            # u1 = u2 = ... = uk contributes k-1 relators u_i * u_{i+1}^-1
            if len(chain) == 1:
                self.relators.append(chain[0])
            else:
                for u, v in zip(chain, chain[1:]):
                    inv_v = _Node("seq", parts=(v,), exp=_Exp(-1))
                    self.relators.append(_Node("seq", parts=(u, inv_v)))
            tok = self.peek(skip_newlines=True)
            if tok[0] == ",":
                self.next(skip_newlines=True)
                continue
            return

    def _parse_word(self) -> _Node:
        factors = [self._parse_factor()]
        while True:
            tok = self.peek()
            if tok[0] in ("IDENT", "[", "("):
                factors.append(self._parse_factor())
            elif tok[0] == "*":
                self.next()
                factors.append(self._parse_factor())
            else:
                break
        if len(factors) == 1:
            return factors[0]
        return _Node("seq", parts=tuple(factors))

    def _parse_factor(self) -> _Node:
        tok = self.next()
        is_run = False
        if tok[0] == "IDENT":
            node, is_run = self._resolve_ident(tok)
        elif tok[0] == "INT" and tok[1] == "1":
            node = _Node("seq", parts=())
        elif tok[0] == "[":
            parts = [self._parse_word()]
            while self.peek()[0] == ",":
                self.next()
                parts.append(self._parse_word())
            self.expect("]")
            if len(parts) < 2:
                raise ParseError("commutator needs at least two arguments", tok[2], tok[3])
            node = _Node("comm", parts=tuple(parts))
        elif tok[0] == "(":
            inner = self._parse_word()
            self.expect(")")
            node = _Node("seq", parts=(inner,))
        else:
            raise ParseError(f"expected a word, got {tok[1]!r}", tok[2], tok[3])
        if self.peek()[0] == "^":
            self.next()
            exp = self._parse_exponent()
            if is_run and len(node.parts) > 1:
                # an exponent after a juxtaposed run binds to its last
                # letter: abc^2 means a b (c^2)
                last = node.parts[-1]
                last = _Node(last.kind, gen=last.gen, parts=last.parts, exp=exp)
                node = _Node("seq", parts=node.parts[:-1] + (last,))
            else:
                node = _Node(node.kind, gen=node.gen, parts=node.parts, exp=exp)
        return node

    def _resolve_ident(self, tok) -> tuple[_Node, bool]:
        name = tok[1]
        if name in self.gen_index:
            return _Node("gen", gen=self.gen_index[name]), False
        # greedy split into declared generator names, e.g. "abc" -> a b c
        parts: list[_Node] = []
        rest = name
        while rest:
            for k in range(len(rest), 0, -1):
                if rest[:k] in self.gen_index:
                    parts.append(_Node("gen", gen=self.gen_index[rest[:k]]))
                    rest = rest[k:]
                    break
            else:
                raise ParseError(f"unknown generator in {name!r}", tok[2], tok[3])
        return _Node("seq", parts=tuple(parts)), True

    def _parse_exponent(self) -> _Exp:
        sign = 1
        if self.peek()[0] == "-":
            self.next()
            sign = -1
        tok = self.next()
        if tok[0] == "INT":
            coeff = int(tok[1])
            nxt = self.peek()
            if nxt[0] == "IDENT" and nxt[1] == "p" or nxt[0] == "*":
                if nxt[0] == "*":
                    self.next()
                    ptok = self.next()
                    if ptok[0] != "IDENT" or ptok[1] != "p":
                        raise ParseError("expected 'p' after '*'", ptok[2], ptok[3])
                else:
                    self.next()
                return _Exp(sign * coeff, self._parse_pdeg())
            return _Exp(sign * coeff)
        if tok[0] == "IDENT" and tok[1] == "p":
            return _Exp(sign, self._parse_pdeg())
        raise ParseError(f"malformed exponent {tok[1]!r}", tok[2], tok[3])

    def _parse_pdeg(self) -> int:
        if self.peek()[0] == "^":
            self.next()
            tok = self.expect("INT")
            return int(tok[1])
        return 1


def parse_presentation(text: str) -> FpPresentation:
    """Parse DSL text into a presentation (a template when p stays symbolic)."""
    pres = _Parser(text).parse()
    if not pres.is_template:
        pres.relators  # force expansion errors now
    return pres


# -- coset enumeration ----------------------------------------------------------


class CosetTable:
    """HLT coset enumeration workspace over the trivial subgroup.

    Columns alternate generator / inverse (column 2k is generator k,
    2k+1 its inverse), so x ^ 1 flips a column to its inverse.
    """

    def __init__(self, presentation: FpPresentation, max_cosets: int = DEFAULT_MAX_COSETS):
        if presentation.is_template:
            raise ValidationError("instantiate the presentation before enumerating")
        if max_cosets < 1:
            raise ValidationError("max_cosets must be >= 1")
        self.presentation = presentation
        self.max_cosets = max_cosets
        self.width = 2 * len(presentation.generators)
        self.relator_cols: list[list[int]] = [
            [2 * g + (0 if s > 0 else 1) for g, s in w.letters]
            for w in presentation.relators
        ]
        self.table: list[list[int | None]] = [[None] * self.width]
        self.p: list[int] = [0]
        self.n_live = 1
        self.closed = False

    # union-find over coincidences -----------------------------------------

    def _rep(self, k: int) -> int:
        l = k
        p = self.p
        while p[l] != l:
            l = p[l]
        while p[k] != l:
            p[k], k = l, p[k]
        return l

    def _merge(self, a: int, b: int, queue: list[int]):
        a, b = self._rep(a), self._rep(b)
        if a != b:
            if a > b:
                a, b = b, a
            self.p[b] = a
            self.n_live -= 1
            queue.append(b)

    def _coincidence(self, a: int, b: int):
        queue: list[int] = []
        self._merge(a, b, queue)
        i = 0
        while i < len(queue):
            y = queue[i]
            i += 1
            row = self.table[y]
            for x in range(self.width):
                d = row[x]
                if d is None:
                    continue
                self.table[d][x ^ 1] = None
                mu, nu = self._rep(y), self._rep(d)
                t = self.table[mu][x]
                if t is not None:
                    self._merge(nu, t, queue)
                    continue
                t = self.table[nu][x ^ 1]
                if t is not None:
                    self._merge(mu, t, queue)
                else:
                    self.table[mu][x] = nu
                    self.table[nu][x ^ 1] = mu

    # table growth ------------------------------------------------------------

    def _define(self, a: int, x: int) -> int:
        if self.n_live >= self.max_cosets:
            raise EnumerationError(
                f"enumeration did not close within {self.max_cosets} cosets"
            )
        b = len(self.table)
        self.table.append([None] * self.width)
        self.p.append(b)
        self.n_live += 1
        self.table[a][x] = b
        self.table[b][x ^ 1] = a
        return b

    def _scan_and_fill(self, a: int, w: list[int]):
        f, i = a, 0
        b, j = a, len(w) - 1
        table = self.table
        while True:
            while i <= j and table[f][w[i]] is not None:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self._coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] is not None:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self._coincidence(f, b)
                return
            if j == i:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            f = self._define(f, w[i])
            i += 1

    def _scan_only_closes(self, a: int, w: list[int]) -> bool:
        """Scan without defining; process any forced coincidence."""
        f = a
        table = self.table
        for x in w:
            nxt = table[f][x]
            if nxt is None:
                return False
            f = nxt
        if f != a:
            self._coincidence(f, a)
            return False
        return True

    def run(self) -> "CosetTable":
        while True:
            a = 0
            while a < len(self.table):
                if self.p[a] != a:
                    a += 1
                    continue
                for w in self.relator_cols:
                    if self.p[a] != a:
                        break
                    if w:
                        self._scan_and_fill(a, w)
                if self.p[a] == a:
                    row = self.table[a]
                    for x in range(self.width):
                        if row[x] is None:
                            self._define(a, x)
                a += 1
            # verification pass: with a complete table every relator must
            # scan home from every live coset; failures force coincidences
            # and another round
            stable = True
            for a in range(len(self.table)):
                if self.p[a] != a:
                    continue
                for w in self.relator_cols:
                    if self.p[a] != a:
                        break
                    if w and not self._scan_only_closes(a, w):
                        stable = False
            if stable:
                break
        self._compress()
        self.closed = True
        return self

    def _compress(self):
        live = [k for k in range(len(self.table)) if self.p[k] == k]
        remap = {old: new for new, old in enumerate(live)}
        self.table = [
            [remap[self._rep(v)] if v is not None else None for v in self.table[old]]
            for old in live
        ]
        self.p = list(range(len(live)))
        if any(v is None for row in self.table for v in row):
            raise EnumerationError("internal: compressed table still incomplete")

    # results -------------------------------------------------------------------

    @property
    def coset_count(self) -> int:
        if not self.closed:
            raise ValidationError("enumeration has not been run")
        return len(self.table)

    def generator_images(self) -> tuple[int, ...]:
        return tuple(self.table[0][2 * g] for g in range(len(self.presentation.generators)))

    def group(self, name: str = "") -> FiniteGroup:
        """Regular-representation Cayley table of the enumerated group."""
        if not self.closed:
            raise ValidationError("enumeration has not been run")
        n = len(self.table)
        # any word reaching coset j from 0 represents element j; BFS gives one
        via: list[tuple[int, int] | None] = [None] * n
        via[0] = (-1, -1)
        order = [0]
        qi = 0
        while qi < len(order):
            c = order[qi]
            qi += 1
            for x in range(self.width):
                d = self.table[c][x]
                if via[d] is None:
                    via[d] = (c, x)
                    order.append(d)
        if len(order) != n:
            raise EnumerationError("internal: coset graph is not connected")
        words: list[list[int]] = [[] for _ in range(n)]
        for c in order[1:]:
            prev, x = via[c]
            words[c] = words[prev] + [x]
        cayley = []
        for i in range(n):
            row = []
            for j in range(n):
                c = i
                for x in words[j]:
                    c = self.table[c][x]
                row.append(c)
            cayley.append(row)
        return FiniteGroup(cayley, name=name or self.presentation.source)


def coset_enumeration(
    presentation: FpPresentation, max_cosets: int = DEFAULT_MAX_COSETS
) -> CosetTable:
    return CosetTable(presentation, max_cosets).run()


def todd_coxeter(
    presentation: FpPresentation,
    max_cosets: int = DEFAULT_MAX_COSETS,
    name: str = "",
) -> FiniteGroup:
    """Enumerate cosets of the trivial subgroup; the closed table is the group."""
    return coset_enumeration(presentation, max_cosets).group(name=name)


# -- semidirect products Z_p^rank x| Z_p ---------------------------------------


def _partitions_with_max_part(n: int, max_part: int):
    """Partitions of n (descending tuples) with every part <= max_part."""
    def rec(remaining: int, cap: int):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest
    yield from rec(n, max_part)


def jordan_matrix(partition: tuple[int, ...], rank: int) -> tuple[tuple[int, ...], ...]:
    """Unipotent matrix with Jordan blocks of the given sizes (1s above diagonal)."""
    if sum(partition) != rank:
        raise ValidationError(f"partition {partition} does not sum to rank {rank}")
    M = [[1 if i == j else 0 for j in range(rank)] for i in range(rank)]
    pos = 0
    for block in partition:
        for k in range(block - 1):
            M[pos + k][pos + k + 1] = 1
        pos += block
    return tuple(tuple(row) for row in M)


def semidirect_product_vector(
    p: int, rank: int, action: tuple[tuple[int, ...], ...], name: str = "",
    cap: int = 10**6,
) -> FiniteGroup:
    """Explicit Cayley table of Z_p^rank x| Z_p for an order-dividing-p action matrix.

    Elements are pairs (v, t) indexed as idx(v) * p + t with v read as
    big-endian base-p digits; (v,t)(w,s) = (v + A^t w, t + s).
    """
    order = p ** (rank + 1)
    if order > cap:
        raise SizeError(f"semidirect order {order} exceeds cap {cap}")
    nv = p**rank

    def vec_of(idx: int) -> list[int]:
        digits = []
        for _ in range(rank):
            digits.append(idx % p)
            idx //= p
        digits.reverse()
        return digits

    def idx_of(vec) -> int:
        out = 0
        for d in vec:
            out = out * p + d
        return out

    # powers of the action matrix
    def matmul(A, B):
        return tuple(
            tuple(sum(A[i][k] * B[k][j] for k in range(rank)) % p for j in range(rank))
            for i in range(rank)
        )

    powers = [tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank))]
    for _ in range(p - 1):
        powers.append(matmul(powers[-1], action))
    if matmul(powers[-1], action) != powers[0]:
        raise ValidationError("action matrix order does not divide p")

    vectors = [vec_of(i) for i in range(nv)]
    # applied[t][w] = index of A^t * w
    applied = []
    for t in range(p):
        A = powers[t]
        row = []
        for w in vectors:
            img = [sum(A[i][k] * w[k] for k in range(rank)) % p for i in range(rank)]
            row.append(idx_of(img))
        applied.append(row)
    vadd = [
        [idx_of([(a + b) % p for a, b in zip(u, w)]) for w in vectors] for u in vectors
    ]

    table = []
    for vi in range(nv):
        for t in range(p):
            app = applied[t]
            addrow = vadd[vi]
            row = []
            for wi in range(nv):
                target = addrow[app[wi]] * p
                for s in range(p):
                    row.append(target + (t + s) % p)
            table.append(row)
    return FiniteGroup(table, name=name)


def semidirect_search(
    p: int, rank: int, order_of_action: int, cap: int = 10**6
) -> list[FiniteGroup]:
    """One group per conjugacy class of actions of the requested order.

    Order-p elements of GL(rank, p) are exactly the nontrivial unipotent
    matrices, classified by Jordan type: partitions of rank with parts
    <= p and some part >= 2.  Order 1 gives the direct product.
    """
    if not is_prime(p):
        raise ValidationError(f"p must be prime, got {p}")
    if order_of_action == 1:
        M = jordan_matrix((1,) * rank, rank)
        return [semidirect_product_vector(p, rank, M, name=f"C{p}^{rank} x C{p}", cap=cap)]
    if order_of_action != p:
        raise ValidationError("only trivial and order-p actions are supported")
    out = []
    for part in _partitions_with_max_part(rank, min(rank, p)):
        if all(b == 1 for b in part):
            continue
        M = jordan_matrix(part, rank)
        label = "J" + "+".join(map(str, part))
        out.append(
            semidirect_product_vector(
                p, rank, M, name=f"C{p}^{rank} x|{label} C{p}", cap=cap
            )
        )
    return out
