"""Involutive alphabets, words and free-inverse-monoid equality.

A letter is a pair (base, inv) where base is a generator name and inv
marks the formal inverse.  Generator names match
``[A-Za-z][A-Za-z0-9_]*`` optionally followed by one ``^tag`` decoration
(tags are alphanumeric); the inverse of ``x`` is written ``x'`` in text.
``1`` denotes the empty word.
"""

import re
from collections import deque
from dataclasses import dataclass, field

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*(\^[A-Za-z0-9]+)?\Z")


class InvolutiveAlphabet:
    """An ordered set of generator names closed under a formal involution.

    Only positive letters are stored; (x, True) letters are implicitly
    present for every generator x.
    """

    def __init__(self, base_letters):
        base = tuple(base_letters)
        seen = set()
        for name in base:
            if not _NAME_RE.match(name):
                raise ValueError(f"bad generator name {name!r}")
            if name in seen:
                raise ValueError(f"duplicate generator {name!r}")
            seen.add(name)
        self.base_letters = base
        self._set = seen

    def __contains__(self, name):
        return name in self._set

    def __iter__(self):
        return iter(self.base_letters)

    def __len__(self):
        return len(self.base_letters)

    def __eq__(self, other):
        return (isinstance(other, InvolutiveAlphabet)
                and self.base_letters == other.base_letters)

    def __hash__(self):
        return hash(self.base_letters)

    def __repr__(self):
        return f"InvolutiveAlphabet({list(self.base_letters)!r})"

    def all_single_char(self):
        return all(len(name) == 1 for name in self.base_letters)


def invert_letter(letter):
    base, inv = letter
    return (base, not inv)


@dataclass(frozen=True)
class Word:
    """A sequence of signed letters over an involutive alphabet."""

    letters: tuple
    alphabet: InvolutiveAlphabet = field(compare=False)

    def __post_init__(self):
        for base, inv in self.letters:
            if base not in self.alphabet:
                raise ValueError(f"letter {base!r} not in alphabet")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return Word(self.letters[idx], self.alphabet)
        return self.letters[idx]

    def __mul__(self, other):
        if other.alphabet != self.alphabet:
            raise ValueError("cannot concatenate over different alphabets")
        return Word(self.letters + other.letters, self.alphabet)

    def is_positive(self):
        return all(not inv for _, inv in self.letters)

    def __str__(self):
        return word_to_text(self)

    def __repr__(self):
        return f"Word({word_to_text(self)!r})"


def word_from_text(text, alphabet):
    """Parse text into a Word over alphabet.

    Tokens are whitespace separated.  A token is a generator name with an
    optional ``'`` suffix, or ``1`` for the empty word.  When every
    generator is a single character a token may juxtapose several letters
    (``aba'``).
    """
    letters = []
    for token in text.split():
        if token == "1":
            continue
        if token in alphabet:
            letters.append((token, False))
        elif token.endswith("'") and token[:-1] in alphabet:
            letters.append((token[:-1], True))
        elif alphabet.all_single_char():
            pos = 0
            while pos < len(token):
                name = token[pos]
                if name not in alphabet:
                    raise ValueError(f"cannot read {token!r} at offset {pos}")
                pos += 1
                inv = pos < len(token) and token[pos] == "'"
                if inv:
                    pos += 1
                letters.append((name, inv))
        else:
            raise ValueError(f"unknown token {token!r}")
    return Word(tuple(letters), alphabet)


def word_to_text(w):
    if not w.letters:
        return "1"
    return " ".join(base + ("'" if inv else "") for base, inv in w.letters)


def free_reduce(w):
    """Delete factors x x' and x' x until none remain; the result is unique."""
    out = []
    for letter in w.letters:
        if out and out[-1] == invert_letter(letter):
            out.pop()
        else:
            out.append(letter)
    return Word(tuple(out), w.alphabet)


def invert_word(w):
    return Word(tuple(invert_letter(l) for l in reversed(w.letters)), w.alphabet)


def prefixes(w, include_empty=False):
    """All prefixes in increasing length, the word itself included."""
    start = 0 if include_empty else 1
    return [Word(w.letters[:k], w.alphabet) for k in range(start, len(w) + 1)]


def index_decorate(w, tag):
    """Replace each letter a by a^tag.  Only positive words qualify."""
    tag = str(tag)
    for base, inv in w.letters:
        if inv:
            raise ValueError("cannot decorate a word with formal inverses")
        if "^" in base:
            raise ValueError(f"letter {base!r} already decorated")
    names = [f"{base}^{tag}" for base, _ in w.letters]
    alpha = InvolutiveAlphabet(sorted(set(names))) if names else w.alphabet
    return Word(tuple((n, False) for n in names), alpha)


def forget_name(name):
    """Erase a ^tag decoration, or failing that strip trailing digits."""
    if "^" in name:
        return name.split("^", 1)[0]
    return name.rstrip("0123456789") or name


def index_forget(w):
    names = [forget_name(base) for base, _ in w.letters]
    alpha = InvolutiveAlphabet(sorted(set(names))) if names else w.alphabet
    return Word(tuple((n, inv) for n, (_, inv) in zip(names, w.letters)),
                alpha)


@dataclass(frozen=True)
class MunnTree:
    """A birooted edge-labeled tree in canonical numbering.

    Vertices are renumbered by BFS from the start root with neighbors
    visited in (label, direction) order, so two trees are isomorphic as
    birooted labeled trees exactly when they are equal.
    """

    n_vertices: int
    edges: tuple          # sorted (src, base, dst)
    start: int
    end: int

    def __contains__(self, edge):
        return edge in self.edges


def munn_tree(w):
    """Fold a word's linear graph into its tree.

    The trace never creates a duplicate (label, direction) at a vertex,
    so the result is already folded, deterministic and co-deterministic.
    """
    out = [{}]  # vertex -> {base: dst}
    inn = [{}]
    cur = 0
    for base, inv in w.letters:
        fwd, bwd = (inn, out) if inv else (out, inn)
        nxt = fwd[cur].get(base)
        if nxt is None:
            out.append({})
            inn.append({})
            nxt = len(out) - 1
            fwd[cur][base] = nxt
            bwd[nxt][base] = cur
        cur = nxt

    order = {0: 0}
    q = deque([0])
    while q:
        v = q.popleft()
        nbrs = sorted(
            [(base, 0, dst) for base, dst in out[v].items()]
            + [(base, 1, src) for base, src in inn[v].items()])
        for _, _, wv in nbrs:
            if wv not in order:
                order[wv] = len(order)
                q.append(wv)
    edges = sorted((order[src], base, order[out[src][base]])
                   for src in range(len(out)) for base in out[src])
    return MunnTree(len(out), tuple(edges), 0, order[cur])


def fim_equal(u, v):
    """Equality in the free inverse monoid on the shared alphabet."""
    if u.alphabet != v.alphabet:
        raise ValueError("words over different alphabets")
    return munn_tree(u) == munn_tree(v)
