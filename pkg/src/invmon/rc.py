"""Right-cancellative presentations: chains, bounded chain search, M_r oracle.

Two positive words are equal in Mon_RC⟨A | u_i = v_i⟩ exactly when a chain
of rewriting steps joins them.  Chain words live over A together with a
tagged copy A^R (written ``a^R``); every step u -> u' factors as
u = p q r, u' = p q' r with p over A only, and is one of

* an r_step: (q, q') or (q', q) is a defining pair,
* an insertion: q empty, q' = a a^R,
* a deletion: q = a a^R, q' empty.

Endpoints carry no tagged letters, which forces insertions and their
matching deletions to nest like a stack.
"""

from dataclasses import dataclass, field

from .presentations import Presentation
from .words import InvolutiveAlphabet, Word, word_from_text, word_to_text

R_SUFFIX = "^R"


def rc_alphabet(p):
    """The chain alphabet A ∪ A^R of an rc_monoid presentation."""
    base = p.alphabet.base_letters
    return InvolutiveAlphabet(base + tuple(a + R_SUFFIX for a in base))


def _is_tagged(name):
    return name.endswith(R_SUFFIX)


@dataclass(frozen=True)
class Step:
    kind: str            # r_step | insertion | deletion
    pos: int             # length of the untouched positive prefix
    rel: int = -1        # defining pair index (r_step)
    forward: bool = True  # r_step reads the pair lhs -> rhs
    letter: str = ""     # inserted/deleted base letter


def invert_step(step):
    if step.kind == "r_step":
        return Step("r_step", step.pos, rel=step.rel, forward=not step.forward)
    if step.kind == "insertion":
        return Step("deletion", step.pos, letter=step.letter)
    return Step("insertion", step.pos, letter=step.letter)


@dataclass(frozen=True)
class RChain:
    """Words u_0 … u_l and the l steps connecting them."""

    words: tuple
    steps: tuple

    @property
    def source(self):
        return self.words[0]

    @property
    def target(self):
        return self.words[-1]

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class ChainCheck:
    ok: bool
    step: int = -1            # index of the first bad step, -1 if none
    message: str = ""
    pairs: tuple = ()         # matched (insertion index, deletion index)

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class ChainNotFound:
    """Inconclusive search outcome carrying the exhausted bounds."""

    max_len: int
    max_steps: int
    words_visited: int
    exhausted: bool           # budget ran out (otherwise the space closed)

    def __bool__(self):
        return False


def _names(w):
    for base, inv in w.letters:
        if inv:
            raise ValueError("chain words must be positive")
    return tuple(base for base, _ in w.letters)


def _apply(names, step, pairs):
    """Result of one step on a name tuple, or None with a reason."""
    n = len(names)
    if not 0 <= step.pos <= n:
        return None, "position out of range"
    if any(_is_tagged(x) for x in names[:step.pos]):
        return None, "prefix left of the step is not positive"
    if step.kind == "r_step":
        if not 0 <= step.rel < len(pairs):
            return None, "relation index out of range"
        lhs, rhs = pairs[step.rel]
        if not step.forward:
            lhs, rhs = rhs, lhs
        if names[step.pos:step.pos + len(lhs)] != lhs:
            return None, "pair left side does not occur at the position"
        return names[:step.pos] + rhs + names[step.pos + len(lhs):], ""
    if step.kind == "insertion":
        a = step.letter
        return names[:step.pos] + (a, a + R_SUFFIX) + names[step.pos:], ""
    if step.kind == "deletion":
        a = step.letter
        if names[step.pos:step.pos + 2] != (a, a + R_SUFFIX):
            return None, "no a a^R factor at the position"
        return names[:step.pos] + names[step.pos + 2:], ""
    return None, f"unknown step kind {step.kind!r}"


def _rel_pairs(p):
    if p.kind != "rc_monoid":
        raise ValueError(f"need an rc_monoid presentation, got {p.kind}")
    return tuple((_names(lhs), _names(rhs)) for lhs, rhs in p.relations)


def validate_chain(p, chain):
    """Check every step and the insertion/deletion pairing."""
    pairs = _rel_pairs(p)
    words = [tuple(base for base, _ in w.letters) for w in chain.words]
    if len(words) != len(chain.steps) + 1:
        return ChainCheck(False, -1, "word/step counts disagree")
    for end, which in ((words[0], "first"), (words[-1], "last")):
        if any(_is_tagged(x) for x in end):
            return ChainCheck(False, -1, f"{which} word is not over A")
    for w in chain.words:
        for base, inv in w.letters:
            if inv:
                return ChainCheck(False, -1, "chain word with a formal inverse")
    stack = []
    matched = []
    for i, step in enumerate(chain.steps):
        result, reason = _apply(words[i], step, pairs)
        if result is None:
            return ChainCheck(False, i, reason)
        if result != words[i + 1]:
            return ChainCheck(False, i, "step result differs from next word")
        if step.kind == "insertion":
            stack.append((i, step.letter))
        elif step.kind == "deletion":
            if not stack:
                return ChainCheck(False, i, "deletion without open insertion")
            j, a = stack.pop()
            if a != step.letter:
                return ChainCheck(False, i, "deletion letter mismatch")
            matched.append((j, i))
    if stack:
        return ChainCheck(False, stack[-1][0], "unmatched insertion")
    return ChainCheck(True, pairs=tuple(matched))


def _successors(names, oriented, base_letters, max_len):
    """All words one legal step away, with the step taken."""
    n = len(names)
    first_tagged = n
    for i, x in enumerate(names):
        if _is_tagged(x):
            first_tagged = i
            break
    out = []
    for rel, fwd, lhs, rhs in oriented:
        if n - len(lhs) + len(rhs) > max_len:
            continue
        for j in range(min(first_tagged, n - len(lhs)) + 1):
            if names[j:j + len(lhs)] == lhs:
                out.append((names[:j] + rhs + names[j + len(lhs):],
                            Step("r_step", j, rel=rel, forward=fwd)))
    if n + 2 <= max_len:
        for a in base_letters:
            pair = (a, a + R_SUFFIX)
            for j in range(first_tagged + 1):
                out.append((names[:j] + pair + names[j:],
                            Step("insertion", j, letter=a)))
    j = first_tagged - 1
    if 0 <= j and first_tagged < n and names[j] + R_SUFFIX == names[j + 1]:
        out.append((names[:j] + names[j + 2:],
                    Step("deletion", j, letter=names[j])))
    return out


def search_chain(p, u, v, max_len, max_steps):
    """Bidirectional breadth-first search for a chain from u to v.

    States are the words themselves; max_steps caps the number of distinct
    words stored across both directions.  A missing chain is never a
    disproof of equality.
    """
    if max_len <= 0 or max_steps <= 0:
        raise ValueError("budgets must be positive")
    pairs = _rel_pairs(p)
    oriented = []
    for idx, (lhs, rhs) in enumerate(pairs):
        if lhs == rhs:
            continue
        oriented.append((idx, True, lhs, rhs))
        oriented.append((idx, False, rhs, lhs))
    base_letters = p.alphabet.base_letters
    alpha = rc_alphabet(p)

    su, sv = _names(u), _names(v)
    if su == sv:
        return RChain((Word(tuple((x, False) for x in su), alpha),), ())
    if len(su) > max_len or len(sv) > max_len:
        return ChainNotFound(max_len, max_steps, 0, exhausted=False)

    fwd = {su: None}
    bwd = {sv: None}
    frontier_f = [su]
    frontier_b = [sv]
    visited = 2
    meet = None
    link = None

    while frontier_f and frontier_b and meet is None:
        grow_forward = len(frontier_f) <= len(frontier_b)
        frontier = frontier_f if grow_forward else frontier_b
        this, other = (fwd, bwd) if grow_forward else (bwd, fwd)
        nxt = []
        for state in frontier:
            for succ, step in _successors(state, oriented, base_letters,
                                          max_len):
                if succ in this:
                    continue
                if visited >= max_steps:
                    return ChainNotFound(max_len, max_steps, visited,
                                         exhausted=True)
                this[succ] = ((state, step) if grow_forward
                              else (state, invert_step(step)))
                visited += 1
                if succ in other:
                    meet = succ
                    break
                nxt.append(succ)
            if meet is not None:
                break
        if grow_forward:
            frontier_f = nxt
        else:
            frontier_b = nxt

    if meet is None:
        return ChainNotFound(max_len, max_steps, visited, exhausted=False)

    front = []      # (word, step leading *into* the next word)
    state = meet
    while fwd[state] is not None:
        prev, step = fwd[state]
        front.append((state, step))
        state = prev
    names_seq = [state]
    steps = []
    for w, step in reversed(front):
        steps.append(step)
        names_seq.append(w)
    state = meet
    while bwd[state] is not None:
        nxt_state, step = bwd[state]
        steps.append(step)
        names_seq.append(nxt_state)
        state = nxt_state

    chain = RChain(tuple(Word(tuple((x, False) for x in w), alpha)
                         for w in names_seq), tuple(steps))
    check = validate_chain(p, chain)
    if not check:
        raise AssertionError(f"search produced an invalid chain: "
                             f"{check.message} at step {check.step}")
    return chain


def chain_to_text(chain):
    lines = []
    for i, w in enumerate(chain.words):
        lines.append(f"word {word_to_text(w)}")
        if i < len(chain.steps):
            s = chain.steps[i]
            if s.kind == "r_step":
                lines.append(f"step r_step {s.pos} {s.rel} "
                             f"{'+' if s.forward else '-'}")
            else:
                lines.append(f"step {s.kind} {s.pos} {s.letter}")
    return "\n".join(lines) + "\n"


def chain_from_text(text, p):
    alpha = rc_alphabet(p)
    words = []
    steps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tag, _, rest = line.partition(" ")
        if tag == "word":
            words.append(word_from_text(rest, alpha))
        elif tag == "step":
            parts = rest.split()
            try:
                if parts[0] == "r_step":
                    steps.append(Step("r_step", int(parts[1]),
                                      rel=int(parts[2]),
                                      forward=parts[3] == "+"))
                elif parts[0] in ("insertion", "deletion"):
                    steps.append(Step(parts[0], int(parts[1]),
                                      letter=parts[2]))
                else:
                    raise ValueError(f"unknown step kind {parts[0]!r}")
            except (IndexError, ValueError) as exc:
                raise ValueError(f"line {lineno}: {exc}")
        else:
            raise ValueError(f"line {lineno}: unknown directive {tag!r}")
    return RChain(tuple(words), tuple(steps))


# The M_r family over {a0, a1, p0, p1, q0, q1}: blocks of the shape
# q a^k p flip their index as a unit when k stays within the level.

MR_LETTERS = ("a0", "a1", "p0", "p1", "q0", "q1")


def mr_presentation(r):
    if r < 0:
        raise ValueError("truncation level must be nonnegative")
    alpha = InvolutiveAlphabet(MR_LETTERS)
    rel = []
    for m in range(r + 1):
        lhs = word_from_text("q0 " + "a0 " * m + "p0", alpha)
        rhs = word_from_text("q1 " + "a1 " * m + "p1", alpha)
        rel.append((lhs, rhs))
    return Presentation("rc_monoid", alpha, tuple(rel), name=f"M_{r}")


def _mr_names(w):
    names = _names(w)
    for x in names:
        if x not in MR_LETTERS:
            raise ValueError(f"letter {x!r} outside the M_r alphabet")
    return names


def _blocks(forgotten):
    """Maximal q a^k p spans (start, end inclusive), scanned left to right."""
    out = []
    i, n = 0, len(forgotten)
    while i < n:
        if forgotten[i] == "q":
            j = i + 1
            while j < n and forgotten[j] == "a":
                j += 1
            if j < n and forgotten[j] == "p":
                out.append((i, j))
                i = j + 1
                continue
        i += 1
    return out


def mr_canonical(r, w):
    """Flip every uniformly indexed block with k ≤ r to index 0.

    r=None lifts the length restriction (the untruncated family).
    Words are equal in M_r exactly when their canonical forms coincide.
    """
    if r is not None and r < 0:
        raise ValueError("truncation level must be nonnegative")
    names = list(_mr_names(w))
    forgotten = [x[:-1] for x in names]
    for start, end in _blocks(forgotten):
        k = end - start - 1
        if r is not None and k > r:
            continue
        indices = {names[i][-1] for i in range(start, end + 1)}
        if len(indices) == 1:
            for i in range(start, end + 1):
                names[i] = forgotten[i] + "0"
    alpha = w.alphabet
    return Word(tuple((x, False) for x in names), alpha)


def mr_equal(r, u, v):
    return mr_canonical(r, u).letters == mr_canonical(r, v).letters
