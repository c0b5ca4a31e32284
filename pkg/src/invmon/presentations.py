"""Presentation files: parsing, serialization, group image, prefix generators.

One line-oriented grammar serves all four presentation kinds::

    # comment
    @name M1
    @kind special_inverse
    @gens a b
    @rel a b a' = 1
    @trunc L=2 depth=6

Relator-form kinds (special_inverse, group) require every right-hand side
to be the empty word; rc_monoid and monoid require both sides positive.
"""

from dataclasses import dataclass, field

from .words import InvolutiveAlphabet, Word, word_from_text, word_to_text

KINDS = ("special_inverse", "rc_monoid", "group", "monoid")
_RELATOR_KINDS = ("special_inverse", "group")


@dataclass(frozen=True, eq=True)
class Presentation:
    kind: str
    alphabet: InvolutiveAlphabet
    relations: tuple       # of (lhs: Word, rhs: Word)
    name: str = ""
    comments: tuple = ()
    trunc: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown presentation kind {self.kind!r}")
        for lhs, rhs in self.relations:
            for side in (lhs, rhs):
                if side.alphabet != self.alphabet:
                    raise ValueError("relation word over a foreign alphabet")
            if self.kind in _RELATOR_KINDS and len(rhs) != 0:
                raise ValueError(
                    f"kind {self.kind} requires relator form w = 1, "
                    f"got rhs {word_to_text(rhs)!r}")
            if self.kind not in _RELATOR_KINDS:
                if not (lhs.is_positive() and rhs.is_positive()):
                    raise ValueError(
                        f"kind {self.kind} relations must be positive words")

    def __hash__(self):
        return hash((self.kind, self.alphabet, self.relations, self.name))

    def relators(self):
        """Left-hand sides, for relator-form kinds."""
        return [lhs for lhs, _ in self.relations]


class PresentationSyntaxError(ValueError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def parse_presentation(text):
    if isinstance(text, bytes):
        text = text.decode()
    kind = None
    name = ""
    gens = []
    rel_lines = []       # (lineno, lhs text, rhs text)
    trunc = {}
    comments = []
    seen_directive = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            stripped = raw.strip()
            if stripped.startswith("#") and not seen_directive:
                comments.append(stripped[1:].strip())
            continue
        seen_directive = True
        tag, _, rest = line.partition(" ")
        rest = rest.strip()
        if tag == "@kind":
            if rest not in KINDS:
                raise PresentationSyntaxError(lineno, f"unknown kind {rest!r}")
            kind = rest
        elif tag == "@name":
            name = rest
        elif tag == "@gens":
            gens.extend(rest.split())
        elif tag == "@rel":
            lhs_text, eq, rhs_text = rest.partition("=")
            if not eq:
                raise PresentationSyntaxError(lineno, "missing '=' in @rel")
            rel_lines.append((lineno, lhs_text.strip(), rhs_text.strip()))
        elif tag == "@trunc":
            for item in rest.split():
                key, eq, value = item.partition("=")
                if not eq or not key:
                    raise PresentationSyntaxError(
                        lineno, f"bad @trunc item {item!r}")
                trunc[key] = value
        else:
            raise PresentationSyntaxError(lineno, f"unknown directive {tag!r}")
    if kind is None:
        raise PresentationSyntaxError(0, "missing @kind")
    try:
        alphabet = InvolutiveAlphabet(gens)
    except ValueError as exc:
        raise PresentationSyntaxError(0, str(exc))
    relations = []
    for lineno, lhs_text, rhs_text in rel_lines:
        try:
            lhs = word_from_text(lhs_text, alphabet)
            rhs = word_from_text(rhs_text, alphabet)
        except ValueError as exc:
            raise PresentationSyntaxError(lineno, str(exc))
        relations.append((lhs, rhs))
    try:
        return Presentation(kind, alphabet, tuple(relations),
                            name=name, comments=tuple(comments), trunc=trunc)
    except ValueError as exc:
        raise PresentationSyntaxError(0, str(exc))


def serialize_presentation(p):
    lines = [f"# {c}" if c else "#" for c in p.comments]
    if p.name:
        lines.append(f"@name {p.name}")
    lines.append(f"@kind {p.kind}")
    lines.append("@gens " + " ".join(p.alphabet.base_letters))
    for lhs, rhs in p.relations:
        lines.append(f"@rel {word_to_text(lhs)} = {word_to_text(rhs)}")
    if p.trunc:
        items = " ".join(f"{k}={p.trunc[k]}" for k in sorted(p.trunc))
        lines.append(f"@trunc {items}")
    return "\n".join(lines) + "\n"


def group_image(p):
    """The group defined by the same generators and relators."""
    if p.kind != "special_inverse":
        raise ValueError(f"group_image needs a special_inverse presentation, "
                         f"got {p.kind}")
    return Presentation("group", p.alphabet, p.relations,
                        name=p.name, comments=p.comments, trunc=dict(p.trunc))


@dataclass(frozen=True)
class PrefixGeneratorSet:
    words: tuple
    sources: tuple   # parallel: index of the first relation yielding the word


def prefix_generators(p):
    """All nonempty relator prefixes, deduplicated by literal equality."""
    if p.kind not in _RELATOR_KINDS:
        raise ValueError(f"prefix generators need relator form, got {p.kind}")
    words = []
    sources = []
    seen = set()
    for idx, (lhs, _) in enumerate(p.relations):
        for k in range(1, len(lhs) + 1):
            prefix = lhs[:k]
            if prefix.letters not in seen:
                seen.add(prefix.letters)
                words.append(prefix)
                sources.append(idx)
    return PrefixGeneratorSet(tuple(words), tuple(sources))
