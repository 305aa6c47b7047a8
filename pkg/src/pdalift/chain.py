"""One-line text format for lifting chains.

::

    chain  := base (">" step)*
    base   := name "(" int ("," int)* ")"
    step   := name "(" [int ("," int)*] ")" [anno]
    anno   := "@" "(" K "," f ")" "_" Z ["^" g]

Example: ``2pda(8,1) > bw2(4,2) @(64,64)_12^4``.  Error offsets count bytes
of the UTF-8 encoded input.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PdaError

BASES: dict[str, tuple[int, int]] = {
    "2pda": (2, 2), "1pda": (2, 2), "i": (1, 1), "j": (1, 1), "g": (1, 1), "h": (1, 1),
}

STEPS: dict[str, tuple[int, int]] = {
    "basic": (2, 3),
    "rows": (1, 1),
    "c1": (1, 1),
    "c2": (1, 1),
    "t1": (1, 2),
    "t2": (2, 3),
    "bw1": (2, 2),
    "bw2": (2, 2),
    "bw3": (2, 2),
    "bw4": (1, 1),
    "tiling": (2, 2),
    "tilingx": (2, 2),
    "lift2r": (1, 1),
    "nested2g": (1, 1),
    "randbc": (2, 5),
    "pair10x5": (0, 0),
    "pair12x3": (0, 0),
}


class ChainSyntaxError(PdaError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class UnknownStep(ChainSyntaxError):
    pass


class ArityError(ChainSyntaxError):
    pass


@dataclass(frozen=True)
class Annotation:
    K: int
    f: int
    Z: int
    g: int | None = None

    def render(self) -> str:
        tail = f"^{self.g}" if self.g is not None else ""
        return f"@({self.K},{self.f})_{self.Z}{tail}"


@dataclass(frozen=True)
class Step:
    name: str
    args: tuple[int, ...] = ()
    anno: Annotation | None = None

    def render(self) -> str:
        text = f"{self.name}({','.join(map(str, self.args))})"
        return f"{text} {self.anno.render()}" if self.anno else text


@dataclass(frozen=True)
class LiftChain:
    base: Step
    steps: tuple[Step, ...] = ()

    def render(self) -> str:
        return " > ".join([self.base.render()] + [s.render() for s in self.steps])

    def __str__(self) -> str:
        return self.render()

    def then(self, step: Step) -> LiftChain:
        return LiftChain(self.base, self.steps + (step,))


def render_chain(chain: LiftChain) -> str:
    return chain.render()


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def offset(self, pos: int | None = None) -> int:
        return len(self.text[:self.pos if pos is None else pos].encode("utf-8"))

    def fail(self, message: str, pos: int | None = None, cls=ChainSyntaxError):
        raise cls(message, self.offset(pos))

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        got = self.peek()
        if got != ch:
            found = repr(got) if got else "end of input"
            self.fail(f"expected {ch!r}, found {found}")
        self.pos += 1

    def word(self) -> tuple[str, int]:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isascii()
                                             and self.text[self.pos].isalnum()):
            self.pos += 1
        if start == self.pos:
            self.fail("expected a construction name")
        return self.text[start:self.pos], start

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in "0123456789":
            self.pos += 1
        if start == self.pos:
            self.fail("expected an integer")
        return int(self.text[start:self.pos])

    def args(self) -> tuple[int, ...]:
        self.expect("(")
        out = []
        if self.peek() == ")":
            self.pos += 1
            return ()
        out.append(self.integer())
        while self.peek() == ",":
            self.pos += 1
            out.append(self.integer())
        self.expect(")")
        return tuple(out)

    def call(self, table: dict[str, tuple[int, int]], what: str) -> Step:
        name, start = self.word()
        if name not in table:
            self.fail(f"unknown {what} {name!r}", start, UnknownStep)
        args = self.args()
        lo, hi = table[name]
        if not lo <= len(args) <= hi:
            want = str(lo) if lo == hi else f"{lo} to {hi}"
            self.fail(f"{name} takes {want} arguments, got {len(args)}", start, ArityError)
        return Step(name, args)

    def annotation(self) -> Annotation:
        self.expect("@")
        self.expect("(")
        K = self.integer()
        self.expect(",")
        f = self.integer()
        self.expect(")")
        self.expect("_")
        Z = self.integer()
        g = None
        if self.peek() == "^":
            self.pos += 1
            g = self.integer()
        return Annotation(K, f, Z, g)

    def chain(self) -> LiftChain:
        if not self.text.strip():
            self.fail("empty chain")
        base = self.call(BASES, "base")
        steps = []
        while self.peek() == ">":
            self.pos += 1
            step = self.call(STEPS, "step")
            if self.peek() == "@":
                step = Step(step.name, step.args, self.annotation())
            steps.append(step)
        if self.peek():
            self.fail(f"unexpected {self.peek()!r}")
        return LiftChain(base, tuple(steps))


def parse_chain(text: str) -> LiftChain:
    return _Parser(text).chain()
