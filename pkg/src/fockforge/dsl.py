"""Parser and renderer for ``.fkf`` experiment files.

One directive per line; ``#`` starts a comment::

    modes 4
    input 0 3
    bs 0 1
    swap 1 2
    phase 0 $phiA          # decimal radians, kpi, k/mpi or a $variable
    postselect one-per-side
    sweep phiA 0 2pi 16     # steps points from start, stop excluded

Every problem in a file is collected and reported together, each with a
1-based (line, column) pointing at the offending token.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .circuit import BeamSplitter, Circuit, CircuitElement, Phase, PhaseShift, PhaseVar, Swap
from .errors import DomainError, FockforgeError

POSTSELECT_RULES = ("one-per-side", "none")

_DECIMAL = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_PI = re.compile(r"([+-]?)(?:(\d+)(?:/(\d+))?)?pi")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"[^ \t]+")
_MAX_MODES = 64
_MAX_STEPS = 1_000_000


@dataclass(frozen=True)
class ParseError:
    line: int
    column: int
    message: str
    token: str = ""

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class FkfSyntaxError(FockforgeError):
    """Raised by :func:`parse`; ``errors`` holds every problem found, in source order."""

    def __init__(self, errors: list[ParseError], source_name: str = "<fkf>"):
        self.errors = sorted(errors, key=lambda e: (e.line, e.column))
        self.source_name = source_name
        super().__init__("\n".join(f"{source_name}:{e}" for e in self.errors))


@dataclass(frozen=True)
class SweepAxis:
    var: str
    start: float
    stop: float
    steps: int

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise DomainError(f"sweep over {self.var} needs steps >= 1, got {self.steps}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise DomainError(f"sweep over {self.var} has a non-finite bound")

    def values(self) -> list[float]:
        width = self.stop - self.start
        return [self.start + k * width / self.steps for k in range(self.steps)]


@dataclass(frozen=True)
class ExperimentSpec:
    circuit: Circuit
    input_photons: tuple[int, ...] = ()
    postselect: str = "none"
    sweep: tuple[SweepAxis, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "input_photons", tuple(self.input_photons))
        object.__setattr__(self, "sweep", tuple(self.sweep))
        m = self.circuit.mode_count
        for k in self.input_photons:
            if not 0 <= k < m:
                raise DomainError(f"input photon in mode {k}, outside [0, {m})")
        if self.postselect not in POSTSELECT_RULES:
            raise DomainError(f"unknown post-selection rule {self.postselect!r}")
        if self.postselect == "one-per-side" and m != 4:
            raise DomainError("one-per-side post-selection needs exactly 4 modes")
        names = [a.var for a in self.sweep]
        if len(set(names)) != len(names):
            raise DomainError("a variable is swept twice")
        free = set(self.circuit.variables())
        if set(names) != free:
            raise DomainError(
                f"swept variables {sorted(names)} do not match circuit variables {sorted(free)}"
            )

    def grid(self) -> Iterator[dict[str, float]]:
        """Variable bindings in row-major order (first sweep line outermost)."""
        def rec(i: int, acc: dict[str, float]) -> Iterator[dict[str, float]]:
            if i == len(self.sweep):
                yield dict(acc)
                return
            axis = self.sweep[i]
            for v in axis.values():
                acc[axis.var] = v
                yield from rec(i + 1, acc)
        return rec(0, {})


def parse_phase_literal(text: str) -> float:
    """Decimal radians, ``pi``, ``<k>pi`` or ``<k>/<m>pi`` (optionally signed)."""
    m = _PI.fullmatch(text)
    if m:
        sign, num, den = m.groups()
        if max(len(num or ""), len(den or "")) > 12:
            raise ValueError("multiplier too large")
        k = int(num) if num is not None else 1
        d = int(den) if den is not None else 1
        if d == 0:
            raise ValueError("zero denominator")
        value = k * math.pi / d
        return -value if sign == "-" else value
    if _DECIMAL.fullmatch(text):
        value = float(text)
        if not math.isfinite(value):
            raise ValueError("phase is not finite")
        return value
    raise ValueError("expected decimal radians, <k>pi or <k>/<m>pi")


def format_phase(phi: Phase) -> str:
    if isinstance(phi, PhaseVar):
        return str(phi)
    phi = float(phi)
    if not math.isfinite(phi):
        raise DomainError(f"cannot render non-finite phase {phi}")
    if phi == 0.0:
        return "0"
    frac = Fraction(abs(phi) / math.pi).limit_denominator(1000)
    k, d = frac.numerator, frac.denominator
    if 0 < k < 10**12:  # parser caps multipliers at 12 digits
        value = k * math.pi / d
        if (value if phi > 0 else -value) == phi:
            sign = "-" if phi < 0 else ""
            if d == 1:
                return f"{sign}pi" if k == 1 else f"{sign}{k}pi"
            return f"{sign}{k}/{d}pi"
    return repr(phi)


def _tokens(line: str) -> list[tuple[int, str]]:
    return [(m.start() + 1, m.group()) for m in _TOKEN.finditer(line)]


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.errors: list[ParseError] = []

    def error(self, line: int, col: int, message: str, token: str = "") -> None:
        self.errors.append(ParseError(line, col, message, token))

    def parse(self) -> ExperimentSpec | None:
        lines = []
        for lineno, raw in enumerate(self.source.split("\n"), start=1):
            if raw.endswith("\r"):
                raw = raw[:-1]
            code = raw.split("#", 1)[0]
            toks = _tokens(code)
            if toks:
                lines.append((lineno, toks))

        modes = None
        for lineno, toks in lines:
            if toks[0][1] == "modes":
                if modes is not None:
                    self.error(lineno, toks[0][0], "duplicate 'modes' directive", "modes")
                    continue
                modes = -1  # present; stays -1 if unusable, which suppresses range checks
                if self.arity(lineno, toks, 1):
                    value = self.integer(lineno, toks[1], lo=1, hi=_MAX_MODES, what="mode count")
                    if value is not None:
                        modes = value
        if modes is None:
            self.error(1, 1, "no modes directive")
            modes = -1

        elements: list[CircuitElement] = []
        var_uses: list[tuple[int, int, str]] = []
        inputs: tuple[int, ...] = ()
        input_seen = postselect_seen = False
        postselect = "none"
        sweeps: list[tuple[int, int, SweepAxis]] = []
        # names declared by sweep lines, kept even when the line has other errors
        declared: dict[str, tuple[int, int]] = {}

        for lineno, toks in lines:
            col, word = toks[0]
            if word == "modes":
                continue
            if word in ("bs", "swap"):
                if not self.arity(lineno, toks, 2):
                    continue
                i = self.mode(lineno, toks[1], modes)
                j = self.mode(lineno, toks[2], modes)
                if i is None or j is None:
                    continue
                if i == j:
                    self.error(lineno, toks[2][0], f"'{word}' needs two distinct modes, got {i} twice", toks[2][1])
                    continue
                elements.append(BeamSplitter(i, j) if word == "bs" else Swap(i, j))
            elif word == "phase":
                if not self.arity(lineno, toks, 2):
                    continue
                i = self.mode(lineno, toks[1], modes)
                phi = self.phase(lineno, toks[2], allow_var=True)
                if i is None or phi is None:
                    continue
                if isinstance(phi, PhaseVar):
                    var_uses.append((lineno, toks[2][0], phi.name))
                elements.append(PhaseShift(i, phi))
            elif word == "input":
                if input_seen:
                    self.error(lineno, col, "duplicate 'input' directive", word)
                    continue
                input_seen = True
                picked = [self.mode(lineno, t, modes) for t in toks[1:]]
                if all(p is not None for p in picked):
                    inputs = tuple(picked)
            elif word == "postselect":
                if postselect_seen:
                    self.error(lineno, col, "duplicate 'postselect' directive", word)
                    continue
                postselect_seen = True
                if not self.arity(lineno, toks, 1):
                    continue
                rcol, rule = toks[1]
                if rule not in POSTSELECT_RULES:
                    self.error(lineno, rcol, f"unknown post-selection rule '{rule}' (expected one-per-side or none)", rule)
                    continue
                if rule == "one-per-side" and modes not in (4, -1):
                    self.error(lineno, rcol, f"one-per-side needs 4 modes, file declares {modes}", rule)
                    continue
                postselect = rule
            elif word == "sweep":
                if not self.arity(lineno, toks, 4):
                    continue
                vcol, var = toks[1]
                ok = True
                if not _IDENT.fullmatch(var):
                    self.error(lineno, vcol, f"invalid sweep variable name '{var}'", var)
                    ok = False
                elif var in declared:
                    self.error(lineno, vcol, f"variable '{var}' is swept twice", var)
                    ok = False
                else:
                    declared[var] = (lineno, vcol)
                start = self.phase(lineno, toks[2], allow_var=False)
                stop = self.phase(lineno, toks[3], allow_var=False)
                steps = self.integer(lineno, toks[4], lo=1, hi=_MAX_STEPS, what="step count")
                if ok and None not in (start, stop, steps):
                    sweeps.append((lineno, vcol, SweepAxis(var, start, stop, steps)))
            else:
                self.error(lineno, col, f"unknown directive '{word}'", word)

        used = {name for _, _, name in var_uses}
        for lineno, col, name in var_uses:
            if name not in declared:
                self.error(lineno, col, f"variable '${name}' is not bound by any sweep line", "$" + name)
        for var, (lineno, col) in declared.items():
            if var not in used:
                self.error(lineno, col, f"sweep variable '{var}' is not used by any phase line", var)

        if self.errors:
            return None
        return ExperimentSpec(
            Circuit(modes, tuple(elements)), inputs, postselect, tuple(a for _, _, a in sweeps)
        )

    def arity(self, lineno: int, toks: list[tuple[int, str]], n: int) -> bool:
        got = len(toks) - 1
        if got == n:
            return True
        col, word = toks[0]
        if got > n:
            xcol, extra = toks[n + 1]
            self.error(lineno, xcol, f"'{word}' takes {n} argument(s), got {got}", extra)
        else:
            self.error(lineno, col, f"'{word}' takes {n} argument(s), got {got}", word)
        return False

    def integer(self, lineno: int, tok: tuple[int, str], lo: int, hi: int | None, what: str) -> int | None:
        col, text = tok
        if not re.fullmatch(r"[0-9]+", text):
            self.error(lineno, col, f"expected an integer {what}, got '{text}'", text)
            return None
        value = int(text) if len(text) <= 12 else 10**12
        if value < lo or (hi is not None and value > hi):
            bound = f"[{lo}, {hi}]" if hi is not None else f">= {lo}"
            self.error(lineno, col, f"{what} {value} out of range {bound}", text)
            return None
        return value

    def mode(self, lineno: int, tok: tuple[int, str], modes: int) -> int | None:
        col, text = tok
        if not re.fullmatch(r"[0-9]+", text):
            self.error(lineno, col, f"expected a mode index, got '{text}'", text)
            return None
        value = int(text) if len(text) <= 12 else 10**12
        if modes >= 1 and value >= modes:
            self.error(lineno, col, f"mode {value} out of range [0, {modes})", text)
            return None
        return value

    def phase(self, lineno: int, tok: tuple[int, str], allow_var: bool) -> Phase | None:
        col, text = tok
        if text.startswith("$"):
            if not allow_var:
                self.error(lineno, col, f"variables are not allowed here: '{text}'", text)
                return None
            if not _IDENT.fullmatch(text[1:]):
                self.error(lineno, col, f"invalid variable name '{text}'", text)
                return None
            return PhaseVar(text[1:])
        try:
            return parse_phase_literal(text)
        except ValueError as exc:
            self.error(lineno, col, f"bad phase '{text}': {exc}", text)
            return None


def parse(source: str, source_name: str = "<fkf>") -> ExperimentSpec:
    """Parse ``.fkf`` text.  Raises :class:`FkfSyntaxError` listing every error."""
    parser = _Parser(source)
    spec = parser.parse()
    if spec is None:
        raise FkfSyntaxError(parser.errors, source_name)
    return spec


def parse_bytes(data: bytes, source_name: str = "<fkf>") -> ExperimentSpec:
    """Decode UTF-8 then :func:`parse`; an invalid byte is reported at its position."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        head = data[: exc.start].decode("utf-8", errors="replace")
        line = head.count("\n") + 1
        column = len(head) - (head.rfind("\n") + 1) + 1
        bad = data[exc.start : exc.end].hex()
        raise FkfSyntaxError([ParseError(line, column, f"invalid UTF-8 byte(s) 0x{bad}", bad)], source_name) from None
    if text.startswith("\ufeff"):
        text = text[1:]
    return parse(text, source_name)


def render(spec: ExperimentSpec) -> str:
    """Canonical text: ``parse(render(x)) == x``."""
    c = spec.circuit
    out = [f"modes {c.mode_count}"]
    if spec.input_photons:
        out.append("input " + " ".join(str(k) for k in spec.input_photons))
    for e in c.elements:
        if isinstance(e, BeamSplitter):
            out.append(f"bs {e.i} {e.j}")
        elif isinstance(e, Swap):
            out.append(f"swap {e.i} {e.j}")
        else:
            out.append(f"phase {e.mode} {format_phase(e.phi)}")
    if spec.postselect != "none":
        out.append(f"postselect {spec.postselect}")
    for a in spec.sweep:
        out.append(f"sweep {a.var} {format_phase(a.start)} {format_phase(a.stop)} {a.steps}")
    return "\n".join(out) + "\n"
