"""OpenQASM 2.0 subset: the interchange syntax for circuits.

Supported statements: the version header, include lines (ignored), qreg/creg
declarations, applications of the catalog gates with literal or pi-fraction
parameters, measure with `->`, and barrier. Multiple registers are flattened
into one index space in declaration order. `gate` definitions are rejected.

Multi-controlled X serializes through the standard library aliases: 3 and 4
controls become c3x/c4x (both defined by qelib1.inc), 1 or 2 controls
canonicalize to cx/ccx. Wider fan-in must be decomposed before emission.
"""
from __future__ import annotations

import math
import re

from .circuit import Circuit, GateInstance, GateKind
from .errors import QasmEmitError, QasmError

# Parse errors are raised as QasmError; re-export under the contract name.
ParseError = QasmError

_GATE_NAMES = {k.value: k for k in GateKind if k not in (GateKind.MEASURE, GateKind.BARRIER)}
_MCX_ALIASES = {"c3x": 3, "c4x": 4}
_REJECTED_KEYWORDS = {"gate", "opaque", "if", "reset"}

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<comment>//[^\n]*)"
    r"|(?P<number>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<string>\"[^\"\n]*\")"
    r"|(?P<arrow>->)"
    r"|(?P<sym>[;,()\[\]{}*/+-])"
)


class _Token:
    __slots__ = ("kind", "text", "line", "column")

    def __init__(self, kind, text, line, column):
        self.kind = kind
        self.text = text
        self.line = line
        self.column = column


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QasmError(f"unexpected character {text[pos]!r}", line, col, text[pos])
        kind = m.lastgroup
        lexeme = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.qregs: dict[str, tuple[int, int]] = {}   # name -> (offset, size)
        self.cregs: dict[str, tuple[int, int]] = {}
        self.num_qubits = 0
        self.num_clbits = 0
        self.ops: list[tuple[GateKind, tuple[int, ...], tuple[int, ...], tuple[float, ...]]] = []

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.take()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            raise QasmError(f"expected {want!r}, found {tok.text or 'end of input'!r}",
                            tok.line, tok.column, tok.text)
        return tok

    def fail(self, message: str, tok: _Token):
        raise QasmError(message, tok.line, tok.column, tok.text)

    # -- statements ------------------------------------------------------

    def parse(self) -> Circuit:
        while self.peek().kind != "eof":
            self.statement()
        gates = tuple(GateInstance(i, k, q, c, p) for i, (k, q, c, p) in enumerate(self.ops))
        return Circuit(self.num_qubits, self.num_clbits, gates)

    def statement(self):
        tok = self.peek()
        if tok.kind != "ident":
            self.fail(f"expected a statement, found {tok.text!r}", tok)
        name = tok.text
        if name == "OPENQASM":
            self.take()
            version = self.expect("number")
            if version.text not in ("2.0", "2"):
                self.fail(f"unsupported OPENQASM version {version.text}", version)
            self.expect("sym", ";")
        elif name == "include":
            self.take()
            self.expect("string")
            self.expect("sym", ";")
        elif name in ("qreg", "creg"):
            self.take()
            self.register_decl(name)
        elif name == "measure":
            self.take()
            self.measure_stmt()
        elif name == "barrier":
            self.take()
            self.barrier_stmt()
        elif name in _REJECTED_KEYWORDS:
            self.fail(f"{name!r} statements are not supported", tok)
        else:
            self.take()
            self.gate_stmt(name, tok)

    def register_decl(self, which: str):
        name_tok = self.expect("ident")
        self.expect("sym", "[")
        size_tok = self.expect("number")
        self.expect("sym", "]")
        self.expect("sym", ";")
        try:
            size = int(size_tok.text)
        except ValueError:
            self.fail(f"register size must be an integer, found {size_tok.text!r}", size_tok)
        if size < 1:
            self.fail("register size must be at least 1", size_tok)
        name = name_tok.text
        if name in self.qregs or name in self.cregs:
            self.fail(f"register {name!r} already declared", name_tok)
        if which == "qreg":
            self.qregs[name] = (self.num_qubits, size)
            self.num_qubits += size
        else:
            self.cregs[name] = (self.num_clbits, size)
            self.num_clbits += size

    def operand(self, table: dict[str, tuple[int, int]], what: str) -> list[int]:
        """One operand: `name[i]` -> single index, bare `name` -> all indices."""
        name_tok = self.expect("ident")
        reg = table.get(name_tok.text)
        if reg is None:
            self.fail(f"undeclared {what} register {name_tok.text!r}", name_tok)
        offset, size = reg
        if self.peek().kind == "sym" and self.peek().text == "[":
            self.take()
            idx_tok = self.expect("number")
            self.expect("sym", "]")
            try:
                idx = int(idx_tok.text)
            except ValueError:
                self.fail(f"index must be an integer, found {idx_tok.text!r}", idx_tok)
            if not 0 <= idx < size:
                self.fail(f"index {idx} out of range for {name_tok.text}[{size}]", idx_tok)
            return [offset + idx]
        return list(range(offset, offset + size))

    def measure_stmt(self):
        start = self.peek()
        src = self.operand(self.qregs, "quantum")
        self.expect("arrow")
        dst = self.operand(self.cregs, "classical")
        self.expect("sym", ";")
        if len(src) != len(dst):
            self.fail(f"measure maps {len(src)} qubit(s) to {len(dst)} classical bit(s)", start)
        for q, c in zip(src, dst):
            self.ops.append((GateKind.MEASURE, (q,), (c,), ()))

    def barrier_stmt(self):
        qubits: list[int] = []
        qubits.extend(self.operand(self.qregs, "quantum"))
        while self.peek().text == ",":
            self.take()
            qubits.extend(self.operand(self.qregs, "quantum"))
        self.expect("sym", ";")
        self.ops.append((GateKind.BARRIER, tuple(qubits), (), ()))

    def gate_stmt(self, name: str, name_tok: _Token):
        if name in _MCX_ALIASES:
            kind = GateKind.MCX
            needed = _MCX_ALIASES[name] + 1
        else:
            kind = _GATE_NAMES.get(name)
            if kind is None:
                self.fail(f"unknown gate {name!r}", name_tok)
            needed = kind.arity
        params: tuple[float, ...] = ()
        if self.peek().text == "(":
            self.take()
            values = [self.param_expr()]
            while self.peek().text == ",":
                self.take()
                values.append(self.param_expr())
            self.expect("sym", ")")
            params = tuple(values)
        if len(params) != kind.param_count:
            self.fail(f"{name} takes {kind.param_count} parameter(s), got {len(params)}", name_tok)

        operands = [self.operand(self.qregs, "quantum")]
        while self.peek().text == ",":
            self.take()
            operands.append(self.operand(self.qregs, "quantum"))
        self.expect("sym", ";")

        if all(len(o) == 1 for o in operands):
            qubits = tuple(o[0] for o in operands)
            if len(qubits) != needed:
                self.fail(f"{name} takes {needed} qubit(s), got {len(qubits)}", name_tok)
            self.ops.append((kind, qubits, (), params))
        elif needed == 1 and len(operands) == 1:
            for q in operands[0]:       # broadcast over a whole register
                self.ops.append((kind, (q,), (), params))
        else:
            self.fail(f"{name} needs indexed operands", name_tok)

    def param_expr(self) -> float:
        """Angle grammar: optional sign, then `k*pi/d`, `pi/d`, `pi`, or a literal."""
        sign = 1.0
        while self.peek().text in ("-", "+"):
            if self.take().text == "-":
                sign = -sign
        tok = self.take()
        if tok.kind == "number":
            value = float(tok.text)
            if self.peek().text == "*":
                self.take()
                pi_tok = self.expect("ident")
                if pi_tok.text != "pi":
                    self.fail(f"expected 'pi', found {pi_tok.text!r}", pi_tok)
                value *= math.pi
                value = self._maybe_divide(value)
        elif tok.kind == "ident" and tok.text == "pi":
            value = self._maybe_divide(math.pi)
        else:
            self.fail(f"malformed parameter expression near {tok.text!r}", tok)
        return sign * value

    def _maybe_divide(self, value: float) -> float:
        if self.peek().text == "/":
            self.take()
            den = self.expect("number")
            d = float(den.text)
            if d == 0:
                self.fail("division by zero in parameter", den)
            value /= d
        return value


def parse_qasm(text: str) -> Circuit:
    if not isinstance(text, str):
        text = bytes(text).decode("utf-8", errors="replace")
    return _Parser(text).parse()


# -- emission ------------------------------------------------------------

_MAX_PI_DENOMINATOR = 16


def format_angle(x: float) -> str:
    """Shortest exact form: a pi fraction with denominator <= 16, else a
    17-significant-digit decimal."""
    if x == 0:
        return "0"
    for d in range(1, _MAX_PI_DENOMINATOR + 1):
        k = round(x * d / math.pi)
        if k != 0 and abs(x - k * math.pi / d) < 1e-12:
            num = "pi" if k == 1 else "-pi" if k == -1 else f"{k}*pi"
            return num if d == 1 else f"{num}/{d}"
    return f"{x:.17g}"


def emit_qasm(circuit: Circuit) -> str:
    """Canonical text: one statement per line, single q/c registers, angles
    printed via format_angle. Deterministic for equal circuits."""
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.num_qubits}];"]
    if circuit.num_clbits:
        lines.append(f"creg c[{circuit.num_clbits}];")
    for g in circuit.gates:
        if g.kind is GateKind.MEASURE:
            lines.append(f"measure q[{g.qubits[0]}] -> c[{g.clbits[0]}];")
            continue
        if g.kind is GateKind.BARRIER:
            ops = ",".join(f"q[{q}]" for q in g.qubits)
            lines.append(f"barrier {ops};")
            continue
        name = g.kind.value
        if g.kind is GateKind.MCX:
            controls = len(g.qubits) - 1
            if controls == 1:
                name = "cx"
            elif controls == 2:
                name = "ccx"
            elif controls in (3, 4):
                name = f"c{controls}x"
            else:
                raise QasmEmitError(
                    f"gate {g.id}: mcx with {controls} controls has no QASM form; "
                    "decompose it first", gate=g.id)
        params = f"({','.join(format_angle(p) for p in g.params)})" if g.params else ""
        ops = ",".join(f"q[{q}]" for q in g.qubits)
        lines.append(f"{name}{params} {ops};")
    return "\n".join(lines) + "\n"
