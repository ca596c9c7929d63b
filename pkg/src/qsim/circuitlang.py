"""A line-oriented circuit language: parser, pretty-printer and executor.

Example::

    qubits 2
    set 1 1
    h all
    oracle f 0..0 -> 1..1
    h 0
    measure 0..0 as delta

Ranges are inclusive and qubit 0 is the most significant tensor factor.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DomainError
from .gates import apply_cnot, apply_hadamard, apply_1q, standard_gate
from .measure import RngStream, measure_subset
from .statevec import MAX_QUBITS, basis_state
from .transforms import ClassicalOracle, apply_diffusion, apply_oracle, apply_qft, load_oracle
from .algorithms.records import RunRecord

# Bounded digit counts keep huge literals from reaching int().
_INT = re.compile(r"[0-9]{1,9}\Z")
_RANGE = re.compile(r"([0-9]{1,9})\.\.([0-9]{1,9})\Z")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

GATE_OPS = ("h", "x", "y", "z", "cnot", "oracle", "qft", "iqft", "diffuse", "measure", "set", "load")


class CircuitError(DomainError):
    """Parse or validation failure, located by line and column (1-based)."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{message}, line {line}, column {column}")


class ExecutionError(DomainError):
    pass


@dataclass(frozen=True)
class Instruction:
    op: str
    args: tuple
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    instructions: tuple[Instruction, ...]
    classical_outputs: tuple[str, ...] = ()
    base_dir: str | None = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.instructions)


def _tokens(line: str) -> list[tuple[str, int]]:
    """Whitespace-separated tokens with 1-based columns; ``->`` always stands alone."""
    out = []
    i, n = 0, len(line)
    while i < n:
        if line[i].isspace():
            i += 1
            continue
        if line.startswith("->", i):
            out.append(("->", i + 1))
            i += 2
            continue
        j = i
        while j < n and not line[j].isspace() and not line.startswith("->", j):
            j += 1
        out.append((line[i:j], i + 1))
        i = j
    return out


class _LineParser:
    def __init__(self, toks, lineno: int, n_qubits: int | None):
        self.toks = toks
        self.lineno = lineno
        self.n = n_qubits

    def fail(self, msg: str, idx: int | None = None):
        col = self.toks[idx][1] if idx is not None and idx < len(self.toks) else (
            self.toks[-1][1] + len(self.toks[-1][0]) if self.toks else 1
        )
        raise CircuitError(msg, self.lineno, col)

    def expect_count(self, count: int, usage: str) -> None:
        if len(self.toks) != count:
            idx = count if len(self.toks) > count else None
            self.fail(f"expected '{usage}'", idx)

    def qubit(self, idx: int) -> int:
        tok = self.toks[idx][0] if idx < len(self.toks) else None
        if tok is None:
            self.fail("missing qubit index")
        if not _INT.match(tok):
            self.fail(f"expected a qubit index, got {tok!r}", idx)
        q = int(tok)
        if q >= self.n:
            self.fail(f"qubit index {q} out of range for {self.n} qubits", idx)
        return q

    def qrange(self, idx: int) -> tuple[int, int]:
        tok = self.toks[idx][0] if idx < len(self.toks) else None
        if tok is None:
            self.fail("missing qubit range")
        m = _RANGE.match(tok)
        if not m:
            self.fail(f"expected a range lo..hi, got {tok!r}", idx)
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo > hi:
            self.fail(f"empty range {tok}", idx)
        if hi >= self.n:
            self.fail(f"qubit index {hi} out of range for {self.n} qubits", idx)
        return lo, hi

    def name(self, idx: int, what: str) -> str:
        tok = self.toks[idx][0] if idx < len(self.toks) else None
        if tok is None:
            self.fail(f"missing {what}")
        if not _NAME.match(tok):
            self.fail(f"invalid {what} {tok!r}", idx)
        return tok

    def keyword(self, idx: int, word: str) -> None:
        tok = self.toks[idx][0] if idx < len(self.toks) else None
        if tok is None or tok.lower() != word:
            self.fail(f"expected '{word}'", idx)


def _decode(source) -> str:
    if isinstance(source, str):
        return source
    data = bytes(source)
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        head = data[: exc.start]
        line = head.count(b"\n") + 1
        col = exc.start - (head.rfind(b"\n") + 1) + 1
        raise CircuitError("invalid UTF-8 input", line, col) from None


def parse(source, base_dir=None) -> Circuit:
    """Parse circuit text (``str`` or UTF-8 ``bytes``) into a :class:`Circuit`."""
    text = _decode(source)
    n_qubits = None
    instrs: list[Instruction] = []
    labels: list[str] = []
    touched: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = _tokens(body)
        if not toks:
            continue
        p = _LineParser(toks, lineno, n_qubits)
        word = toks[0][0]
        op = word.lower() if word.isascii() else word
        if op == "qubits":
            if n_qubits is not None:
                p.fail("duplicate qubits declaration", 0)
            p.expect_count(2, "qubits <n>")
            if not _INT.match(toks[1][0]):
                p.fail(f"expected a qubit count, got {toks[1][0]!r}", 1)
            count = int(toks[1][0])
            if not 1 <= count <= MAX_QUBITS:
                p.fail(f"qubit count must be between 1 and {MAX_QUBITS}", 1)
            n_qubits = count
            continue
        if op not in GATE_OPS:
            p.fail(f"unknown instruction {word!r}", 0)
        if n_qubits is None:
            p.fail("qubits declaration required first", 0)

        if op == "h":
            p.expect_count(2, "h <q> | h all")
            if toks[1][0].lower() == "all":
                args = ("all",)
                touched.update(range(n_qubits))
            else:
                q = p.qubit(1)
                args = (q,)
                touched.add(q)
        elif op in ("x", "y", "z"):
            p.expect_count(2, f"{op} <q>")
            q = p.qubit(1)
            args = (q,)
            touched.add(q)
        elif op == "cnot":
            p.expect_count(3, "cnot <c> <t>")
            c, t = p.qubit(1), p.qubit(2)
            if c == t:
                p.fail("control equals target", 2)
            args = (c, t)
            touched.update((c, t))
        elif op == "oracle":
            p.expect_count(5, "oracle <name> <lo>..<hi> -> <lo>..<hi>")
            name = p.name(1, "oracle name")
            src = p.qrange(2)
            p.keyword(3, "->")
            dst = p.qrange(4)
            if not (src[1] < dst[0] or dst[1] < src[0]):
                p.fail("oracle input and output ranges overlap", 4)
            args = (name, src, dst)
            touched.update(range(src[0], src[1] + 1))
            touched.update(range(dst[0], dst[1] + 1))
        elif op == "load":
            p.expect_count(3, "load <name> <path>")
            args = (p.name(1, "oracle name"), toks[2][0])
        elif op in ("qft", "iqft", "diffuse"):
            p.expect_count(2, f"{op} <lo>..<hi>")
            r = p.qrange(1)
            args = (r,)
            touched.update(range(r[0], r[1] + 1))
        elif op == "measure":
            p.expect_count(4, "measure <lo>..<hi> as <label> | measure all as <label>")
            if toks[1][0].lower() == "all":
                target = "all"
                touched.update(range(n_qubits))
            else:
                target = p.qrange(1)
                touched.update(range(target[0], target[1] + 1))
            p.keyword(2, "as")
            label = p.name(3, "label")
            if label in labels:
                p.fail(f"duplicate label {label!r}", 3)
            labels.append(label)
            args = (target, label)
        else:  # set
            p.expect_count(3, "set <q> 1")
            q = p.qubit(1)
            if toks[2][0] not in ("0", "1"):
                p.fail("set value must be 0 or 1", 2)
            if q in touched:
                p.fail(f"set on qubit {q} after a gate acted on it", 0)
            args = (q, int(toks[2][0]))
        instrs.append(Instruction(op, args, lineno))
    if n_qubits is None:
        raise CircuitError("qubits declaration required first", max(1, len(text.splitlines())), 1)
    return Circuit(n_qubits, tuple(instrs), tuple(labels), None if base_dir is None else str(base_dir))


def parse_file(path) -> Circuit:
    path = Path(path)
    return parse(path.read_bytes(), base_dir=path.parent)


def _fmt_range(r) -> str:
    return f"{r[0]}..{r[1]}"


def format_circuit(c: Circuit) -> str:
    """Canonical text; ``parse(format_circuit(c)) == c``."""
    lines = [f"qubits {c.n_qubits}"]
    for ins in c.instructions:
        a = ins.args
        if ins.op in ("h", "x", "y", "z"):
            lines.append(f"{ins.op} {a[0]}")
        elif ins.op == "cnot":
            lines.append(f"cnot {a[0]} {a[1]}")
        elif ins.op == "oracle":
            lines.append(f"oracle {a[0]} {_fmt_range(a[1])} -> {_fmt_range(a[2])}")
        elif ins.op == "load":
            lines.append(f"load {a[0]} {a[1]}")
        elif ins.op in ("qft", "iqft", "diffuse"):
            lines.append(f"{ins.op} {_fmt_range(a[0])}")
        elif ins.op == "measure":
            target = "all" if a[0] == "all" else _fmt_range(a[0])
            lines.append(f"measure {target} as {a[1]}")
        elif ins.op == "set":
            lines.append(f"set {a[0]} {a[1]}")
    return "\n".join(lines) + "\n"


def _describe(ins: Instruction) -> str:
    return format_circuit(Circuit(1, (ins,))).splitlines()[1]


def execute(
    c: Circuit,
    rng: RngStream,
    oracles: dict[str, ClassicalOracle] | None = None,
    trace: bool = False,
) -> RunRecord:
    """Run the instructions in order; labelled outcomes land in ``result['outputs']``.

    Tables passed in ``oracles`` take precedence over ``load`` lines.
    """
    tables = dict(oracles or {})
    rec = RunRecord("circuit", rng.seed, trace=trace)
    outputs: dict[str, int] = {}
    s = basis_state(c.n_qubits, 0)
    for ins in c.instructions:
        op, a = ins.op, ins.args
        if op == "set":
            if a[1] == 1:
                s = apply_1q(s, standard_gate("X"), a[0])
        elif op == "h":
            s = apply_hadamard(s, range(c.n_qubits) if a[0] == "all" else [a[0]])
        elif op in ("x", "y", "z"):
            s = apply_1q(s, standard_gate(op), a[0])
        elif op == "cnot":
            s = apply_cnot(s, a[0], a[1])
        elif op == "load":
            if a[0] not in tables:
                path = Path(a[1])
                if not path.is_absolute() and c.base_dir is not None:
                    path = Path(c.base_dir) / path
                try:
                    tables[a[0]] = load_oracle(path)
                except OSError as exc:
                    raise ExecutionError(f"cannot load oracle {a[0]!r}: {exc}, line {ins.line}") from None
        elif op == "oracle":
            name, src, dst = a
            f = tables.get(name)
            if f is None:
                raise ExecutionError(f"unresolved oracle {name!r}, line {ins.line}")
            ins_q = list(range(src[0], src[1] + 1))
            outs_q = list(range(dst[0], dst[1] + 1))
            if len(ins_q) != f.in_bits or len(outs_q) != f.out_bits:
                raise ExecutionError(
                    f"oracle {name!r} maps {f.in_bits} -> {f.out_bits} bits but the ranges "
                    f"have {len(ins_q)} -> {len(outs_q)}, line {ins.line}"
                )
            s = apply_oracle(s, f, ins_q, outs_q)
            rec.oracle_calls += 1
        elif op in ("qft", "iqft"):
            lo, hi = a[0]
            s = apply_qft(s, hi - lo + 1, inverse=(op == "iqft"), lo=lo)
        elif op == "diffuse":
            lo, hi = a[0]
            s = apply_diffusion(s, hi - lo + 1, lo=lo)
        elif op == "measure":
            target, label = a
            qs = range(c.n_qubits) if target == "all" else range(target[0], target[1] + 1)
            m = measure_subset(s, qs, rng)
            s = m.post_state
            outputs[label] = m.outcome
            rec.measured(label, m.outcome)
        if op != "load":
            rec.snapshot(f"line {ins.line}: {_describe(ins)}", s)
    rec.final_state = s
    rec.result = {"outputs": outputs, "success": True}
    return rec
