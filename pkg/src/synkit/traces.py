"""Stimulus and trace files.

Shared line format, bit-exact across the simulator, the verification
engines and the generated C harness:

    <tick>;<port>=<rendered-value-or-dash>;...

Ports appear in declaration order, ticks start at 0 and are contiguous,
lines are LF-terminated with no trailing separator. A stimulus row lists
the root component's input ports; a trace row lists the input ports
(echoed) followed by the output ports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .ast import Model, TypeDef
from .values import Message, ValueParseError, parse_message, render_message


class StimulusError(Exception):
    def __init__(self, code: str, message: str, line: int = 0):
        super().__init__(f"{code} at line {line}: {message}" if line else f"{code}: {message}")
        self.code = code  # UnknownPort | TypeMismatch | NonContiguousTicks | Format
        self.line = line


Row = dict[str, Message]


@dataclass
class Stimulus:
    rows: list[Row] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)


@dataclass
class TraceRow:
    inputs: Row
    outputs: Row


@dataclass
class Trace:
    rows: list[TraceRow] = field(default_factory=list)
    error: Optional[str] = None  # first evaluation error, if the run aborted


def _types_table(model: Model) -> dict[str, TypeDef]:
    from .ast import BUILTINS

    table = dict(BUILTINS)
    for t in model.typedefs:
        table[t.name] = t
    return table


def _parse_row(
    line: str, lineno: int, expect_tick: int, ports, types
) -> Row:
    fields = line.split(";")
    head = fields[0]
    if not head or not head.isdigit():
        raise StimulusError("Format", f"expected a tick number, found {head!r}", lineno)
    tick = int(head)
    if tick != expect_tick:
        raise StimulusError(
            "NonContiguousTicks", f"expected tick {expect_tick}, found {tick}", lineno
        )
    if len(fields) - 1 != len(ports):
        raise StimulusError(
            "Format", f"expected {len(ports)} port fields, found {len(fields) - 1}", lineno
        )
    row: Row = {}
    for port, item in zip(ports, fields[1:]):
        name, eq, value = item.partition("=")
        if not eq:
            raise StimulusError("Format", f"expected <port>=<value>, found {item!r}", lineno)
        if name != port.name:
            raise StimulusError(
                "UnknownPort", f"expected port {port.name}, found {name}", lineno
            )
        try:
            row[name] = parse_message(value, types[port.type_name], types)
        except ValueParseError as e:
            raise StimulusError("TypeMismatch", f"port {name}: {e}", lineno) from None
    return row


def parse_stimulus(text: str, model: Model) -> Stimulus:
    """Parse a stimulus file covering exactly the root input ports."""
    ports = model.root.inputs()
    types = _types_table(model)
    rows: list[Row] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        rows.append(_parse_row(line.strip(), lineno, len(rows), ports, types))
    return Stimulus(rows)


def render_stimulus(stim: Stimulus, model: Model) -> str:
    ports = model.root.inputs()
    out = []
    for tick, row in enumerate(stim.rows):
        cells = [str(tick)] + [f"{p.name}={render_message(row[p.name])}" for p in ports]
        out.append(";".join(cells))
    return "".join(line + "\n" for line in out)


def render_trace(trace: Trace, model: Model) -> str:
    ins = model.root.inputs()
    outs = model.root.outputs()
    lines = []
    for tick, row in enumerate(trace.rows):
        cells = [str(tick)]
        cells += [f"{p.name}={render_message(row.inputs[p.name])}" for p in ins]
        cells += [f"{p.name}={render_message(row.outputs[p.name])}" for p in outs]
        lines.append(";".join(cells))
    return "".join(line + "\n" for line in lines)


def parse_trace(text: str, model: Model) -> Trace:
    """Parse a trace file back into rows (inputs echoed, then outputs)."""
    ins = model.root.inputs()
    outs = model.root.outputs()
    types = _types_table(model)
    rows: list[TraceRow] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        merged = _parse_row(line.strip(), lineno, len(rows), ins + outs, types)
        rows.append(
            TraceRow(
                inputs={p.name: merged[p.name] for p in ins},
                outputs={p.name: merged[p.name] for p in outs},
            )
        )
    return Trace(rows)


def stimulus_of_trace(trace: Trace) -> Stimulus:
    return Stimulus([dict(row.inputs) for row in trace.rows])
