"""Operation histories on a single read/write register.

A history is a set of operations, each carrying an invocation and a response
timestamp. ``o1`` precedes ``o2`` when ``o1`` responds before ``o2`` is
invoked; otherwise the two are concurrent. Reads are mapped to the write that
produced their value, and each write together with its reads forms a cluster.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

WRITE = "W"
READ = "R"


class HistoryParseError(ValueError):
    """Raised for malformed history text. ``lineno`` is 1-based, or None."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)


class InvalidHistoryError(ValueError):
    """Raised when an operation needs a history that passes :func:`validate`."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        lines = [f"[{v.rule}] {v.message}" for v in report.violations]
        super().__init__("invalid history: " + "; ".join(lines))


@dataclass(frozen=True)
class Operation:
    op_id: str
    kind: str
    key: str
    value: str
    invoke_ts: int
    response_ts: int

    def __post_init__(self):
        if self.kind not in (WRITE, READ):
            raise ValueError(f"{self.op_id}: kind must be 'W' or 'R', got {self.kind!r}")
        if self.invoke_ts < 0 or self.response_ts < 0:
            raise ValueError(f"{self.op_id}: timestamps must be non-negative")
        if self.invoke_ts >= self.response_ts:
            raise ValueError(
                f"{self.op_id}: invoke_ts ({self.invoke_ts}) must be < "
                f"response_ts ({self.response_ts})"
            )

    @property
    def is_write(self) -> bool:
        return self.kind == WRITE

    @property
    def is_read(self) -> bool:
        return self.kind == READ

    def to_line(self) -> str:
        return ",".join(
            [self.op_id, self.kind, self.key, self.value, str(self.invoke_ts), str(self.response_ts)]
        )


def precedes(o1: Operation, o2: Operation) -> bool:
    """Real-time order: ``o1`` responded before ``o2`` was invoked."""
    return o1.response_ts < o2.invoke_ts


def concurrent(o1: Operation, o2: Operation) -> bool:
    return not precedes(o1, o2) and not precedes(o2, o1)


@dataclass(frozen=True)
class History:
    """Operations sorted by invocation time.

    Construction does not validate; see :func:`validate`.
    """

    operations: tuple[Operation, ...]

    def __init__(self, operations: Iterable[Operation] = ()):
        ops = tuple(sorted(operations, key=lambda o: (o.invoke_ts, o.op_id)))
        object.__setattr__(self, "operations", ops)

    def __len__(self) -> int:
        return len(self.operations)

    def __iter__(self):
        return iter(self.operations)

    @property
    def n(self) -> int:
        return len(self.operations)

    @property
    def n_w(self) -> int:
        return sum(1 for o in self.operations if o.is_write)

    @property
    def writes(self) -> list[Operation]:
        return [o for o in self.operations if o.is_write]

    @property
    def reads(self) -> list[Operation]:
        return [o for o in self.operations if o.is_read]

    @cached_property
    def w(self) -> int:
        return stats_w(self)

    @cached_property
    def index_of(self) -> dict[str, int]:
        return {o.op_id: k for k, o in enumerate(self.operations)}

    @cached_property
    def by_id(self) -> dict[str, Operation]:
        return {o.op_id: o for o in self.operations}

    @cached_property
    def precedence_matrix(self) -> np.ndarray:
        """``P[a, b]`` is True iff operation ``a`` precedes operation ``b``."""
        inv = np.array([o.invoke_ts for o in self.operations], dtype=np.int64)
        res = np.array([o.response_ts for o in self.operations], dtype=np.int64)
        return res[:, None] < inv[None, :]

    def to_text(self) -> str:
        return "".join(o.to_line() + "\n" for o in self.operations)

    def restrict_to_key(self, key: str) -> "History":
        return History(o for o in self.operations if o.key == key)


def parse_history(text: str) -> History:
    """Parse ``op_id,kind,key,value,invoke_ts,response_ts`` lines.

    Blank lines and lines starting with ``#`` are skipped. The result is not
    validated.
    """
    ops: list[Operation] = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 6:
            raise HistoryParseError(f"expected 6 comma-separated fields, got {len(fields)}", lineno)
        op_id, kind, key, value, s_raw, f_raw = fields
        if not op_id:
            raise HistoryParseError("empty op_id", lineno)
        if kind not in (WRITE, READ):
            raise HistoryParseError(f"kind must be W or R, got {kind!r}", lineno)
        stamps = []
        for raw_ts in (s_raw, f_raw):
            if not raw_ts.isdigit():
                raise HistoryParseError(f"timestamp must be a non-negative integer, got {raw_ts!r}", lineno)
            stamps.append(int(raw_ts))
        if stamps[0] >= stamps[1]:
            raise HistoryParseError(
                f"invoke_ts ({stamps[0]}) must be < response_ts ({stamps[1]})", lineno
            )
        if op_id in seen:
            raise HistoryParseError(f"duplicate op_id {op_id!r} (first on line {seen[op_id]})", lineno)
        seen[op_id] = lineno
        ops.append(Operation(op_id, kind, key, value, stamps[0], stamps[1]))
    return History(ops)


def load_history(path) -> History:
    with open(path, encoding="utf-8", newline=None) as fh:
        return parse_history(fh.read())


@dataclass(frozen=True)
class Violation:
    rule: str
    op_ids: tuple[str, ...]
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def validate(h: History) -> ValidationReport:
    """Check the register-history assumptions, in order:

    ``single-object``, ``unique-write-values``, ``read-mapping``,
    ``read-after-write`` and ``distinct-timestamps``. A history failing
    ``read-after-write`` (a read that finishes before its write starts) is
    buggy and is not measured.
    """
    out: list[Violation] = []

    keys = sorted({o.key for o in h})
    if len(keys) > 1:
        first = {}
        for o in h:
            first.setdefault(o.key, o.op_id)
        out.append(
            Violation(
                "single-object",
                tuple(first[k] for k in keys),
                f"operations touch {len(keys)} objects ({', '.join(keys)}); "
                "only single-object histories can be checked",
            )
        )

    writers: dict[str, list[Operation]] = {}
    for o in h.writes:
        writers.setdefault(o.value, []).append(o)
    for value, ws in writers.items():
        if len(ws) > 1:
            out.append(
                Violation(
                    "unique-write-values",
                    tuple(o.op_id for o in ws),
                    f"value {value!r} is written {len(ws)} times",
                )
            )

    for r in h.reads:
        ws = writers.get(r.value, [])
        if not ws:
            out.append(
                Violation("read-mapping", (r.op_id,), f"read {r.op_id} returns {r.value!r}, which no write produced")
            )
        elif len(ws) == 1 and precedes(r, ws[0]):
            out.append(
                Violation(
                    "read-after-write",
                    (r.op_id, ws[0].op_id),
                    f"read {r.op_id} completes before its dictating write {ws[0].op_id} starts",
                )
            )

    owner: dict[int, str] = {}
    for o in h:
        for ts in (o.invoke_ts, o.response_ts):
            if ts in owner:
                out.append(
                    Violation(
                        "distinct-timestamps",
                        (owner[ts], o.op_id) if owner[ts] != o.op_id else (o.op_id,),
                        f"timestamp {ts} is used more than once",
                    )
                )
            else:
                owner[ts] = o.op_id

    return ValidationReport(tuple(out))


def require_valid(h: History) -> None:
    report = validate(h)
    if not report.valid:
        raise InvalidHistoryError(report)


@dataclass(frozen=True)
class Cluster:
    """A write and the reads returning its value, reads in invocation order."""

    index: int
    write: Operation
    reads: tuple[Operation, ...] = field(default=())

    @property
    def operations(self) -> tuple[Operation, ...]:
        return (self.write,) + self.reads

    def __len__(self) -> int:
        return 1 + len(self.reads)


def build_clusters(h: History) -> list[Cluster]:
    """Group operations into clusters indexed 1..n_w by write start time.

    Raises :class:`InvalidHistoryError` if ``h`` does not validate.
    """
    require_valid(h)
    writes = sorted(h.writes, key=lambda o: (o.invoke_ts, o.op_id))
    reads_of: dict[str, list[Operation]] = {w.value: [] for w in writes}
    for r in h.reads:
        reads_of[r.value].append(r)
    return [
        Cluster(k, w, tuple(sorted(reads_of[w.value], key=lambda o: (o.invoke_ts, o.op_id))))
        for k, w in enumerate(writes, start=1)
    ]


def stats_w(h: History) -> int:
    """Maximum, over writes, of the number of writes concurrent with it, itself included.

    Zero for a write-free history.
    """
    ws = h.writes
    if not ws:
        return 0
    s = np.array([o.invoke_ts for o in ws], dtype=np.int64)
    f = np.array([o.response_ts for o in ws], dtype=np.int64)
    # x || y  <=>  x.s <= y.f and y.s <= x.f (diagonal counts the write itself)
    overlap = (s[:, None] <= f[None, :]) & (s[None, :] <= f[:, None])
    return int(overlap.sum(axis=1).max())


def make_history(rows: Sequence[tuple], key: str = "x") -> History:
    """Build a history from ``(kind, value, invoke_ts, response_ts)`` tuples.

    Op ids are generated as ``w1, w2, ...`` and ``r1, r2, ...`` in row order.
    Handy for tests and demos.
    """
    counts = {WRITE: 0, READ: 0}
    ops = []
    for kind, value, s, f in rows:
        counts[kind] += 1
        ops.append(Operation(f"{kind.lower()}{counts[kind]}", kind, key, str(value), int(s), int(f)))
    return History(ops)
