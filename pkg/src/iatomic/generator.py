"""Synthetic histories from a simulated replicated register.

Clients issue operations one at a time. A write is applied at a random
coordinator replica when it is invoked and reaches every other replica after
an exponentially distributed propagation delay; replicas keep the newest
version they have seen. A read picks a replica uniformly and returns that
replica's value at invocation time, so a read never returns a value before
its write started.

An initial write, installed on every replica at time 0, gives early reads a
value to return.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, fields
from typing import Mapping

import numpy as np

from .history import READ, WRITE, History, Operation


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    n_ops: int = 100
    write_ratio: float = 0.25
    n_clients: int = 4
    op_interval: float = 10.0
    op_duration: float = 5.0
    propagation_delay: float = 5.0
    replicas: int = 3
    key: str = "x"

    def __post_init__(self):
        for name in ("n_ops", "n_clients", "replicas"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not 0 < self.write_ratio <= 1:
            raise ValueError("write_ratio must lie in (0, 1]")
        for name in ("op_interval", "op_duration", "propagation_delay"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @classmethod
    def from_mapping(cls, values: Mapping[str, str]) -> "GenConfig":
        """Build from string values, e.g. a parsed ``key=value`` file."""
        types = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for name, raw in values.items():
            if name not in types:
                raise ValueError(f"unknown config key {name!r}")
            conv = {"int": int, "float": float, "str": str}[types[name]]
            kwargs[name] = conv(raw)
        return cls(**kwargs)


def parse_config_text(text: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


_APPLY, _INVOKE = 0, 1  # applies at the same instant are visible to invokes


def generate(cfg: GenConfig) -> History:
    rng = np.random.default_rng(cfg.seed)

    # raw integer times; duplicates are broken later by event sequence
    def duration() -> int:
        return 1 + int(rng.exponential(cfg.op_duration)) if cfg.op_duration > 0 else 1

    def gap() -> int:
        return int(rng.exponential(cfg.op_interval)) if cfg.op_interval > 0 else 0

    def delay() -> int:
        return int(rng.exponential(cfg.propagation_delay)) if cfg.propagation_delay > 0 else 0

    version = [0] * cfg.replicas
    raw: list[tuple[str, str, int, int]] = [(WRITE, "0", 0, 1)]
    next_value = 1
    remaining = cfg.n_ops - 1

    events: list[tuple] = []
    seq = 0
    for c in range(cfg.n_clients):
        heapq.heappush(events, (2 + gap(), _INVOKE, seq, c))
        seq += 1

    while events and remaining > 0:
        t, kind, _, payload = heapq.heappop(events)
        if kind == _APPLY:
            replica, v = payload
            version[replica] = max(version[replica], v)
            continue
        client = payload
        end = t + duration()
        if rng.random() < cfg.write_ratio:
            v = next_value
            next_value += 1
            coord = int(rng.integers(cfg.replicas))
            version[coord] = max(version[coord], v)
            for r in range(cfg.replicas):
                if r != coord:
                    heapq.heappush(events, (t + delay(), _APPLY, seq, (r, v)))
                    seq += 1
            raw.append((WRITE, str(v), t, end))
        else:
            replica = int(rng.integers(cfg.replicas))
            raw.append((READ, str(version[replica]), t, end))
        remaining -= 1
        heapq.heappush(events, (end + gap(), _INVOKE, seq, client))
        seq += 1

    # distinct timestamps: scale, then add each event's rank; at equal raw
    # times responses go first so back-to-back operations stay ordered
    stamps = []
    for k, (_, _, s, f) in enumerate(raw):
        stamps.append((s, 1, k))
        stamps.append((f, 0, k))
    stamps.sort()
    scale = len(stamps) + 1
    final = {}
    for rank, (t, is_invoke, k) in enumerate(stamps):
        final[(k, is_invoke)] = t * scale + rank

    ops = []
    n_w = n_r = 0
    for k, (kind, value, _, _) in enumerate(raw):
        if kind == WRITE:
            n_w += 1
            op_id = f"w{n_w}"
        else:
            n_r += 1
            op_id = f"r{n_r}"
        ops.append(Operation(op_id, kind, cfg.key, value, final[(k, 1)], final[(k, 0)]))
    return History(ops)


@dataclass(frozen=True)
class HistoryStats:
    n: int
    n_w: int
    w: int
    reads: int
    duration: int


def stats(h: History) -> HistoryStats:
    if not h.n:
        return HistoryStats(0, 0, 0, 0, 0)
    start = min(o.invoke_ts for o in h)
    end = max(o.response_ts for o in h)
    return HistoryStats(h.n, h.n_w, h.w, h.n - h.n_w, end - start)
