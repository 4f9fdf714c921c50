"""Check records and report emission.

Reports are deterministic: given the same configuration and seed the text
and structured forms are byte-identical.  Per-record timings are only
recorded when explicitly requested, since they would break that
guarantee.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class CheckRecord:
    suite: str
    name: str
    passed: bool
    expected: str = ""
    computed: str = ""
    detail: str = ""
    repro: str = ""
    elapsed_ms: object = None

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        bits = [f"[{status}] {self.suite}: {self.name}"]
        if self.expected or self.computed:
            bits.append(f"expected={self.expected} computed={self.computed}")
        if self.detail:
            bits.append(self.detail)
        if not self.passed and self.repro:
            bits.append(f"repro: {self.repro}")
        return "  ".join(bits)


@dataclass
class Report:
    config_echo: dict
    records: list = field(default_factory=list)

    def add(self, record):
        self.records.append(record)

    @property
    def passed(self):
        return all(r.passed for r in self.records)

    @property
    def counts(self):
        ok = sum(1 for r in self.records if r.passed)
        return ok, len(self.records) - ok

    def to_text(self):
        lines = [f"# config: {json.dumps(self.config_echo, sort_keys=True)}"]
        lines += [r.line() for r in self.records]
        ok, bad = self.counts
        lines.append(f"# summary: {ok} passed, {bad} failed")
        return "\n".join(lines) + "\n"

    def to_json(self, include_timing=False):
        payload = {
            "config": self.config_echo,
            "records": [
                {
                    "suite": r.suite,
                    "name": r.name,
                    "passed": r.passed,
                    "expected": r.expected,
                    "computed": r.computed,
                    "detail": r.detail,
                    "repro": r.repro,
                    "elapsed_ms": r.elapsed_ms if include_timing else None,
                }
                for r in self.records
            ],
            "summary": {"passed": self.counts[0], "failed": self.counts[1]},
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
