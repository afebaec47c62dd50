"""Certificate persistence and the best-known growth ledger.

Storage is a plain directory of certificate JSON files plus an index file:
greppable, diffable, no database. Rationals travel as "p/q" strings so
arbitrary precision survives JSON; stored values are never trusted --
verification always re-derives the growth from the matrix.
"""

from __future__ import annotations

import fcntl
import json
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .elimination import PivotStrategy, eliminate, pivot_slack
from .errors import ParseError, RejectedNotBetter, VerificationFailed, ZeroPivot
from .rational import format_fraction, to_fraction
from .repair import GrowthCertificate

INDEX_NAME = "index.json"


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def write_certificate(cert: GrowthCertificate, path) -> None:
    Path(path).write_text(canonical_json(cert.to_json_dict()) + "\n")


def read_certificate(path) -> GrowthCertificate:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read certificate {path}: {exc}") from exc
    return GrowthCertificate.from_json_dict(doc)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of re-deriving a certificate's claims from scratch."""

    passed: bool
    n: int
    strategy: PivotStrategy
    claimed_growth: Fraction
    recomputed_growth: Fraction | None
    first_violation: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "n": self.n,
            "strategy": self.strategy.value,
            "claimed_growth": format_fraction(self.claimed_growth),
            "recomputed_growth": None if self.recomputed_growth is None
            else format_fraction(self.recomputed_growth),
            "first_violation": self.first_violation,
        }


def verify_certificate(cert_or_path) -> VerificationReport:
    """Re-run exact elimination and check pivotedness and growth equality.

    Never trusts stored values; the report carries the first violated
    constraint on failure.
    """
    cert = cert_or_path if isinstance(cert_or_path, GrowthCertificate) \
        else read_certificate(cert_or_path)
    n = cert.matrix.n
    try:
        trace = eliminate(cert.matrix)
    except ZeroPivot as exc:
        return VerificationReport(
            passed=False, n=n, strategy=cert.strategy,
            claimed_growth=cert.growth, recomputed_growth=None,
            first_violation=f"zero pivot at step {exc.k}",
        )
    slacks = pivot_slack(trace, cert.strategy)
    for k, s in enumerate(slacks, start=1):
        if s > 0:
            return VerificationReport(
                passed=False, n=n, strategy=cert.strategy,
                claimed_growth=cert.growth, recomputed_growth=trace.growth,
                first_violation=f"not {cert.strategy.value} pivoted at step {k} "
                                f"(slack {format_fraction(s)})",
            )
    if trace.growth != cert.growth:
        return VerificationReport(
            passed=False, n=n, strategy=cert.strategy,
            claimed_growth=cert.growth, recomputed_growth=trace.growth,
            first_violation="growth mismatch",
        )
    return VerificationReport(
        passed=True, n=n, strategy=cert.strategy,
        claimed_growth=cert.growth, recomputed_growth=trace.growth,
    )


class Ledger:
    """Best-known growth per (n, strategy), backed by a directory.

    The index maps "n:strategy" to the current best entry; every update is
    also appended to a history list. Growth values are nondecreasing over
    updates for a fixed key; writers serialize through a file lock.
    """

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    @property
    def index_path(self) -> Path:
        return self.directory / INDEX_NAME

    def _read_index(self) -> dict:
        if not self.index_path.exists():
            return {"entries": {}, "history": []}
        try:
            return json.loads(self.index_path.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"corrupt ledger index: {exc}") from exc

    def _locked(self):
        lock = open(self.directory / ".lock", "w")
        fcntl.flock(lock, fcntl.LOCK_EX)
        return lock

    @staticmethod
    def _key(n: int, strategy: PivotStrategy) -> str:
        return f"{n}:{strategy.value}"

    def best(self, n: int, strategy: PivotStrategy):
        """(growth, entry dict) or None."""
        entry = self._read_index()["entries"].get(self._key(n, strategy))
        if entry is None:
            return None
        return to_fraction(entry["growth"]), entry

    def entries(self) -> dict:
        return self._read_index()["entries"]

    def certificate_for(self, n: int, strategy: PivotStrategy):
        got = self.best(n, strategy)
        if got is None or got[1].get("path") is None:
            return None
        return read_certificate(self.directory / got[1]["path"])

    def update(self, cert: GrowthCertificate,
               source: str = "local-search") -> dict:
        """Install a verified certificate iff strictly better; returns the
        ledger delta. Raises RejectedNotBetter (informational) otherwise."""
        report = verify_certificate(cert)
        if not report.passed:
            raise VerificationFailed(report.first_violation)
        n, strategy = cert.matrix.n, cert.strategy
        lock = self._locked()
        try:
            index = self._read_index()
            key = self._key(n, strategy)
            current = index["entries"].get(key)
            if current is not None and to_fraction(current["growth"]) >= cert.growth:
                raise RejectedNotBetter(
                    f"ledger already holds growth {current['growth']} "
                    f"for {key}"
                )
            stamp = time.strftime("%Y%m%dT%H%M%S", time.gmtime())
            rel = f"cert-{n}-{strategy.value}-{stamp}-{len(index['history'])}.json"
            write_certificate(cert, self.directory / rel)
            entry = {
                "path": rel,
                "growth": format_fraction(cert.growth),
                "source": source,
                "timestamp": stamp,
            }
            index["entries"][key] = entry
            index["history"].append(dict(entry, key=key))
            self.index_path.write_text(canonical_json(index) + "\n")
            delta = {
                "key": key,
                "previous": None if current is None else current["growth"],
                "new": entry["growth"],
            }
            return delta
        finally:
            lock.close()

    def import_reported(self, n: int, value, strategy: PivotStrategy) -> dict:
        """Record a published lower bound with no local certificate; tagged
        "paper-reported" and excluded from certified extrapolations."""
        value = to_fraction(value)
        lock = self._locked()
        try:
            index = self._read_index()
            key = self._key(n, strategy)
            current = index["entries"].get(key)
            if current is not None and to_fraction(current["growth"]) >= value:
                raise RejectedNotBetter(
                    f"ledger already holds growth {current['growth']} for {key}"
                )
            entry = {
                "path": None,
                "growth": format_fraction(value),
                "source": "paper-reported",
                "timestamp": time.strftime("%Y%m%dT%H%M%S", time.gmtime()),
            }
            index["entries"][key] = entry
            index["history"].append(dict(entry, key=key))
            self.index_path.write_text(canonical_json(index) + "\n")
            return {"key": key, "new": entry["growth"]}
        finally:
            lock.close()

    def lower_bound_table(self, strategy: PivotStrategy,
                          include_reported: bool = False):
        from .bounds import LowerBoundTable
        table = LowerBoundTable(strategy)
        for key, entry in self._read_index()["entries"].items():
            n_str, strat = key.split(":")
            if strat != strategy.value:
                continue
            if entry["source"] == "paper-reported" and not include_reported:
                continue
            table.add(int(n_str), to_fraction(entry["growth"]), entry["source"])
        return table


def report_table(ledger: Ledger, n_range=None, strategy=None):
    """Rows of (n, strategy, growth rational, growth decimal, ratio to n,
    source) sorted by (strategy, n), plus the same as JSON-ready dicts."""
    rows = []
    for key, entry in ledger.entries().items():
        n_str, strat = key.split(":")
        n = int(n_str)
        if n_range is not None and not (n_range[0] <= n <= n_range[1]):
            continue
        if strategy is not None and strat != strategy.value:
            continue
        growth = to_fraction(entry["growth"])
        rows.append({
            "n": n,
            "strategy": strat,
            "growth": format_fraction(growth),
            "growth_decimal": f"{float(growth):.6g}",
            "ratio_to_n": f"{float(growth) / n:.6g}",
            "source": entry["source"],
        })
    rows.sort(key=lambda r: (r["strategy"], r["n"]))
    return rows


def format_report_rows(rows) -> str:
    if not rows:
        return "(empty ledger)\n"
    header = f"{'n':>5}  {'strategy':<9} {'g >=':>14} {'decimal':>10} " \
             f"{'g/n':>8}  source"
    lines = [header, "-" * len(header)]
    for r in rows:
        growth = r["growth"] if len(r["growth"]) <= 14 else r["growth_decimal"]
        lines.append(
            f"{r['n']:>5}  {r['strategy']:<9} {growth:>14} "
            f"{r['growth_decimal']:>10} {r['ratio_to_n']:>8}  {r['source']}"
        )
    return "\n".join(lines) + "\n"
