"""Formula-versus-enumeration checks for one small grid (``gig verify``)."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import exact, oracle
from .lattice import Coord, GridDims, LatticePath, neighbors, squared_distance

__all__ = ["Check", "VerifyReport", "run_checks", "walks"]


@dataclass(frozen=True)
class Check:
    group: str
    subject: str
    formula: str
    reference: str
    ok: bool
    relation: str = "=="
    informational: bool = False

    def line(self) -> str:
        note = ""
        if self.informational:
            status, rel = "info", self.relation
            note = " (holds)" if self.ok else " (does not hold)"
        elif self.ok:
            status, rel = "ok", self.relation
        else:
            status, rel = "MISMATCH", "!=" if self.relation == "==" else "violates " + self.relation
        subject = f" [{self.subject}]" if self.subject else ""
        return f"{status:8} {self.group}{subject}: {self.formula} {rel} {self.reference}{note}"


@dataclass
class VerifyReport:
    dims: GridDims
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks if not c.informational)

    def add(self, group, subject, formula, reference, ok, relation="==", informational=False):
        self.checks.append(Check(group, subject, str(formula), str(reference), bool(ok),
                                 relation, informational))

    def render(self) -> str:
        lines = [f"verifying closed forms on the {self.dims} grid against all "
                 f"{self.dims.size}! labelings"]
        groups: dict[str, list[Check]] = {}
        for c in self.checks:
            groups.setdefault(c.group, []).append(c)
        for name, items in groups.items():
            if len(items) == 1 or any(c.informational for c in items):
                lines.extend(c.line() for c in items)
                continue
            good = sum(c.ok for c in items)
            lines.append(f"{'ok' if good == len(items) else 'MISMATCH':8} {name}: "
                         f"{good}/{len(items)} cases agree")
            lines.extend("    " + c.line() for c in items if not c.ok)
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "dims": [self.dims.m, self.dims.n],
            "passed": self.passed,
            "checks": [
                {"group": c.group, "subject": c.subject, "formula": c.formula,
                 "reference": c.reference, "relation": c.relation, "ok": c.ok,
                 "informational": c.informational}
                for c in self.checks
            ],
        }


def walks(dims: GridDims, max_edges: int) -> list[LatticePath]:
    """Every self-avoiding lattice walk with 1..max_edges edges."""
    out = []

    def grow(prefix):
        if len(prefix) > 1:
            out.append(LatticePath(prefix))
        if len(prefix) == max_edges + 1:
            return
        for w in sorted(neighbors(prefix[-1], dims)):
            if w not in prefix:
                grow(prefix + [w])

    for c in dims.cells():
        grow([c])
    return out


def _fmt(coords) -> str:
    return " ".join(str(Coord(*c)) for c in coords)


def run_checks(dims: GridDims) -> VerifyReport:
    """Compare every closed form against the full enumeration on ``dims``.

    Raises :class:`ResourceCapError` when the grid is too large to enumerate.
    """
    stats = oracle.exact_statistics(dims)
    report = VerifyReport(dims)
    full = lambda ev: oracle.enumerate_event(dims, ev).probability  # noqa: E731
    cells = dims.cells()

    for path in walks(dims, 3):
        f = exact.path_probability(path, dims)
        o = full(oracle.PathEvent(path))
        report.add("path probability", _fmt(path), f, o, f == o)

    single = {c: full(oracle.SinksEvent([c])) for c in cells}
    for size in (1, 2, 3):
        for combo in itertools.combinations(cells, size):
            f = exact.multi_sink_probability(combo, dims)
            o = single[combo[0]] if size == 1 else full(oracle.SinksEvent(combo))
            report.add("joint sink probability", _fmt(combo), f, o, f == o)
            if size == 2:
                a, b = combo
                factorises = o == single[a] * single[b]
                report.add("sink independence iff distance > 2", _fmt(combo),
                           exact.sinks_independent(a, b, dims), factorises,
                           exact.sinks_independent(a, b, dims) == factorises)
                cov_f = exact.sink_covariance(a, b, dims)
                cov_o = o - single[a] * single[b]
                report.add("sink covariance", _fmt(combo), cov_f, cov_o, cov_f == cov_o)

    linear = sum((exact.sink_probability(c, dims) for c in cells), Fraction(0))
    report.add("expected sink count (sum of vertex probabilities)", "", linear,
               stats.expected_sinks, linear == stats.expected_sinks)
    if dims.m >= 3 and dims.n >= 3:
        closed = exact.expected_sinks(dims)
        report.add("expected sink count (closed form)", "", closed, stats.expected_sinks,
                   closed == stats.expected_sinks)
    pairwise = exact.pairwise_sink_variance(dims)
    report.add("sink-count variance (pairwise covariances)", "", pairwise,
               stats.variance_sinks, pairwise == stats.variance_sinks)
    if dims.m >= 6 and dims.n >= 6:
        closed = exact.variance_sinks_closed(dims)
        report.add("sink-count variance (closed form)", "", closed, stats.variance_sinks,
                   closed == stats.variance_sinks)

    for a, b in itertools.permutations(cells, 2):
        cb = exact.connectivity_lower_bound(a, b, dims)
        o = full(oracle.ConnectedEvent(a, b))
        ok = o >= cb.sum_over_paths >= cb.count_times_min
        report.add("connection probability lower bound", _fmt((a, b)),
                   f"{cb.count_times_min} <= {cb.sum_over_paths}", o, ok, relation="<=")

    for path in walks(dims, 2):
        ev = oracle.PathEvent(path)
        rel = oracle.relative_order_event(ev.region(dims), dims, ev).probability
        report.add("relative-order oracle (paths)", _fmt(path), rel, full(ev), rel == full(ev))
    for a, b in itertools.combinations(cells, 2):
        if squared_distance(a, b) == 1:
            continue
        ev = oracle.SinksEvent([a, b])
        rel = oracle.relative_order_event([a, b], dims, ev).probability
        report.add("relative-order oracle (sink pairs)", _fmt((a, b)), rel, full(ev),
                   rel == full(ev))

    bound = exact.component_size_bound(dims)
    for c in cells:
        attracted = stats.conditional_component_size[c] - 1
        report.add("basin size bound (vertices attracted to a given sink)", str(c),
                   attracted, bound, attracted <= bound, relation="<=")
    report.add("expected largest basin vs basin size bound", "",
               stats.expected_max_component, bound,
               stats.expected_max_component <= bound, relation="<=", informational=True)
    return report
