"""Command-line entry point: ``isoclass classify | orbits | singularities``.

Results go to stdout; progress and diagnostics go to stderr.  Exit codes:
0 success, 2 configuration error, 3 budget exceeded, 4 catalog gap.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import click

from . import classify as cl
from .catalog import Catalog, default_catalog, load_catalog, resolve_group
from .errors import BudgetError, CatalogGap, ConfigError, IsoclassError, OrderCapExceeded
from .genvec import DEFAULT_TUPLE_BUDGET, GeneratingVector, SignatureType, stabilizer_set
from .geometry import (
    ALLOWED_BASKETS,
    basket_allowed,
    covering_genus,
    pretty_basket,
    resolved_invariants,
    singular_points,
)
from .groups import DEFAULT_ORDER_CAP, FiniteGroup
from .hurwitz import (
    DEFAULT_ORBIT_BUDGET,
    POLICIES,
    THEOREM,
    ActionSpec,
    OrbitCache,
    VectorSet,
    orbit_representatives,
    side_orbits,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_CATALOG_GAP = 4

FORMATS = ("table", "json", "csv")
TARGETS = ("pgq2", "pgq1", "isotrivial", "all")
CACHE_ENV = "ISOCLASS_CACHE"

log = logging.getLogger("isoclass")


@dataclass(frozen=True)
class RunConfig:
    catalog_path: Path | None = None
    cache_dir: Path | None = None
    order_cap: int = DEFAULT_ORDER_CAP
    tuple_budget: int = DEFAULT_TUPLE_BUDGET
    orbit_budget: int = DEFAULT_ORBIT_BUDGET
    policy: str = THEOREM
    output_format: str = "table"
    jobs: int = 1
    verbosity: int = 0

    def __post_init__(self) -> None:
        for name in ("order_cap", "tuple_budget", "orbit_budget", "jobs"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name.replace('_', '-')} must be positive")
        if self.policy not in POLICIES:
            raise ConfigError(f"unknown policy {self.policy!r}; choose from {', '.join(POLICIES)}")
        if self.output_format not in FORMATS:
            raise ConfigError(f"unknown format {self.output_format!r}")

    def settings(self) -> cl.Settings:
        return cl.Settings(self.policy, self.tuple_budget, self.orbit_budget, self.jobs)

    def catalog(self) -> Catalog:
        if self.catalog_path is None:
            return default_catalog()
        return load_catalog(self.catalog_path)

    def group(self, name: str, catalog: Catalog) -> FiniteGroup:
        group = resolve_group(name, catalog)
        if group.order > self.order_cap:
            raise OrderCapExceeded(f"{name} has order {group.order}, above the cap {self.order_cap}")
        return group

    def cache(self) -> OrbitCache | None:
        d = os.environ.get(CACHE_ENV) or self.cache_dir
        return OrbitCache(d) if d else None


# -- rendering -----------------------------------------------------------------

def render_rows(rows: Sequence[cl.ClassificationRow], fmt: str) -> str:
    records = [r.to_record() for r in rows]
    if fmt == "json":
        if not records:
            return "[]\n"
        body = ",\n".join(json.dumps(rec) for rec in records)
        return "[\n" + body + "\n]\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cl.RECORD_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(records)
        return buf.getvalue()
    return _table(records)


def _table(records: list[dict]) -> str:
    head = list(cl.RECORD_FIELDS)
    cells = [[str(rec[k]) if rec[k] != "" else "-" for k in head] for rec in records]
    widths = [max([len(h)] + [len(c[i]) for c in cells]) for i, h in enumerate(head)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(head, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"


def parse_rows(text: str, fmt: str) -> list[cl.ClassificationRow]:
    """Inverse of :func:`render_rows` for the machine formats."""
    if fmt == "json":
        return [cl.ClassificationRow.from_record(rec) for rec in json.loads(text)]
    if fmt == "csv":
        return [cl.ClassificationRow.from_record(rec) for rec in csv.DictReader(io.StringIO(text))]
    raise ValueError("only json and csv output can be parsed back")


# -- commands as plain functions --------------------------------------------------

PIPELINES: dict[str, list[tuple[str, Callable[..., list[cl.ClassificationRow]]]]] = {
    "pgq2": [
        ("gh", cl.classify_gh),
        ("unmixed-agt", cl.classify_unmixed_agt),
        ("mixed-pgq2", cl.classify_mixed_pgq2),
        ("isotrivial-pgq2", cl.classify_isotrivial_pgq2),
    ],
    "pgq1": [("pgq1", cl.classify_pgq1)],
    "isotrivial": [("isotrivial-pgq2", cl.classify_isotrivial_pgq2)],
}
PIPELINES["all"] = PIPELINES["pgq2"] + PIPELINES["pgq1"]


class PipelineFailure(Exception):
    def __init__(self, pipeline: str, error: IsoclassError) -> None:
        super().__init__(f"pipeline {pipeline}: {error}")
        self.pipeline = pipeline
        self.error = error


def cmd_classify(target: str, config: RunConfig) -> list[cl.ClassificationRow]:
    if target not in PIPELINES:
        raise ConfigError(f"unknown target {target!r}; choose from {', '.join(TARGETS)}")
    catalog = config.catalog()
    rows: list[cl.ClassificationRow] = []
    for name, fn in PIPELINES[target]:
        report = cl.SearchReport(name)
        log.info("running %s", name)
        try:
            rows += fn(catalog, config.settings(), report)
        except (BudgetError, CatalogGap) as exc:
            raise PipelineFailure(name, exc) from exc
        for order, what in report.skipped_orders:
            log.info("%s: order %d (%s) lies above the sweep cap", name, order, what)
        log.info("%s: %d candidate types, %d groups tested", name, len(report.candidates), report.groups_tested)
    for row in rows:
        row.verify()
    return cl.sort_rows(rows)


def _action_spec(sig: SignatureType, action: str) -> ActionSpec:
    return ActionSpec.for_signature(sig, include_inner=action == "inner", include_aut=action == "aut")


def cmd_orbits(group_name: str, sig_text: str, action: str, config: RunConfig) -> list[str]:
    catalog = config.catalog()
    group = config.group(group_name, catalog)
    sig = SignatureType.parse(sig_text)
    spec = _action_spec(sig, action)
    part = orbit_representatives(
        group, sig, spec, config.tuple_budget, config.orbit_budget, config.cache(), policy=spec.tag()
    )
    lines = [
        f"group {group.label} ({group.paper_id or '-'}), type {sig}, action {spec.tag()}",
        f"vectors {part.total}",
        f"orbits {part.count}",
        f"sizes {' '.join(map(str, part.sizes))}",
    ]
    lines += part.lines()
    return lines


def _pair_report(group: FiniteGroup, v1: GeneratingVector, v2: GeneratingVector) -> list[str]:
    s1, s2 = stabilizer_set(v1), stabilizer_set(v2)
    gC = covering_genus(group.order, v1.sig)
    gF = covering_genus(group.order, v2.sig)
    lines = [
        f"  C vector {list(v1.entries)}, F vector {list(v2.entries)}",
        f"  Sigma(C) = {sorted(s1)}",
        f"  Sigma(F) = {sorted(s2)}",
    ]
    if s1 & s2 == {0}:
        K2 = Fraction(8 * (gC - 1) * (gF - 1), group.order)
        lines += ["  disjoint: yes", f"  smooth quotient, K^2={K2}"]
        return lines
    pts = singular_points(group, v1, v2)
    lines += ["  disjoint: no", f"  singular points: {pretty_basket(pts)} ({len(pts)} points)"]
    try:
        inv = resolved_invariants(gC, gF, group.order, pts)
    except IsoclassError as exc:
        lines.append(f"  invariants inconsistent: {exc}")
        return lines
    lines.append(f"  K^2={inv.K2}, e={inv.e}, chi={inv.chi}")
    K2 = int(inv.K2)
    if inv.chi == 1 and K2 in ALLOWED_BASKETS:
        verdict = "allowed" if basket_allowed(K2, pts) else "not allowed"
        lines.append(f"  basket {verdict} for K^2={K2}")
    else:
        lines.append("  basket check not applicable")
    return lines


def cmd_singularities(
    group_name: str, sig1_text: str, sig2_text: str, pair: tuple[int, int] | None, config: RunConfig
) -> list[str]:
    """Report on one pair (indices into the sorted vector lists) or, by
    default, on one pair for each distinct singularity multiset among pairs
    of orbit representatives under moves and Inn(G)."""
    catalog = config.catalog()
    group = config.group(group_name, catalog)
    sig1, sig2 = SignatureType.parse(sig1_text), SignatureType.parse(sig2_text)
    vs1 = VectorSet.enumerate(group, sig1, config.tuple_budget)
    vs2 = VectorSet.enumerate(group, sig2, config.tuple_budget)
    head = [f"group {group.label} ({group.paper_id or '-'}), C {sig1} ({len(vs1)} vectors), F {sig2} ({len(vs2)} vectors)"]
    if pair is not None:
        i, j = pair
        if not (0 <= i < len(vs1) and 0 <= j < len(vs2)):
            raise ConfigError(f"vector index out of range: {i} of {len(vs1)}, {j} of {len(vs2)}")
        v1 = GeneratingVector(group, sig1, vs1.tuple_at(i))
        v2 = GeneratingVector(group, sig2, vs2.tuple_at(j))
        return head + [f"pair C#{i} F#{j}"] + _pair_report(group, v1, v2)
    o1 = side_orbits(vs1, ActionSpec.for_signature(sig1, True, False), orbit_budget=config.orbit_budget)
    o2 = side_orbits(vs2, ActionSpec.for_signature(sig2, True, False), orbit_budget=config.orbit_budget)
    seen: set[tuple] = set()
    out = list(head)
    for a in range(o1.count):
        v1 = GeneratingVector(group, sig1, o1.rep_tuple(a))
        for b in range(o2.count):
            v2 = GeneratingVector(group, sig2, o2.rep_tuple(b))
            key = tuple(singular_points(group, v1, v2))
            if key in seen:
                continue
            seen.add(key)
            i = int(o1.reps[a])
            j = int(o2.reps[b])
            out += [f"pair C#{i} F#{j}"] + _pair_report(group, v1, v2)
    if not seen:
        out.append("no vector pairs")
    return out


# -- click wiring -------------------------------------------------------------------

def _common(fn):
    opts = [
        click.option("--catalog", "catalog_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
                     help="Group catalog file (default: the bundled one)."),
        click.option("--cache", "cache_dir", type=click.Path(file_okay=False, path_type=Path), default=None,
                     help=f"Orbit cache directory ({CACHE_ENV} overrides)."),
        click.option("--policy", type=click.Choice(POLICIES), default=THEOREM, show_default=True,
                     help="Action used when counting components."),
        click.option("--format", "output_format", type=click.Choice(FORMATS), default="table", show_default=True),
        click.option("--jobs", type=int, default=1, show_default=True, help="Worker processes."),
        click.option("--budget-tuples", "tuple_budget", type=int, default=DEFAULT_TUPLE_BUDGET, show_default=True),
        click.option("--budget-orbit", "orbit_budget", type=int, default=DEFAULT_ORBIT_BUDGET, show_default=True),
        click.option("--order-cap", type=int, default=DEFAULT_ORDER_CAP, show_default=True),
        click.option("-v", "--verbose", "verbosity", count=True, help="Progress on stderr."),
    ]
    for o in reversed(opts):
        fn = o(fn)
    return fn


def _config(**kw) -> RunConfig:
    return RunConfig(**kw)


def _guard(body: Callable[[], None]) -> None:
    try:
        body()
    except PipelineFailure as exc:
        click.echo(f"isoclass: {exc}", err=True)
        sys.exit(EXIT_CATALOG_GAP if isinstance(exc.error, CatalogGap) else EXIT_BUDGET)
    except ConfigError as exc:
        click.echo(f"isoclass: {type(exc).__name__}: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    except BudgetError as exc:
        click.echo(f"isoclass: {type(exc).__name__}: {exc}", err=True)
        sys.exit(EXIT_BUDGET)
    except CatalogGap as exc:
        click.echo(f"isoclass: {exc}", err=True)
        sys.exit(EXIT_CATALOG_GAP)
    except (IsoclassError, ValueError, KeyError) as exc:
        click.echo(f"isoclass: {type(exc).__name__}: {exc}", err=True)
        sys.exit(EXIT_CONFIG)


def _setup_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(message)s"))
    root = logging.getLogger("isoclass")
    root.handlers[:] = [handler]
    root.setLevel(level)
    root.propagate = False


@click.group()
def main() -> None:
    """Classify surfaces with p_g = q = 2 or 1 built from (C x F)/G."""


@main.command("classify")
@click.option("--target", type=click.Choice(TARGETS), default="pgq2", show_default=True)
@_common
def classify_command(target: str, **kw) -> None:
    """Run the classification pipelines and print one row per family."""
    _setup_logging(kw["verbosity"])

    def body() -> None:
        config = _config(**kw)
        rows = cmd_classify(target, config)
        click.echo(render_rows(rows, config.output_format), nl=False)

    _guard(body)


@main.command("orbits")
@click.argument("group")
@click.argument("signature")
@click.option("--action", type=click.Choice(["moves", "inner", "aut"]), default="aut", show_default=True,
              help="Moves alone, moves with Inn(G), or moves with Aut(G).")
@_common
def orbits_command(group: str, signature: str, action: str, **kw) -> None:
    """Orbits of the generating vectors of GROUP with type SIGNATURE."""
    _setup_logging(kw["verbosity"])

    def body() -> None:
        click.echo("\n".join(cmd_orbits(group, signature, action, _config(**kw))))

    _guard(body)


@main.command("singularities")
@click.argument("group")
@click.argument("sig1")
@click.argument("sig2")
@click.option("--pair", nargs=2, type=int, default=None,
              help="Indices into the sorted C and F vector lists; default searches all orbit pairs.")
@_common
def singularities_command(group: str, sig1: str, sig2: str, pair: tuple[int, int] | None, **kw) -> None:
    """Singular points of (C x F)/G for vectors of types SIG1 (C) and SIG2 (F)."""
    _setup_logging(kw["verbosity"])

    def body() -> None:
        click.echo("\n".join(cmd_singularities(group, sig1, sig2, pair or None, _config(**kw))))

    _guard(body)


if __name__ == "__main__":
    main()
