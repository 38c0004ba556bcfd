"""Command-line entry point.

Exit codes: 0 success, 1 a verification failed, 2 usage or input error.
JSON is the primary output; ``--format csv`` projects tables.
"""
from __future__ import annotations

import csv
import functools
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import click

from ._backend import KERNEL_BACKEND, RATIONAL_BACKEND, threads
from .arith import GaussRational, Q, VRatFunc, qstr
from .series import Flavor, coeff_json

# about 60k work units per second for two-arrow Kronecker tables; larger k is slower
DEFAULT_BUDGET = 300_000


class VerificationFailed(click.ClickException):
    exit_code = 1


def _budget(ctx: click.Context) -> int:
    return ctx.find_root().obj["budget"]


def guard(points: int, weight: int, budget: int, what: str = "--deg"):
    """Refuse runs whose estimated work exceeds the budget.

    Series products are quadratic in the number of cone points; ``weight``
    accounts for the size of each coefficient (the degree bound for
    rational functions in v, 1 for rationals).
    """
    cost = points * points * max(1, weight)
    if cost > budget:
        raise click.UsageError(f"{what} too large: estimated work {cost} exceeds budget {budget} (see --budget)")


def _cone2(N: int) -> int:
    return (N + 1) * (N + 2) // 2


def emit(obj, out: str | None = None, fmt: str = "json", rows=None, header=None):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(obj, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def finish(report: dict, out: str | None = None, **kw):
    emit(report, out, **kw)
    if not report.get("passed", True):
        raise VerificationFailed("verification failed")


def input_errors(fn):
    """Turn malformed input into a usage error (exit 2)."""

    @functools.wraps(fn)
    def wrapper(*a, **kw):
        try:
            return fn(*a, **kw)
        except (ValueError, KeyError, TypeError, OSError) as e:
            if isinstance(e, click.ClickException):
                raise
            raise click.UsageError(f"{type(e).__name__}: {e}") from None

    return wrapper


out_option = click.option("--out", type=click.Path(dir_okay=False), default=None, help="write output to a file")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--budget", type=int, default=None, help="work budget guarding --deg (env WALLCROSS_BUDGET)")
@click.version_option(package_name="artifact")
@click.pass_context
def main(ctx, budget):
    """Exact wall-crossing computations."""
    if budget is None:
        budget = int(os.environ.get("WALLCROSS_BUDGET", DEFAULT_BUDGET))
    ctx.obj = {"budget": budget}


@main.command()
@click.option("--deg", type=click.IntRange(1), default=12, show_default=True)
@out_option
@click.pass_context
def identities(ctx, deg, out):
    """Quantum dilogarithm identities (pentagon, sums, products, conjugation)."""
    from .scenarios import identities as run_identities

    guard(_cone2(deg), deg, _budget(ctx))
    finish({**run_identities(deg), "backend": KERNEL_BACKEND}, out)


@main.command()
@click.option("--k", "k", type=click.IntRange(1), required=True)
@click.option("--deg", type=click.IntRange(1), default=10, show_default=True)
@click.option("--direction", type=click.Choice(["increasing", "decreasing"]), default="increasing", show_default=True)
@click.option("--quantum", is_flag=True, help="quantum refactorization and its v=-1 limit")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@out_option
@click.pass_context
def kronecker(ctx, k, deg, direction, quantum, fmt, out):
    """Exponents d(a,b,k) from refactorizing T_(1,0) T_(0,1)."""
    from .dt import kronecker_dt, kronecker_quantum

    guard(_cone2(deg), deg if quantum else 1, _budget(ctx))
    if quantum:
        if direction != "increasing":
            raise click.UsageError("--quantum supports only --direction increasing")
        r = kronecker_quantum(k, deg)
        rep = {**r.to_json(), "passed": r.matches}
        lim = r.limit.omega
        rows = [
            [g[0], g[1], json.dumps(coeff_json(x), sort_keys=True), qstr(lim.get(g, 0))]
            for g, x in sorted(r.data.omega.items(), key=lambda t: (sum(t[0]), -t[0][0]))
        ]
        finish(rep, out, fmt=fmt, rows=rows, header=["a", "b", "omega_q", "omega_limit"])
        return
    r = kronecker_dt(k, deg, direction)
    rep = {**r.to_json(), "all_integral": r.all_integral, "passed": r.recomposes}
    rows = [[a, b, qstr(x)] for a, b, x in r.rows()]
    finish(rep, out, fmt=fmt, rows=rows, header=["a", "b", "omega"])


@main.command()
@click.option("--k", "k", type=click.IntRange(1), required=True)
@click.option("--deg", type=click.IntRange(1), default=20, show_default=True)
@click.option("--exp-deg", type=click.IntRange(1), default=None, help="degree for the exp-form check (default --deg)")
@click.option("--slope-deg", type=click.IntRange(2), default=None, help="also compare the slope-one Kronecker factors")
@out_option
@click.pass_context
def fk(ctx, k, deg, exp_deg, slope_deg, out):
    """The diagonal series F_k and its two characterizations."""
    from .dt import F_k_series, check_F_k, check_slope_one

    guard(deg, 1, _budget(ctx))
    c = check_F_k(k, deg, exp_deg)
    rep = {
        "k": k,
        "deg": deg,
        "series": [qstr(x) for x in F_k_series(k, deg)],
        "equation_zero": not any(c.equation),
        "exp_form_zero": not any(c.exp_form),
        "passed": c.is_zero,
    }
    if slope_deg:
        guard(_cone2(slope_deg), 1, _budget(ctx), "--slope-deg")
        rep["slope_one"] = check_slope_one(k, slope_deg).to_json()
    finish(rep, out)


@main.command()
@click.option("--m", "m", type=click.IntRange(1), required=True)
@click.option("--deg", type=click.IntRange(1), default=12, show_default=True)
@out_option
@click.pass_context
def loops(ctx, m, deg, out):
    """m-loop quiver: Omega(n), the product form and the functional equation."""
    from .dt import G_m_series, check_G_m

    guard(deg, 1, _budget(ctx))
    c = check_G_m(m, deg)
    finish(
        {
            "m": m,
            "deg": deg,
            "omega": [qstr(x) for x in c.omegas],
            "G": [qstr(x) for x in G_m_series(m, deg)],
            "integral": c.integral,
            "identities_zero": c.is_zero,
            "passed": c.integral and c.is_zero,
        },
        out,
    )


@main.command("one-loop")
@click.option("--d", "d", type=click.IntRange(3), required=True)
@click.option("--deg", type=click.IntRange(1, 4), default=3, show_default=True)
@out_option
def one_loop(d, deg, out):
    """(1-t)^(d-1) paired with ideals of F_2[x]/(x^(d-1))."""
    from .dt import one_loop_hall_pairing

    r = one_loop_hall_pairing(d, deg)
    finish({**r.to_json(), "passed": r.consistent}, out)


@main.command()
@click.option("--chi", type=int, required=True)
@click.option("--deg", type=click.IntRange(1), default=6, show_default=True)
@click.option("--sign", type=click.Choice(["auto", "1", "-1"]), default="-1", show_default=True)
@out_option
@click.pass_context
def macmahon(ctx, chi, deg, sign, out):
    """D0-D6 transport against the coefficients of M(-t)^chi."""
    from .dt import d0d6_check

    guard(_cone2(deg + 1), 1, _budget(ctx))
    r = d0d6_check(chi, deg, None if sign == "auto" else int(sign))
    finish(r.to_json(), out)


def _load_quiver(path):
    from .quivers import Quiver

    return Quiver.load(path)


@main.command()
@click.option("--quiver", "quiver", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--vertex", type=click.IntRange(0), required=True)
@out_option
@input_errors
def mutate(quiver, vertex, out):
    """Mutate a quiver and its basis of classes at one vertex."""
    from .quivers import class_pairing_matrix, mutate_classes, mutate_matrix

    Qv = _load_quiver(quiver)
    if vertex >= Qv.n:
        raise click.BadParameter(f"vertex {vertex} out of range for {Qv.n} vertices", param_hint="--vertex")
    Qm = mutate_matrix(Qv, vertex)
    basis = [tuple(int(i == j) for j in range(Qv.n)) for i in range(Qv.n)]
    new = mutate_classes(basis, Qv, vertex)
    consistent = class_pairing_matrix(new, Qv) == Qm.skew()
    finish(
        {"vertex": vertex, "quiver": Qm.to_json(), "classes": [list(v) for v in new], "passed": consistent},
        out,
    )


@main.command("cluster-check")
@click.option("--quiver", "quiver", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--vertex", type=click.IntRange(0), default=None, help="default: every vertex")
@click.option("--deg", type=click.IntRange(1), default=8, show_default=True)
@click.option("--trials", type=click.IntRange(1), default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@out_option
@click.pass_context
@input_errors
def cluster_check(ctx, quiver, vertex, deg, trials, seed, out):
    """Mutation as conjugation by the quantum dilogarithm, quantum and classical."""
    from .quivers import cluster_map_classical_check, cluster_map_quantum

    Qv = _load_quiver(quiver)
    Qv.require_cluster()
    guard(_cone2(deg) * Qv.n, deg, _budget(ctx))
    verts = range(Qv.n) if vertex is None else [vertex]
    if vertex is not None and vertex >= Qv.n:
        raise click.BadParameter(f"vertex {vertex} out of range", param_hint="--vertex")
    cases = {}
    ok = True
    for k in verts:
        q = cluster_map_quantum(Qv, k, deg)
        c = cluster_map_classical_check(Qv, k, trials, seed)
        cases[str(k)] = {"quantum": q.to_json(), "classical": c.to_json()}
        ok = ok and q.is_zero and c.passed
    finish({"deg": deg, "quiver": Qv.to_json(), "vertices": cases, "passed": ok}, out)


@main.command()
@click.option("--spec", "spec", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--deg", type=click.IntRange(0), default=3, show_default=True)
@click.option("--hall-budget", type=click.IntRange(1), default=None, help="cap on p^(m n^2) tuples enumerated")
@out_option
@input_errors
def hall(spec, deg, hall_budget, out):
    """Ideal sums against F = A(qt)A(t)^-1 by brute force over F_p."""
    from .hall import DEFAULT_BUDGET as HB
    from .hall import BudgetExceeded, FqAlgebraSpec, verify_ideal_sum

    s = FqAlgebraSpec.load(spec)
    try:
        r = verify_ideal_sum(s, deg, hall_budget or HB)
    except BudgetExceeded as e:
        raise click.UsageError(str(e)) from None
    finish(r.to_json(), out)


@main.command()
@click.option("--config", "config", type=click.Path(exists=True, dir_okay=False), required=True)
@out_option
@input_errors
def gln(config, out):
    """Transport gl(n) stability data along a path of configurations."""
    from .gln import gln_transport, load_config, single_wall_check

    s, path = load_config(config)
    log: list = []
    final = gln_transport(s, path, log)
    walls = single_wall_check(s, path)
    finish(
        {
            "n": s.n,
            "initial": s.to_json(),
            "final_a": [[qstr(x) for x in r] for r in final.a],
            "crossings": [c.to_json() for c in log],
            "single_wall_checks": walls,
            "passed": all(walls),
        },
        out,
    )


def _load_transport(path):
    from .engine import StabilityData
    from .lattice import Charge, SkewLattice, Truncation

    with open(path) as fh:
        data = json.load(fh)
    flavor = Flavor(data.get("flavor", "classical"))
    L = SkewLattice(data["form"])
    T = Truncation(data["generators"], data["delta"], int(data["deg"]))
    Z = Charge(L, [GaussRational.parse(v) for v in data["charge"]])
    Z2 = Charge(L, [GaussRational.parse(v) for v in data["target"]])
    parse = VRatFunc.from_json if flavor is Flavor.QUANTUM else Q
    omega = {tuple(e["gamma"]): parse(e["omega"]) for e in data["omega"]}
    return StabilityData(L, T, Z, omega, flavor), Z2


@main.command()
@click.option("--input", "input_", type=click.Path(exists=True, dir_okay=False), required=True)
@out_option
@click.pass_context
@input_errors
def transport(ctx, input_, out):
    """Re-factorize stability data at a new central charge."""
    from .engine import assemble, transport as tr

    sd, Z2 = _load_transport(input_)
    w = sd.truncation.bound if sd.flavor is Flavor.QUANTUM else 1
    guard(len(sd.truncation.points()), w, _budget(ctx))
    new = tr(sd, Z2)
    back = tr(new, sd.charge)
    finish(
        {
            "flavor": sd.flavor.value,
            "before": sd.to_json(),
            "after": new.to_json(),
            "same_group_element": assemble(new) == assemble(sd),
            "round_trip": back == sd,
            "passed": back == sd,
        },
        out,
    )


@main.command()
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
def scenarios(fmt):
    """List the named scenarios."""
    from .scenarios import REGISTRY

    if fmt == "json":
        emit([{"name": s.name, "anchor": s.anchor, "criterion": s.criterion} for s in REGISTRY.values()])
        return
    for s in REGISTRY.values():
        tag = f"[{s.criterion}]" if s.criterion else "   "
        click.echo(f"{s.name:26s} {tag:5s} {s.anchor}")


def _run_one(name: str) -> dict:
    from .scenarios import get

    return get(name).run()


@main.command()
@click.argument("names", nargs=-1, required=True)
@out_option
def run(names, out):
    """Run scenarios by name, criterion number, or 'all'."""
    from .scenarios import REGISTRY, get

    if names == ("all",):
        names = tuple(REGISTRY)
    resolved = []
    for n in names:
        try:
            resolved.append(get(n).name)
        except KeyError:
            raise click.UsageError(f"unknown scenario {n!r}; see 'scenarios'") from None
    workers = min(threads(), len(resolved))
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_run_one, resolved))
    else:
        results = [_run_one(n) for n in resolved]
    if len(resolved) == 1:
        rep = results[0]
    else:
        rep = {"scenarios": dict(zip(resolved, results)), "passed": all(r["passed"] for r in results)}
    finish(rep, out)


@main.command()
def info():
    """Report the arithmetic and kernel backends."""
    emit({"kernel": KERNEL_BACKEND, "rationals": RATIONAL_BACKEND, "threads": threads()})


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
