"""Command-line entry point.

Every command prints JSON on standard output (or plain ``key: value`` lines
with ``--out text``).  The exit status is 1 when any verdict is Fail and 2
on input errors.  ``--report`` wraps the result with the command name, a
digest of the inputs and tallies of skipped verdicts.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import click

from . import eigen as eigen_mod
from . import jacobi, localrep, quadform, siegel_ops
from .fourier import SPACES, STABLE_KLINGEN, ingest, read_fourier, serialize
from .scalars import format_scalar, parse_scalar

WORKERS_ENV = "SIEGELFC_WORKERS"


class Failed(Exception):
    """Raised after output when a Fail verdict must set the exit status."""


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return format_scalar(x)
    return str(x)


def _text(x, indent="") -> str:
    if isinstance(x, dict):
        lines = []
        for k, v in x.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{indent}{k}:")
                lines.append(_text(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {v}")
        return "\n".join(lines)
    if isinstance(x, list):
        return "\n".join(_text(v, indent) if isinstance(v, dict) else f"{indent}{v}" for v in x)
    return f"{indent}{x}"


def _digest(ctx: click.Context) -> str:
    h = hashlib.sha256()
    h.update(ctx.command_path.encode())
    for name, value in sorted(ctx.params.items()):
        h.update(f"{name}={value!r};".encode())
        if isinstance(value, str) and Path(value).is_file():
            h.update(Path(value).read_bytes())
    return h.hexdigest()[:16]


def emit(ctx: click.Context, result, verdicts=()) -> None:
    opts = ctx.find_root().obj
    result = _jsonable(result)
    if opts["report"]:
        tallies = {}
        for v in verdicts:
            tallies[v.status.value] = tallies.get(v.status.value, 0) + 1
        result = {"command": ctx.info_name, "inputs_digest": _digest(ctx), "results": result,
                  "warnings": {"skipped": tallies.get("Skipped", 0)}}
    if opts["out"] == "json":
        click.echo(json.dumps(result))
    else:
        click.echo(_text(result))
    if any(v.status is eigen_mod.Verdict.FAIL for v in verdicts):
        raise Failed()


def _index(text: str) -> quadform.QuadIndex:
    return quadform.parse_index(text)


@click.group()
@click.option("--out", type=click.Choice(["json", "text"]), default="json", show_default=True)
@click.option("--report", is_flag=True, help="Wrap results with command, digest and tallies.")
@click.pass_context
def main(ctx, out, report):
    """Fourier coefficient algebra of degree 2 Siegel modular forms."""
    ctx.obj = {"out": out, "report": report}


# ------------------------------------------------------------ quadratic forms

@main.command()
@click.argument("S")
@click.pass_context
def reduce(ctx, s):
    """Reduce the form a,b,c (b is twice the off-diagonal entry)."""
    S = _index(s)
    R, g = quadform.reduce(S)
    emit(ctx, {"input": list(S), "reduced": list(R), "matrix": [list(g[:2]), list(g[2:])],
               "disc4": S.disc4})


@main.command()
@click.argument("d", type=int)
@click.pass_context
def ydset(ctx, d):
    """The candidate reduced forms of discriminant d."""
    emit(ctx, [list(S) for S in quadform.y_set(d)])


def _orbit_task(args):
    group, N, d, variant = args
    return d, quadform.orbit_reps(quadform.parse_group(group), N, d, variant)


@main.command()
@click.option("--group", default="Gamma0(1)", show_default=True,
              help="SL2Z, G1, G2, G3, Gamma0(N), Gamma(N), Upper(M,N), optional suffix +-.")
@click.option("--N", "level", type=int, required=True, help="Level of the index set.")
@click.option("--d", "d_max", type=int, required=True, help="Largest discriminant (inclusive).")
@click.option("--variant", type=click.Choice(["A", "B"]), default="A", show_default=True)
@click.option("--list/--count", "listing", default=False)
@click.pass_context
def orbits(ctx, group, level, d_max, variant, listing):
    """Orbit representatives for discriminants 1..d (workers from SIEGELFC_WORKERS)."""
    quadform.parse_group(group)
    tasks = [(group, level, d, variant) for d in range(1, d_max + 1)]
    workers = int(os.environ.get(WORKERS_ENV, "1"))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = sorted(pool.map(_orbit_task, tasks))
    else:
        results = [_orbit_task(t) for t in tasks]
    out = {"group": group, "N": level, "variant": variant,
           "count": sum(len(r) for _, r in results)}
    if listing:
        out["representatives"] = {d: [list(S) for S in r] for d, r in results if r}
    emit(ctx, out)


@main.command()
@click.argument("S1")
@click.argument("S2")
@click.option("--group", default="SL2Z", show_default=True)
@click.pass_context
def equiv(ctx, s1, s2, group):
    """A matrix g in the group with g S1 g^T = S2, or null."""
    w = quadform.equivalent(_index(s1), _index(s2), quadform.parse_group(group))
    emit(ctx, None if w is None else {"matrix": [list(w.entries[:2]), list(w.entries[2:])],
                                      "det": w.det})


# ------------------------------------------------------------------ expansions

@main.command("ingest")
@click.argument("rows_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--level", type=int, required=True)
@click.option("--weight", type=int, required=True)
@click.option("--space", type=click.Choice(SPACES), default=STABLE_KLINGEN, show_default=True)
@click.option("--doubled-outer", is_flag=True, help="Rows give 2a and 2c.")
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write a fourier file.")
@click.pass_context
def ingest_cmd(ctx, rows_file, level, weight, space, doubled_outer, output):
    """Build an expansion from rows a,b,c[,d],value."""
    rows = []
    for raw in Path(rows_file).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            rows.append([x.strip() for x in line.split(",")])
    F = ingest(rows, level, weight, space, doubled_outer=doubled_outer)
    if output:
        Path(output).write_text(serialize(F), encoding="utf-8")
    emit(ctx, {"orbits": len(F), "bound": F.bound, "level": F.level, "weight": F.weight,
               "space": F.space})


@main.command("apply")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--op", type=click.Choice(siegel_ops.OPS), required=True)
@click.option("--p", "p", type=int, required=True)
@click.option("--method", type=click.Choice(["direct", "abstract"]), default="direct",
              show_default=True)
@click.option("--bound", type=int, default=None, help="Cap on the output discriminant bound.")
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@click.pass_context
def apply_cmd(ctx, file, op, p, method, bound, output):
    """Apply one operator; writes a fourier file (stdout when -o is absent)."""
    G = siegel_ops.apply(read_fourier(file), op, p, bound, method)
    if output:
        Path(output).write_text(serialize(G), encoding="utf-8")
        emit(ctx, {"orbits": len(G), "bound": G.bound, "level": G.level})
    else:
        click.echo(serialize(G), nl=False)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--m", "m", type=int, required=True, help="Jacobi index.")
@click.option("--n-max", type=int, default=None)
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@click.pass_context
def fj(ctx, file, m, n_max, output):
    """The m-th Fourier-Jacobi coefficient as a jacobi file."""
    f = jacobi.fj_decompose(read_fourier(file), m, n_max)
    text = jacobi.serialize_jacobi(f)
    if output:
        Path(output).write_text(text, encoding="utf-8")
        emit(ctx, {"index": f.index, "bound": f.bound, "entries": len(f.table)})
    else:
        click.echo(text, nl=False)


# ---------------------------------------------------------------- eigenvalues

@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--p", "p", type=int, required=True)
@click.option("--detail", is_flag=True, help="Add witnesses, epsilon and notes.")
@click.pass_context
def eigen(ctx, file, p, detail):
    """Extract mu, lambda and the genericity verdict at p."""
    emit(ctx, eigen_mod.eigen_report(read_fourier(file), p).as_dict(detail))


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--p", "p", type=int, required=True)
@click.option("--all", "show_all", is_flag=True, help="List skipped verdicts too.")
@click.pass_context
def verify(ctx, file, p, show_all):
    """Evaluate every applicable identity on its witnesses."""
    verdicts = eigen_mod.verify_identities(read_fourier(file), p)
    shown = [v.as_dict() for v in verdicts
             if show_all or v.status is not eigen_mod.Verdict.SKIPPED]
    emit(ctx, shown, verdicts)


def _lfactor_for(F, p):
    rep = eigen_mod.eigen_report(F, p)
    if rep.lam is None or rep.mu is None:
        raise click.ClickException("eigenvalues could not be determined")
    if rep.t01_eigenvector:
        return eigen_mod.EigenLFactor(p, F.weight, rep.lam)
    return eigen_mod.spin_lfactor(p, F.weight, rep.lam, rep.mu)


@main.command()
@click.argument("file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--p", "p", type=int, required=True)
@click.option("--k", "k", type=int, default=None)
@click.option("--lambda", "lam", default=None)
@click.option("--mu", default=None)
@click.option("--eigen-case", is_flag=True, help="Degree-one factor of a T01 eigenvector.")
@click.pass_context
def lfactor(ctx, file, p, k, lam, mu, eigen_case):
    """Denominator of the local L-factor, from a file or from --k/--lambda/--mu."""
    if file:
        lf = _lfactor_for(read_fourier(file), p)
    else:
        if k is None or lam is None or (mu is None and not eigen_case):
            raise click.UsageError("give FILE or --k, --lambda and --mu")
        if eigen_case:
            lf = eigen_mod.EigenLFactor(p, k, parse_scalar(lam))
        else:
            lf = eigen_mod.spin_lfactor(p, k, parse_scalar(lam), parse_scalar(mu))
    emit(ctx, {"p": p, "coefficients": [format_scalar(c) for c in lf.coefficients]})


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--p", "p", type=int, required=True)
@click.option("--S", "s", required=True, help="Index a,b,c.")
@click.option("--length", type=int, default=9, show_default=True)
@click.pass_context
def recurrence(ctx, file, p, s, length):
    """Check the radial recurrence a(p^t S) along one index."""
    F = read_fourier(file)
    v = eigen_mod.radial_check(F.lookup, _index(s), _lfactor_for(F, p), length)
    emit(ctx, v.as_dict(), [v])


# ------------------------------------------------------------ classification

@main.command()
@click.option("--q", "q", type=int, required=True)
@click.option("--N", "N", type=int, required=True, help="Conductor exponent N_pi.")
@click.option("--lambda", "lam", required=True)
@click.option("--mu", required=True)
@click.option("--epsilon", type=click.Choice(["1", "-1"]), default=None)
@click.option("--t01-eigen", type=bool, default=None)
@click.pass_context
def classify(ctx, q, N, lam, mu, epsilon, t01_eigen):
    """Category and genericity from local eigenvalues."""
    profile = localrep.LocalProfile(q, N, parse_scalar(lam), parse_scalar(mu),
                                    None if epsilon is None else int(epsilon))
    emit(ctx, localrep.classify(profile, t01_eigen).as_dict())


def run(argv=None) -> int:
    try:
        main.main(args=argv, standalone_mode=False)
    except Failed:
        return 1
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return 2
    except click.exceptions.Abort:
        return 2
    except (ValueError, ArithmeticError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


def entry() -> None:
    sys.exit(run())


if __name__ == "__main__":
    entry()
