"""Command line entry point. Every subcommand writes CSV to stdout or --out.

A config file of ``key = value`` lines (given with --config) supplies
defaults for any option of the chosen subcommand; flags on the command line
win. QPRIME_THREADS sets the default thread count.
"""

from __future__ import annotations

import csv
import io
import math
import sys
from pathlib import Path

import click

from . import __version__
from .charsum import OSC_COLUMNS, OscMode, oscillation_suite
from .classfield import KeyDecomposition, check_composition, class_group, verify_key_decomp
from .density import NuVariant, c_f, nu_f, sigma_f, sigma_f_prime
from .experiments.counting import Region, Theorem, count_theorem
from .experiments.functionals import SeqKind, SequenceSpec, SieveParams, sieve_functionals
from .experiments.report import report_csv
from .experiments.type1 import type1_scan
from .qform import FormKind, QuadForm, classify


def read_config(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` lines; blank lines and # or ; comments ignored."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line[0] in "#;" or line.startswith("["):
            continue
        if "=" not in line:
            raise click.BadParameter(f"line {n}: expected 'key = value'", param_hint="--config")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _rows_csv(header: tuple[str, ...] | list[str], rows, comments: dict[str, str] | None = None) -> str:
    buf = io.StringIO()
    buf.write(f"# qprime {__version__}\n")
    for k, v in (comments or {}).items():
        buf.write(f"# {k}={v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _form(_ctx, _param, value):
    if value is None or isinstance(value, QuadForm):
        return value
    try:
        return QuadForm.parse(value)
    except ValueError as e:
        raise click.BadParameter(str(e)) from e


def _int(_ctx, _param, value):
    # accepts 1e8 and 10**8 style scales
    if value is None or isinstance(value, int):
        return value
    text = str(value).replace("**", "^")
    if "^" in text:
        b, e = text.split("^")
        return int(b) ** int(e)
    return int(float(text)) if "e" in text.lower() else int(text)


form_opt = click.option("--form", required=True, callback=_form, help="coefficients f2,f1,f0")
out_opt = click.option("--out", default=None, help="write CSV here instead of stdout")


@click.group()
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None, help="key = value defaults")
@click.version_option(__version__, prog_name="qprime")
@click.pass_context
def main(ctx, config):
    """Prime values of binary quadratic forms: desk-scale experiments."""
    if config:
        flat = read_config(config)
        ctx.default_map = {name: dict(flat) for name in main.commands}


@main.command("analyze-form")
@form_opt
@out_opt
def analyze_form(form, out):
    """Classification, discriminant and basic constants of a form."""
    cls = classify(form)
    row = [str(form), form.disc, cls.kind.value, cls.irreducible, cls.primitive, cls.admissible]
    header = ["form", "disc", "kind", "irreducible", "primitive", "admissible", "c_f", "class_number"]
    cf = c_f(form) if cls.irreducible and cls.kind is not FormKind.NEGATIVE_DEFINITE else math.nan
    try:
        h = class_group(form.disc).field.class_number
    except ValueError:
        h = ""
    _emit(_rows_csv(header, [row + [cf, h]]), out)


@main.command("count")
@form_opt
@click.option("--theorem", type=click.Choice(["mt0", "mt", "mt2"], case_sensitive=False), required=True)
@click.option("--xmax", required=True, callback=_int, help="scale X")
@click.option("--threads", type=int, default=None, envvar="QPRIME_THREADS", help="worker threads")
@click.option("--region", type=click.Choice([r.value for r in Region]), default=Region.FULL.value)
@out_opt
def count(form, theorem, xmax, threads, region, out):
    """Empirical prime count at scale X against the predicted main term."""
    variants = (NuVariant.AS_PRINTED, NuVariant.RHO_AT_RAMIFIED, NuVariant.PAIR_DENSITY)
    rep = count_theorem(form, xmax, Theorem(theorem.upper()), region, variants, threads)
    rep.metadata["threads"] = str(threads) if threads else "default"
    _emit(report_csv(rep), out)


@main.command("type1")
@form_opt
@click.option("--xmax", required=True, callback=_int)
@click.option("--level", required=True, callback=_int, help="level D")
@click.option("--rpower", type=int, default=1, help="weights on r-th powers")
@out_opt
def type1(form, xmax, level, rpower, out):
    """Type I remainders A_d - M_d over cube-free d <= D."""
    scan = type1_scan(form, xmax, level, rpower)
    meta = {
        "form": str(form),
        "X": str(xmax),
        "D": str(level),
        "r": str(rpower),
        "remainder_total": repr(scan.remainder_total),
        "main_total": repr(scan.main_total),
        "relative_remainder": repr(scan.relative_remainder),
        "shape": repr(scan.shape),
        "routes_agree": str(scan.routes_agree),
    }
    _emit(_rows_csv(("d", "A_d", "M_d", "abs_diff"), scan.rows(), meta), out)


@main.command("sieve-id")
@form_opt
@click.option("--xmax", required=True, callback=_int)
@click.option("--spec", "kind", type=click.Choice([k.value for k in SeqKind]), required=True)
@click.option("--interval-index", type=int, default=None)
@click.option("--varpi", type=float, default=0.5)
@click.option("--a1", "A1", type=float, default=0.5)
@out_opt
def sieve_id(form, xmax, kind, interval_index, varpi, A1, out):
    """Buchstab and S_2 decomposition identities for one sequence."""
    spec = SequenceSpec.at(kind, form, xmax, interval_index)
    r = sieve_functionals(spec, SieveParams(varpi=varpi, A1=A1))
    rows = [("S1", r.S1), ("S2", r.S2), ("S3", r.S3), ("tail", r.tail), ("pi", r.pi), ("boundary", r.boundary)]
    rows += [(f"T{n}", t) for n, t in enumerate(r.T, start=1)]
    rows += [(f"U{n}", u) for n, u in enumerate(r.U, start=1)]
    rows += [("buchstab_ok", r.buchstab_ok), ("s2_ok", r.s2_ok), ("n0", r.n0)]
    meta = {"form": str(form), "X": str(xmax), "spec": kind, "interval": f"{spec.interval[0]!r}..{spec.interval[1]!r}"}
    _emit(_rows_csv(("quantity", "value"), rows, meta), out)


@main.command("char-oscillation")
@click.option("--disc", type=int, required=True)
@click.option("--mode", type=click.Choice([m.value for m in OscMode]), required=True)
@click.option("--grid", default=None, help="comma-separated scales")
@click.option("--seed", type=int, default=0)
@out_opt
def char_oscillation(disc, mode, grid, seed, out):
    """Character-sum magnitudes against their bound shapes."""
    scales = [_int(None, None, g) for g in grid.split(",")] if grid else None
    rows = oscillation_suite(disc, mode, scales, seed=seed)
    data = [(r.mode, r.scale, r.raw_sum_re, r.raw_sum_im, r.bound_shape, r.ratio) for r in rows]
    _emit(_rows_csv(OSC_COLUMNS, data, {"disc": str(disc), "seed": str(seed)}), out)


@main.command("compose-verify")
@click.option("--disc", type=int, required=True)
@click.option("--mmax", callback=_int, default=500, help="bound on m n for the factorization check")
@click.option("--radius", type=int, default=3, help="coordinate box for the composition table")
@out_opt
def compose_verify(disc, mmax, radius, out):
    """Composition-table identities and the factorization identity for each class form."""
    G = class_group(disc)
    rows = [("composition", f"{a}*{b}", n, bad) for a, b, n, bad in check_composition(G, radius)]
    for c in G.classes:
        F = QuadForm(*c.form)
        if F.f2 <= 0:
            continue
        I = (0.0, math.inf) if disc < 0 else (0.0, math.sqrt(mmax))
        kd = KeyDecomposition(F, I, mmax)
        cases = bad = 0
        for m in range(1, mmax + 1):
            for n in range(1, mmax // m + 1):
                cases += 1
                bad += not verify_key_decomp(F, m, n, I, checker=kd)[2]
        rows.append(("factorization", str(F), cases, bad))
    _emit(_rows_csv(("check", "case", "count", "failures"), rows, {"disc": str(disc)}), out)


@main.command("density")
@form_opt
@click.option("--variant", type=click.Choice([v.value for v in NuVariant]), default=None)
@click.option("--pmax", callback=_int, default=10**6)
@out_opt
def density(form, variant, pmax, out):
    """Local-density product and archimedean areas."""
    variants = [NuVariant(variant)] if variant else list(NuVariant)
    s, sp = sigma_f(form), sigma_f_prime(form)
    rows = []
    for v in variants:
        nu = nu_f(form, pmax, v)
        rows.append((v.value, nu.value, nu.tail_bound, s.value, sp.value, nu.value * s.value, nu.value * sp.value))
    header = ("variant", "nu", "nu_tail", "sigma", "sigma_prime", "nu_sigma", "nu_sigma_prime")
    _emit(_rows_csv(header, rows, {"form": str(form), "pmax": str(pmax)}), out)


if __name__ == "__main__":
    main()
