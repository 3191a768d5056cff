"""Command-line front end.

Exit codes: 0 success, 1 tolerance exceeded, 2 evaluation failure,
3 parameter error (including usage errors), 4 identity not applicable.
"""

from __future__ import annotations

import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import click

from . import identities as ids
from .errors import DenominatorPole, GammaPole, SamplerExhausted, SeriesError
from .hyper import PFQParams, SeriesValue, eval_pfq
from .kdf import PARAM_NAMES, KdFParams, eval_kdf
from .numeric import is_exact, to_complex

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_EVALUATION = 2
EXIT_PARAMETER = 3
EXIT_INAPPLICABLE = 4

DIGITS = 16


def parse_scalar(text: str):
    """'p/q', integers and decimals become exact Fractions; '1+2j' becomes complex."""
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return complex(text.replace("i", "j") if text.endswith("i") else text)
    except ValueError:
        raise click.BadParameter(f"{text!r} is not a rational, decimal or complex literal") from None


class ScalarType(click.ParamType):
    name = "scalar"

    def convert(self, value, param, ctx):
        if not isinstance(value, str):
            return value
        try:
            return parse_scalar(value)
        except click.BadParameter as exc:
            self.fail(exc.message, param, ctx)


SCALAR = ScalarType()


def format_real(x: float) -> str:
    return f"{x:.{DIGITS}g}"


def format_value(v) -> str:
    if is_exact(v):
        return str(v)
    w = to_complex(v)
    if w.imag == 0:
        return format_real(w.real)
    sign = "+" if w.imag >= 0 else "-"
    return f"{format_real(w.real)}{sign}{format_real(abs(w.imag))}j"


def encode(v):
    """JSON form: rationals as strings, everything else as [re, im]."""
    if v is None:
        return None
    if is_exact(v):
        return str(v)
    w = to_complex(v)
    return [float(w.real), float(w.imag)]


def series_dict(v: SeriesValue) -> dict:
    out = {"value": encode(v.value)}
    if not is_exact(v.value):
        out["value_text"] = format_value(v.value)
    out.update(abs_err=float(v.abs_err), terms=int(v.terms), status=v.status.value)
    return out


def print_series(v: SeriesValue, as_json: bool) -> None:
    if as_json:
        click.echo(json.dumps(series_dict(v)))
        return
    if is_exact(v.value):
        click.echo(f"value    {format_real(float(v.value))}")
        click.echo(f"exact    {v.value}")
    else:
        click.echo(f"value    {format_value(v.value)}")
    click.echo(f"abs_err  {float(v.abs_err):.3e}")
    click.echo(f"terms    {v.terms}")
    click.echo(f"status   {v.status.value}")


def param_options(fn):
    for name in reversed(PARAM_NAMES):
        flag = "--" + name.replace("_", "-")
        fn = click.option(flag, name, type=SCALAR, required=True, help=f"parameter {name}")(fn)
    return fn


def build_params(kw: dict, x=1, y=1) -> KdFParams:
    return KdFParams(**{name: kw[name] for name in PARAM_NAMES}, x=x, y=y)


def fail(message: str, code: int) -> int:
    click.echo(f"error: {message}", err=True)
    return code


# sweep records -------------------------------------------------------------------


def evaluate_record(identity: ids.IdentityId, p: KdFParams, tol: float):
    """Return (record, outcome) where outcome is an IdentityEvaluation or the exception."""
    record = {
        "identity": identity.value,
        "params": {name: encode(v) for name, v in p.parameters().items()},
        "lhs": None,
        "rhs": None,
        "rel_err": None,
        "status": "ok",
        "terms_lhs": None,
        "message": None,
    }
    try:
        ev = ids.verify(identity, p, tol=min(tol, 1e-14))
    except ids.Inapplicable as exc:
        record.update(status="inapplicable", message=str(exc))
        return record, exc
    except ids.SideFailure as exc:
        record.update(status=f"{exc.side}_failed", message=str(exc.cause))
        return record, exc
    record.update(
        lhs=encode(ev.lhs.value),
        rhs=encode(ev.rhs.value),
        rel_err=float(ev.rel_err),
        terms_lhs=int(ev.lhs.terms),
    )
    return record, ev


def make_record(identity: ids.IdentityId, p: KdFParams, tol: float) -> dict:
    return evaluate_record(identity, p, tol)[0]


def _record_job(args):
    return make_record(*args)


# commands --------------------------------------------------------------------------


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Evaluate and verify Kampe de Feriet series F^{0:3}_{1:1}(x, y)."""


@cli.command("eval-kdf")
@param_options
@click.option("--x", "x", type=SCALAR, default="1", show_default=True)
@click.option("--y", "y", type=SCALAR, default="1", show_default=True)
@click.option("--tol", type=float, default=1e-14, show_default=True)
@click.option("--method", type=click.Choice(["auto", "diagonal"]), default="auto", show_default=True)
@click.option("--json", "as_json", is_flag=True, help="print one JSON object")
def eval_kdf_cmd(x, y, tol, method, as_json, **kw):
    """Evaluate the double series at (x, y)."""
    try:
        p = build_params(kw, x, y)
        value = eval_kdf(p, tol=tol, method=method)
    except (DenominatorPole, ValueError, TypeError) as exc:
        return fail(str(exc), EXIT_PARAMETER)
    except SeriesError as exc:
        return fail(str(exc), EXIT_EVALUATION)
    print_series(value, as_json)
    return EXIT_OK


@cli.command("eval-pfq")
@click.option("--num", "-n", "nums", type=SCALAR, multiple=True, help="numerator parameter (repeat)")
@click.option("--den", "-d", "dens", type=SCALAR, multiple=True, help="denominator parameter (repeat)")
@click.option("--z", type=SCALAR, default="1", show_default=True)
@click.option("--tol", type=float, default=1e-14, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def eval_pfq_cmd(nums, dens, z, tol, as_json):
    """Evaluate pFq[nums; dens; z]."""
    try:
        value = eval_pfq(PFQParams(nums, dens, z), tol=tol)
    except (DenominatorPole, ValueError, TypeError) as exc:
        return fail(str(exc), EXIT_PARAMETER)
    except SeriesError as exc:
        return fail(str(exc), EXIT_EVALUATION)
    print_series(value, as_json)
    return EXIT_OK


@cli.command("verify")
@click.option("--identity", "-i", "name", required=True, help="identity id, e.g. res1")
@param_options
@click.option("--tol", type=float, default=1e-9, show_default=True, help="accepted relative error")
@click.option("--exact", is_flag=True, help="require both sides in exact rational arithmetic")
def verify_cmd(name, tol, exact, **kw):
    """Check one identity at one parameter set; prints a report record."""
    try:
        identity = ids.IdentityId.parse(name)
        p = build_params(kw)
    except (ValueError, TypeError) as exc:
        return fail(str(exc), EXIT_PARAMETER)
    if exact and not p.exact:
        return fail("--exact needs rational parameters", EXIT_PARAMETER)
    record, outcome = evaluate_record(identity, p, tol)
    click.echo(json.dumps(record))
    if isinstance(outcome, ids.Inapplicable):
        for line in outcome.report.failures():
            click.echo(f"inapplicable: {line}", err=True)
        return EXIT_INAPPLICABLE
    if isinstance(outcome, ids.SideFailure):
        code = EXIT_PARAMETER if isinstance(outcome.cause, DenominatorPole) else EXIT_EVALUATION
        return fail(str(outcome), code)
    if exact:
        if outcome.backend != "exact":
            return fail("exact evaluation unavailable for this parameter set", EXIT_EVALUATION)
        return EXIT_OK if outcome.lhs.value == outcome.rhs.value else EXIT_TOLERANCE
    return EXIT_OK if outcome.rel_err <= tol else EXIT_TOLERANCE


@cli.command("sweep")
@click.option("--identity", "-i", "name", required=True, help="identity id or 'all'")
@click.option("--samples", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), required=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
def sweep_cmd(name, samples, seed, tol, out, jobs):
    """Verify sampled parameter sets and write one JSON record per line."""
    try:
        chosen = list(ids.IdentityId) if name.strip().lower() == "all" else [ids.IdentityId.parse(name)]
    except ValueError as exc:
        return fail(str(exc), EXIT_PARAMETER)

    jobs_list, sampler_failures = [], []
    for identity in chosen:
        try:
            jobs_list += [(identity, p, tol) for p in ids.sample_params(identity, seed, samples)]
        except SamplerExhausted as exc:
            sampler_failures.append(str(exc))

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_record_job, jobs_list, chunksize=4))
    else:
        records = [make_record(*job) for job in jobs_list]

    with open(out, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")

    failed = [r for r in records if r["status"] != "ok"]
    over = [r for r in records if r["status"] == "ok" and r["rel_err"] > tol]
    worst = max((r["rel_err"] for r in records if r["rel_err"] is not None), default=0.0)
    click.echo(f"records {len(records)}  max_rel_err {worst:.3e}  failures {len(failed)}  above_tol {len(over)}")
    for msg in sampler_failures:
        click.echo(f"sampler: {msg}", err=True)
    for r in failed:
        click.echo(f"{r['identity']}: {r['status']}: {r['message']}", err=True)
    if failed or sampler_failures:
        return EXIT_EVALUATION
    return EXIT_TOLERANCE if over else EXIT_OK


@cli.command("list-identities")
def list_identities_cmd():
    """Print every identity with its relations and validity conditions."""
    for entry in ids.REGISTRY.values():
        click.echo(entry.describe())
        click.echo("")
    return EXIT_OK


def main(argv=None) -> int:
    try:
        code = cli.main(args=argv, prog_name="kampe", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return EXIT_PARAMETER
    except click.ClickException as exc:
        exc.show()
        return EXIT_PARAMETER
    except click.exceptions.Abort:
        return EXIT_EVALUATION
    except GammaPole as exc:
        return fail(str(exc), EXIT_EVALUATION)
    return code if isinstance(code, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
