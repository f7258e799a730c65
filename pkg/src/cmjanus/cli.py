"""Command line entry point. Every command prints JSON on stdout.

Exit codes: 0 when the verdict passes, 1 when it fails, 2 on bad input.
"""

from __future__ import annotations

import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import click

from . import bialg
from . import contmatrix as cm
from . import janus
from . import sheafrep as sr
from .cellhomology import CellComplexModel
from .contmatrix import ContMatrix
from .monoid import MonoidError, MonoidSpec

INPUT_ERRORS = (ValueError, KeyError, TypeError, AttributeError, json.JSONDecodeError)


class InputError(click.ClickException):
    exit_code = 2


def emit(obj):
    click.echo(json.dumps(obj, indent=2, sort_keys=True))


def workers():
    """Worker cap from CMJANUS_WORKERS (default 1)."""
    raw = os.environ.get("CMJANUS_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"CMJANUS_WORKERS must be an integer, got {raw!r}")


def parse_monoid(text):
    try:
        return MonoidSpec.parse(text)
    except MonoidError as exc:
        raise InputError(str(exc))


def parse_element(spec, text):
    try:
        value = json.loads(text)
        return spec.validate(spec.element_from_json(value))
    except INPUT_ERRORS as exc:
        raise InputError(f"bad content {text!r}: {exc}")


def parse_shape(text):
    try:
        dims = tuple(int(x) for x in text.lower().split("x"))
    except ValueError:
        raise InputError(f"bad shape {text!r}; use e.g. 2x3")
    if not dims or any(d < 1 for d in dims):
        raise InputError("every cutoff/shape entry must be at least 1")
    return dims


def read_json(source):
    try:
        if source == "-":
            return json.load(sys.stdin)
        with open(source) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {source}: {exc}")


def load_janus(source):
    try:
        return janus.JanusData.from_json(read_json(source))
    except INPUT_ERRORS as exc:
        raise InputError(f"malformed Janus file: {exc}")


def category_cutoff(spec, n, cutoff, p=2):
    if cutoff:
        dims = parse_shape(cutoff)
        if len(dims) != p:
            raise InputError(f"cutoff needs {p} entries")
        return dims
    try:
        return cm.default_cutoff(spec, n, p)
    except cm.MatrixError as exc:
        raise InputError(str(exc))


def finish(ok):
    sys.exit(0 if ok else 1)


@click.group()
def main():
    """Contingency matrices, Janus sheaves and their Cousin complexes."""


@main.command("enumerate")
@click.option("--monoid", "monoid", default="nat", show_default=True, help="nat, truth:N or free:w1,w2")
@click.option("--content", required=True, help="content as JSON (integer, level, or array)")
@click.option("--shape", default=None, help="a single shape such as 2x2")
@click.option("--cutoff", default=None, help="pool all shapes up to this cutoff")
@click.option("--p", "p", default=2, show_default=True, type=int)
def enumerate_cmd(monoid, content, shape, cutoff, p):
    """List contingency matrices of a given content."""
    spec = parse_monoid(monoid)
    n = parse_element(spec, content)
    if spec.is_zero(n):
        raise InputError("content must be nonzero")
    if shape:
        dims = parse_shape(shape)
        mats = cm.enumerate_shape(spec, n, dims)
    else:
        dims = category_cutoff(spec, n, cutoff, p)
        mats = cm.enumerate_all(spec, n, dims)
    emit({
        "monoid": spec.to_json(),
        "content": spec.element_to_json(n),
        "count": len(mats),
        "matrices": [m.to_json() for m in mats],
    })


@main.command()
@click.option("--monoid", "monoid", default="nat", show_default=True)
@click.option("--content", required=True)
@click.option("--p", "p", default=2, show_default=True, type=int)
@click.option("--cutoff", default=None)
def homology(monoid, content, p, cutoff):
    """Borel-Moore homology of the cell decomposition (degree -> dimension)."""
    spec = parse_monoid(monoid)
    n = parse_element(spec, content)
    model = CellComplexModel(spec, n, p, category_cutoff(spec, n, cutoff, p))
    emit({
        "homology": {str(d): r for d, r in model.homology().items()},
        "cell_counts": {str(d): c for d, c in model.cell_counts().items()},
        "euler_characteristic": model.euler_characteristic(),
    })


@main.command("check-janus")
@click.argument("source")
def check_janus_cmd(source):
    """Check the Janus axioms of a Janus file ('-' for stdin)."""
    E = load_janus(source)
    verdict = janus.check_janus(E)
    emit(verdict.to_json())
    finish(verdict.ok)


@main.command()
@click.argument("source")
def cousin(source):
    """Print the Cousin complex of a Janus file."""
    E = load_janus(source)
    C = janus.cousin(E)
    out = janus.cousin_to_json(C)
    out.update({
        "monoid": E.category.spec.to_json(),
        "content": E.category.spec.element_to_json(E.category.n),
        "cutoff": list(E.category.cutoff),
    })
    emit(out)


@main.command("check-perverse")
@click.argument("source")
@click.option("--window/--no-window", default=True, show_default=True,
              help="ignore the boundary degrees introduced by a shape cutoff")
def check_perverse_cmd(source, window):
    """Perversity of a functor file, or of the Cousin complex of a Janus file."""
    obj = read_json(source)
    try:
        if "deltas_h" in obj or "deltas_v" in obj:
            functor = janus.cousin(janus.JanusData.from_json(obj))
        else:
            spec = MonoidSpec.from_json(obj["monoid"])
            functor = janus.functor_from_json(spec, spec.element_from_json(obj["content"]), obj["cutoff"], obj)
    except INPUT_ERRORS as exc:
        raise InputError(f"malformed input: {exc}")
    win = janus.truncation_window(functor.category) if window else None
    try:
        report = sr.check_perverse(functor, window=win)
    except sr.NotConstructible as exc:
        emit({"perverse": False, "constructible": False, "reason": str(exc), "window": win})
        finish(False)
    out = report.to_json()
    out.update({"constructible": True, "window": list(win) if win else None})
    emit(out)
    finish(report.perverse)


def _load_bialgebra(preset, source, content):
    if source:
        try:
            return bialg.GradedBialgebra.from_json(read_json(source))
        except INPUT_ERRORS as exc:
            raise InputError(f"malformed bialgebra file: {exc}")
    bound = content if isinstance(content, int) else 6
    try:
        return bialg.preset(preset, max(bound, 1))
    except bialg.BialgebraError as exc:
        raise InputError(str(exc))


@main.command("bialg")
@click.option("--preset", default="kx", show_default=True, help=", ".join(bialg.PRESETS))
@click.option("--file", "source", default=None, help="bialgebra JSON instead of a preset")
@click.option("--content", default=None, help="content n of the Janus sheaf")
@click.option("--cutoff", default=None)
@click.option("--axioms", is_flag=True, help="print the axiom verdicts instead of the Janus sheaf")
def bialg_cmd(preset, source, content, cutoff, axioms):
    """Janus sheaf E_{A,n} of a graded bialgebra (or its axiom check)."""
    if content is None and not axioms:
        raise InputError("--content is required unless --axioms is given")
    if source:
        A = _load_bialgebra(preset, source, None)
        spec = A.spec
        n = parse_element(spec, content) if content is not None else None
    else:
        raw = json.loads(content) if content is not None else None
        A = _load_bialgebra(preset, None, raw)
        spec = A.spec
        n = parse_element(spec, content) if content is not None else None
    if axioms:
        report = bialg.check_axioms(A, n)
        emit({k: {"pass": ok, "witness": wit} for k, (ok, wit) in report.items()})
        finish(bialg.axioms_ok(report))
    if spec.is_zero(n):
        raise InputError("content must be nonzero")
    cut = category_cutoff(spec, n, cutoff) if (cutoff or spec.kind != "truth") else (3, 3)
    emit(bialg.janus_from_bialgebra(A, n, cut).to_json())


def _parse_object(spec, text):
    try:
        value = json.loads(text)
        if isinstance(value, dict):
            return ContMatrix.from_json(spec, value)
        if not isinstance(value, list):
            value = [[value]]
        return ContMatrix.from_nested(spec, value)
    except INPUT_ERRORS as exc:
        raise InputError(f"bad object {text!r}: {exc}")


@main.command()
@click.option("--preset", default="kx", show_default=True)
@click.option("--object", "objects", multiple=True, required=True,
              help="a matrix as JSON: 1, [[1,0],[0,1]] or a matrix object; repeat 2 or 3 times")
@click.option("--cutoff", default=None)
def braiding(preset, objects, cutoff):
    """Coherence of the evaluated braiding on two or three objects."""
    A = _load_bialgebra(preset, None, 6)
    mats = [_parse_object(A.spec, o) for o in objects]
    cut = parse_shape(cutoff) if cutoff else ((3, 3) if A.spec.kind == "truth" else None)
    try:
        report = bialg.braiding_report(A, mats, cut)
    except bialg.BialgebraError as exc:
        raise InputError(str(exc))
    emit(report.to_json())
    finish(report.ok)


def _fuzz_one(args):
    monoid, content, cutoff, seed = args
    spec = MonoidSpec.parse(monoid)
    n = spec.element_from_json(content)
    E = bialg.random_janus_sheaf(spec, n, cutoff, seed)
    verdict = janus.check_janus(E)
    dd_ok, degree, wit = janus.double_vertical_dual_check(E)
    C = janus.cousin(E)
    D = sr.verdier_dual(C)
    Ct = janus.cousin(janus.transpose_janus(E))
    transpose_ok = all(
        D.value(m).homology_dims() == Ct.value(cm.transpose(m)).homology_dims() for m in E.category.objects
    )
    return {
        "seed": seed,
        "janus": verdict.ok,
        "double_dual": dd_ok,
        "double_dual_degree": degree,
        "transpose_identity": transpose_ok,
        "roundtrip": janus.same_janus(janus.cousin_extract(C), E),
    }


@main.command()
@click.option("--monoid", "monoid", default="nat", show_default=True)
@click.option("--content", default="2", show_default=True)
@click.option("--cutoff", default=None)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--count", default=5, show_default=True, type=int)
def fuzz(monoid, content, cutoff, seed, count):
    """Random Janus sheaves: axioms, double dual, transpose identity and round trip."""
    spec = parse_monoid(monoid)
    n = parse_element(spec, content)
    cut = category_cutoff(spec, n, cutoff) if (cutoff or spec.kind != "truth") else (3, 3)
    jobs = [(monoid, spec.element_to_json(n), cut, seed + k) for k in range(count)]
    try:
        if workers() > 1 and count > 1:
            with ProcessPoolExecutor(max_workers=workers()) as pool:
                results = list(pool.map(_fuzz_one, jobs))
        else:
            results = [_fuzz_one(j) for j in jobs]
    except bialg.BialgebraError as exc:
        raise InputError(str(exc))
    ok = all(all(v for k, v in r.items() if k not in ("seed", "double_dual_degree")) for r in results)
    emit({"seed": seed, "count": count, "pass": ok, "results": results})
    finish(ok)


if __name__ == "__main__":
    main()
