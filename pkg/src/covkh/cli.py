"""Command line interface.

Inputs are JSON documents in one of three forms::

    {"type": "pd", "crossings": [[1, 5, 2, 4], ...]}
    {"type": "word", "n_in": 0, "slices": [{"cup": 0}, {"pos": 1}, ...]}
    {"type": "braid", "strands": 2, "word": [1, 1, 1]}

``--input`` takes a path, ``-`` for standard input, or the JSON text
itself.  JSON output is canonical (sorted keys, fixed iteration orders),
so identical inputs give byte-identical output.

Exit status: 0 when everything requested succeeded, 1 when a check
failed, 2 on bad input or a refused job.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import List, Optional

import click

from .tangles import ParseError, TangleDiagram, parse_diagram

DEFAULT_MAX_CROSSINGS = 12

SPECS = {"even": (1, 1, 1), "odd": (1, -1, 1)}


class InputError(click.ClickException):
    exit_code = 2


def parse_spec(text: str):
    """``even``, ``odd`` or ``x,y,z`` with each entry ``+1`` or ``-1``."""
    key = text.strip().lower()
    if key in SPECS:
        return SPECS[key]
    try:
        vals = tuple(int(v) for v in key.split(","))
    except ValueError:
        raise InputError(f"bad specialisation {text!r}: use even, odd or x,y,z") from None
    if len(vals) != 3 or any(v not in (1, -1) for v in vals):
        raise InputError(f"bad specialisation {text!r}: need three entries, each 1 or -1")
    return vals


def _read(source: str) -> tuple:
    """Return ``(text, label)`` for a path, ``-`` or inline JSON."""
    if source == "-":
        return sys.stdin.read(), "<stdin>"
    if source.lstrip().startswith("{"):
        return source, "<inline>"
    path = Path(source)
    if not path.is_file():
        raise InputError(f"{source}: no such file")
    return path.read_text(), source


def load_diagram(source: str, max_crossings: int) -> TangleDiagram:
    text, label = _read(source)
    try:
        T = parse_diagram(text)
    except ParseError as exc:
        raise InputError(f"{label}: {exc}") from None
    if T.n_crossings > max_crossings:
        raise InputError(
            f"{label}: {T.n_crossings} crossings exceed the limit of {max_crossings} "
            f"(the cube has 2^{T.n_crossings} vertices); raise it with --max-crossings"
        )
    return T


def _emit(obj, fmt: str, table: Optional[str] = None) -> None:
    if fmt == "json":
        click.echo(json.dumps(obj, sort_keys=True, indent=2))
    else:
        click.echo(table if table is not None else json.dumps(obj, sort_keys=True, indent=2))


input_option = click.option("--input", "source", required=True,
                            help="JSON file, '-' for stdin, or inline JSON.")
limit_option = click.option("--max-crossings", default=DEFAULT_MAX_CROSSINGS, show_default=True,
                            help="Refuse diagrams with more crossings than this.")
format_option = click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json",
                             show_default=True)


@click.group()
def main() -> None:
    """Covering Khovanov homology of tangles and links."""


@main.command()
@input_option
@click.option("--spec", "spec_text", default="even", show_default=True,
              help="even, odd, or x,y,z with entries +-1.")
@format_option
@limit_option
@click.option("--jobs", default=1, show_default=True, help="Worker processes for the homology blocks.")
def compute(source: str, spec_text: str, fmt: str, max_crossings: int, jobs: int) -> None:
    """Integral homology of the specialised complex.

    For a tangle with endpoints the complex is summed over all pairs of
    closing matchings.
    """
    from .complex import kh_complex
    from .homology import homology

    spec = parse_spec(spec_text)
    T = load_diagram(source, max_crossings)
    H = homology(kh_complex(T), spec, jobs=jobs)
    _emit(H.to_json(), fmt, H.render())


@main.command()
@input_option
@format_option
@limit_option
def jones(source: str, fmt: str, max_crossings: int) -> None:
    """Unnormalised Jones polynomial (the unknot gives q + q^-1).

    PD input goes through the Kauffman bracket; other inputs use the
    graded Euler characteristic of the even complex.
    """
    from .homology import format_laurent
    from .oracle import jones_polynomial

    T = load_diagram(source, max_crossings)
    if T.n_in or T.n_out:
        raise InputError("the Jones polynomial needs a link, not a tangle with endpoints")
    text, _ = _read(source)
    obj = json.loads(text)
    if obj.get("type") == "pd":
        poly = jones_polynomial(obj["crossings"])
        method = "kauffman-bracket"
    else:
        from .complex import kh_complex

        poly = {}
        for g in kh_complex(T).gens:
            poly[g.q] = poly.get(g.q, 0) + (-1) ** (g.h % 2)
        poly = {e: c for e, c in sorted(poly.items()) if c}
        method = "euler-characteristic"
    out = {"method": method, "coefficients": {str(e): c for e, c in sorted(poly.items())},
           "polynomial": format_laurent(poly)}
    _emit(out, fmt, out["polynomial"])


@main.group()
def check() -> None:
    """Structural and gluing checks."""


@check.command("structure")
@click.option("--seed", default=0, show_default=True, help="Seed for the random samples.")
@click.option("--samples", default=100, show_default=True, help="Random samples per identity.")
@format_option
def check_structure(seed: int, samples: int, fmt: str) -> None:
    """Cocycle, arc algebras, TQFT relations, shift coherence, iota, d^2."""
    from .checks import structure_checks

    results = structure_checks(seed=seed, samples=samples)
    ok = all(r.passed for r in results)
    report = {"passed": ok, "seed": seed, "checks": [r.to_json() for r in results]}
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name:18s} {r.checked:7d} checked" for r in results]
    _emit(report, fmt, "\n".join(lines))
    sys.exit(0 if ok else 1)


@check.command("gluing")
@click.option("--left", "left", required=True, help="Upper factor T2 (applied second).")
@click.option("--right", "right", required=True, help="Lower factor T1 (applied first).")
@click.option("--spec", "spec_text", default="even", show_default=True)
@format_option
@limit_option
def check_gluing(left: str, right: str, spec_text: str, fmt: str, max_crossings: int) -> None:
    """Compare kh(T2) (x) kh(T1) with kh(T2 T1), where T2 = --left, T1 = --right."""
    from .checks import gluing_check

    spec = parse_spec(spec_text)
    T2 = load_diagram(left, max_crossings)
    T1 = load_diagram(right, max_crossings)
    if T1.n_out != T2.n_in:
        raise InputError(f"cannot glue: the lower factor ends on {2 * T1.n_out} points, "
                         f"the upper one starts on {2 * T2.n_in}")
    if T1.n_crossings + T2.n_crossings > max_crossings:
        raise InputError("the glued diagram exceeds the crossing limit")
    rep = gluing_check(T2, T1, spec)
    out = {"isomorphic": rep.isomorphic, "spec": list(spec),
           "tensor_product": rep.glued.to_json(), "composite": rep.composite.to_json()}
    table = "isomorphic homology: " + ("yes" if rep.isomorphic else "no")
    if fmt == "table":
        table += "\n" + rep.composite.render()
    _emit(out, fmt, table)
    sys.exit(0 if rep.isomorphic else 1)


@main.group()
def dump() -> None:
    """Dump algebraic data."""


@dump.command("arc-algebra")
@click.option("--n", "n", required=True, type=click.IntRange(0, 4), help="Number of endpoint pairs.")
def dump_arc_algebra(n: int) -> None:
    """Basis, degrees and structure constants of the arc algebra H^n."""
    from .arc_algebra import build_arc_algebra
    from .tangles import matching_key

    H = build_arc_algebra(n)
    basis: List[dict] = []
    for key in H.basis():
        g = H.gdegree(key)
        basis.append({"source": matching_key(key[0]), "target": matching_key(key[1]),
                      "index": key[2], "degree": list(g.p)})
    out = {"n": n, "matchings": [matching_key(a) for a in H.matchings],
           "basis": basis, "products": H.structure_constants()}
    click.echo(json.dumps(out, sort_keys=True, indent=2))


if __name__ == "__main__":  # pragma: no cover
    main()
