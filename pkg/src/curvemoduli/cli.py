"""Command-line front end.

Every command reads one curve document (``--input FILE`` or ``--catalog NAME``)
and prints one report.  Exit status: 0 on success, 2 when the answer is
"unclassified" or "unsupported", 1 on bad input.
"""

from __future__ import annotations

import json
import math
import sys

import click

from .blowup import classify as classify_curve, radial_tests
from .catalog import catalog_curve, catalog_entry, catalog_names, expected
from .coeffcore import InputError, UnsupportedInput, parse_scalar
from .curvegerm import CurveGerm
from .normalform import act, marked_equivalent, moduli_point, orbit_reduce
from .saito import SaitoError, adapted_basis, radial_factor
from .semiring import compute_semiring

EXIT_OK, EXIT_INPUT, EXIT_UNSUPPORTED = 0, 1, 2
MIN_TRUNCATION = 8


class Outcome(Exception):
    """Carries a finished report together with a non-zero exit status."""

    def __init__(self, report: dict, status: int):
        super().__init__(report.get("reason", ""))
        self.report = report
        self.status = status


# ---------------------------------------------------------------------------
# documents and reports


def load_document(path: str | None, name: str | None, marking: str | None) -> CurveGerm:
    if (path is None) == (name is None):
        raise InputError("give exactly one of --input FILE and --catalog NAME")
    if name is not None:
        curve = catalog_curve(name)
    else:
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON in {path}: {exc}") from exc
        except OSError as exc:
            raise InputError(str(exc)) from exc
        curve = CurveGerm.from_json(doc)
    if marking:
        try:
            perm = [int(k) - 1 for k in marking.split(",")]
        except ValueError:
            raise InputError(f"bad marking {marking!r}: expected comma separated branch numbers") from None
        curve = curve.with_marking(perm)
    return curve


def _plain(obj):
    """JSON-ready copy with infinity written as "inf"."""
    if isinstance(obj, float) and math.isinf(obj):
        return "inf"
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def _glyph(obj):
    if obj == "inf":
        return "∞"
    if isinstance(obj, list):
        return "[" + ", ".join(_glyph(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{k}: {_glyph(v)}" for k, v in sorted(obj.items())) + "}"
    if obj is None:
        return "-"
    return str(obj)


def emit(report: dict, fmt: str) -> str:
    report = _plain(report)
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)
    width = max((len(k) for k in report), default=0)
    return "\n".join(f"{k.ljust(width)}  {_glyph(report[k])}" for k in sorted(report))


# ---------------------------------------------------------------------------
# pipelines


def _equation(curve: CurveGerm):
    f = curve.rational_equation
    if not f.field.is_rational:
        raise UnsupportedInput("vector field computations need an equation over Q")
    return f


def _degree_bound(f, bound: int | None) -> int | None:
    if bound is not None and bound < f.degree():
        raise InputError(f"--degree-bound {bound} is below the degree {f.degree()} of the equation")
    return bound


def _multiplicities(curve: CurveGerm):
    return [b.multiplicity for b in curve.branches] if curve.has_branches else None


def run_semiring(curve, truncation, bound):
    return compute_semiring(curve, truncation).to_json()


def run_normalize(curve, truncation, bound):
    return moduli_point(curve, truncation).to_json()


def run_saito(curve, truncation, bound):
    f = _equation(curve)
    basis = adapted_basis(f, _degree_bound(f, bound))
    report = basis.to_json()
    report["nuS"] = int(f.order())
    report["saito_number"] = basis.nu1
    report["radial"] = radial_tests(f, basis, bound)
    if basis.X1.valuation() >= 1 and report["dicritical"][0]:
        report["radial_factor"] = repr(radial_factor(basis.X1))
    return report


def _classification(curve, bound):
    f = _equation(curve)
    return classify_curve(f, _degree_bound(f, bound), _multiplicities(curve))


def run_classify(curve, truncation, bound):
    result = _classification(curve, bound)
    report = result.to_json()
    report["basis"] = result.basis.to_json()
    if not result.supported:
        report["reason"] = result.dimension_status
        raise Outcome(report, EXIT_UNSUPPORTED)
    return report


def run_dimension(curve, truncation, bound):
    result = _classification(curve, bound)
    keys = ("nuS", "nu1", "nu2", "type", "nu0", "dimension", "dimension_status", "perturbation")
    full = result.to_json()
    report = {k: full[k] for k in keys if k in full}
    if result.dimension is None:
        report["reason"] = result.dimension_status
        raise Outcome(report, EXIT_UNSUPPORTED)
    return report


def _parse_jets(text: str):
    try:
        jets = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"--phi must be JSON: {exc}") from exc
    if not isinstance(jets, list) or not all(isinstance(j, list) for j in jets):
        raise InputError("--phi must be a list of coefficient lists, one per branch")
    return jets


def run_action(curve, truncation, bound, phi=None, point=None):
    context = moduli_point(curve, truncation)
    field = context.field
    coeffs = context.coefficients()
    if point is not None:
        coeffs = [parse_scalar(c.strip(), field) for c in point.split(",")]
    jets = _parse_jets(phi) if phi else [["0", "1"] for _ in context.sigma]
    try:
        moved = act(jets, coeffs, context)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rep, free = orbit_reduce(moved, context)
    return {
        "free_positions": context.to_json()["free_positions"],
        "coefficients": [field.dump(c) for c in coeffs],
        "phi": jets,
        "image": [field.dump(c) for c in moved],
        "orbit_representative": [field.dump(c) for c in rep],
        "unfixed_coordinates": free,
    }


COMMANDS = {
    "semiring": run_semiring,
    "normalize": run_normalize,
    "saito": run_saito,
    "classify": run_classify,
    "dimension": run_dimension,
}


def run(command: str, curve: CurveGerm, truncation: int = 32, degree_bound: int | None = None, **extra):
    """(report, exit status) of one command on one curve."""
    try:
        if truncation < MIN_TRUNCATION:
            raise InputError(f"--truncation must be at least {MIN_TRUNCATION}")
        if command == "action":
            return run_action(curve, truncation, degree_bound, **extra), EXIT_OK
        return COMMANDS[command](curve, truncation, degree_bound), EXIT_OK
    except Outcome as out:
        return out.report, out.status
    except (UnsupportedInput, SaitoError) as exc:
        return {"status": "unsupported", "reason": str(exc)}, EXIT_UNSUPPORTED
    except InputError as exc:
        return {"status": "error", "reason": str(exc)}, EXIT_INPUT


# ---------------------------------------------------------------------------
# click wiring


def _common(fn):
    options = [
        click.option("--input", "input_path", type=click.Path(dir_okay=False), help="curve document (JSON)"),
        click.option("--catalog", "catalog_name", help="use a bundled catalog curve instead of --input"),
        click.option("--truncation", type=int, default=32, show_default=True, help="series truncation N"),
        click.option("--degree-bound", type=int, default=None, help="degree bound D for tangent fields"),
        click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json", show_default=True),
        click.option("--marking", default=None, help="branch permutation, 1-based, e.g. 2,1,3"),
    ]
    for opt in reversed(options):
        fn = opt(fn)
    return fn


def _finish(report: dict, status: int, fmt: str):
    click.echo(emit(report, fmt))
    sys.exit(status)


def _load_or_exit(input_path, catalog_name, marking, fmt):
    try:
        return load_document(input_path, catalog_name, marking)
    except UnsupportedInput as exc:
        _finish({"status": "unsupported", "reason": str(exc)}, EXIT_UNSUPPORTED, fmt)
    except InputError as exc:
        _finish({"status": "error", "reason": str(exc)}, EXIT_INPUT, fmt)


@click.group()
def main():
    """Analytic invariants of plane curve germs."""


def _simple(name: str, help_text: str):
    @_common
    def command(input_path, catalog_name, truncation, degree_bound, fmt, marking):
        curve = _load_or_exit(input_path, catalog_name, marking, fmt)
        _finish(*run(name, curve, truncation, degree_bound), fmt)

    command.__doc__ = help_text
    main.command(name)(command)


_simple("semiring", "Conductor, absolute points and generators of the value semiring.")
_simple("normalize", "Normalized generators: the point of the curve in its moduli space.")
_simple("saito", "Adapted Saito basis of the tangent vector fields.")
_simple("classify", "Adapted type, free points and moduli dimension.")
_simple("dimension", "Generic dimension of the moduli space of the curve's class.")


@main.command("action")
@_common
@click.option("--phi", default=None, help='JSON jets per branch, e.g. [["0","1","2"],["0","1"]]')
@click.option("--point", default=None, help="comma separated coefficients to act on (default: the curve's own)")
def action_cmd(input_path, catalog_name, truncation, degree_bound, fmt, marking, phi, point):
    """Act on the normal form coefficients by reparametrization jets."""
    curve = _load_or_exit(input_path, catalog_name, marking, fmt)
    _finish(*run("action", curve, truncation, degree_bound, phi=phi, point=point), fmt)


@main.command("equiv")
@_common
@click.option("--other", "other_path", type=click.Path(dir_okay=False), help="second curve document")
@click.option("--other-catalog", default=None, help="second curve from the catalog")
def equiv_cmd(input_path, catalog_name, truncation, degree_bound, fmt, marking, other_path, other_catalog):
    """Probe marked analytic equivalence of two curves."""
    a = _load_or_exit(input_path, catalog_name, marking, fmt)
    b = _load_or_exit(other_path, other_catalog, None, fmt)
    try:
        report = marked_equivalent(a, b, truncation)
    except UnsupportedInput as exc:
        _finish({"status": "unsupported", "reason": str(exc)}, EXIT_UNSUPPORTED, fmt)
    except InputError as exc:
        _finish({"status": "error", "reason": str(exc)}, EXIT_INPUT, fmt)
    _finish(report, EXIT_OK, fmt)


def check_entry(name: str, degree_bound: int | None = None) -> dict:
    """Classify a catalog curve and compare with its recorded expectations."""
    want = expected(name)
    curve = catalog_curve(name)
    report, status = run("classify", curve, 32, degree_bound)
    got = dict(report)
    got["perturbed"] = "perturbation" in report
    keys = [k for k in ("nuS", "nu1", "nu2", "type", "dimension", "nu0", "free_points", "perturbed", "input_saito")
            if k in want]
    mismatches = {k: {"expected": want[k], "got": got.get(k)} for k in keys if got.get(k) != want[k]}
    return {"name": name, "ok": not mismatches, "checked": keys, "mismatches": mismatches, "status": status}


@main.command("catalog")
@click.option("--catalog", "catalog_name", default=None, help="check a single entry")
@click.option("--check", is_flag=True, help="classify entries and compare with expected values")
@click.option("--parallel", is_flag=True, help="check entries in separate processes")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json", show_default=True)
def catalog_cmd(catalog_name, check, parallel, fmt):
    """List the bundled curves, or check them against their expected invariants."""
    try:
        names = [catalog_entry(catalog_name)["name"]] if catalog_name else catalog_names()
    except InputError as exc:
        _finish({"status": "error", "reason": str(exc)}, EXIT_INPUT, fmt)
    if not check:
        _finish({n: catalog_entry(n)["description"] for n in names}, EXIT_OK, fmt)
    if parallel:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor() as pool:
            results = list(pool.map(check_entry, names))
    else:
        results = [check_entry(n) for n in names]
    report = {r["name"]: ("ok" if r["ok"] else r["mismatches"]) for r in results}
    _finish(report, EXIT_OK if all(r["ok"] for r in results) else EXIT_INPUT, fmt)


if __name__ == "__main__":
    main()
