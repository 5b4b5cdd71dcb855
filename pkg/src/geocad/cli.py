"""Command-line front end.

Problem files hold one ``key: value`` entry per line, each value in YAML
flow syntax::

    vars: p q x
    params: 2
    set: { eqs: ["x^3 + p*x + q"], ineq: "1" }
    formula: "A p A q E x (x^3 + p*x + q = 0)"

Other keys: ``params`` (leading variables treated as parameters, default
all but the last), ``constraint`` (a set used by ``cad --with-ecs``),
``extra`` (polynomials splitting the constrained set), ``polys`` (for
``partition1d``) and ``run`` (command line used by ``corpus``).  Output is
a versioned JSON document on stdout.
"""

from __future__ import annotations

import json
import pathlib
import sys
from dataclasses import dataclass, field

import click
import yaml

from . import decompose
from .cadlift import cad_with_constraints, classify_real, decide, geometric_cad, parse_formula
from .cadproject import HEURISTICS, BasicConstructibleSet
from .exactpoly import ParseError, Polynomial, PolynomialError, Ring
from .fiberclass import InvariantViolation, fiber_classification
from .groebner import Ideal
from .realalg import RefinementBudgetExceeded, partition1d, refinement_budget

SCHEMA = "geocad.v1"
EXIT_PARSE, EXIT_BUDGET, EXIT_INVARIANT = 2, 3, 4


@dataclass
class ProblemFile:
    variables: list[str]
    sets: list[dict] = field(default_factory=list)
    formula: str | None = None
    constraint: dict | None = None
    extra: list[str] = field(default_factory=list)
    polys: list[str] = field(default_factory=list)
    params: int | None = None
    run: str | None = None

    @property
    def ring(self) -> Ring:
        return Ring(tuple(self.variables))

    def parse_poly(self, text) -> Polynomial:
        return self.ring.parse(str(text))

    def basic_sets(self) -> list[BasicConstructibleSet]:
        return [self._basic(s) for s in self.sets]

    def _basic(self, entry: dict) -> BasicConstructibleSet:
        eqs = [self.parse_poly(e) for e in entry.get("eqs", [])]
        h = self.parse_poly(entry.get("ineq", "1"))
        return BasicConstructibleSet.make(self.ring, eqs, h)

    @property
    def param_count(self) -> int:
        return self.params if self.params is not None else len(self.variables) - 1


def load_problem(text: str) -> ProblemFile:
    """Parse a problem file; malformed input raises ParseError."""
    entries: dict = {"sets": [], "extra": [], "polys": []}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            item = yaml.safe_load(line)
        except yaml.YAMLError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        if not isinstance(item, dict) or len(item) != 1:
            raise ParseError(f"line {lineno}: expected a single 'key: value' entry")
        (key, value), = item.items()
        if key == "vars":
            entries["vars"] = str(value).split() if not isinstance(value, list) else [str(v) for v in value]
        elif key == "set":
            if not isinstance(value, dict):
                raise ParseError(f"line {lineno}: a set needs eqs and ineq")
            entries["sets"].append(value)
        elif key in ("formula", "constraint", "params", "run"):
            entries[key] = value
        elif key in ("extra", "polys"):
            entries[key].extend(value if isinstance(value, list) else [value])
        else:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
    if "vars" not in entries:
        raise ParseError("missing 'vars' line")
    prob = ProblemFile(entries["vars"], entries["sets"], entries.get("formula"), entries.get("constraint"),
                       [str(e) for e in entries["extra"]], [str(p) for p in entries["polys"]], entries.get("params"),
                       entries.get("run"))
    # every polynomial must parse in the declared variables
    for s in prob.sets:
        prob._basic(s)
    if prob.constraint is not None:
        prob._basic(prob.constraint)
    for t in prob.extra:
        prob.parse_poly(t)
    for t in prob.polys:
        prob.parse_poly(t)
    if prob.formula is not None:
        parse_formula(str(prob.formula), prob.variables)
    return prob


def _document(command: str, prob: ProblemFile, result, warnings: list[str]) -> dict:
    return {"schema": SCHEMA, "command": command, "vars": prob.variables, "result": result, "warnings": warnings}


def _first_system(prob: ProblemFile) -> tuple[Ideal, Polynomial]:
    if not prob.sets:
        raise ParseError("the problem declares no set")
    S = prob.basic_sets()[0]
    return S.ideal, S.h


def run_classify(prob: ProblemFile, opts: dict) -> tuple[dict, list[str]]:
    I, h = _first_system(prob)
    regions = fiber_classification(I, Ideal.zero(I.ring), h, prob.param_count)
    warnings = [f"region {k} rests on an uncertified prime decomposition" for k, r in enumerate(regions) if not r.certified]
    return {"regions": [r.to_dict() for r in regions]}, warnings


def _tree_warnings(tree) -> list[str]:
    return [] if tree.certified else ["projection used an uncertified prime decomposition"]


def run_cad(prob: ProblemFile, opts: dict) -> tuple[dict, list[str], object]:
    flags = opts["heuristics"]
    if opts["with_ecs"]:
        if prob.constraint is None:
            raise ParseError("--with-ecs needs a 'constraint' line")
        C = prob._basic(prob.constraint)
        tree = cad_with_constraints(C.ideal, C.h, [prob.parse_poly(e) for e in prob.extra], flags)
    else:
        tree = geometric_cad(prob.basic_sets(), "full" if opts["full"] else "relevant_only", flags)
    return tree.to_dict(), _tree_warnings(tree), tree


def run_decide(prob: ProblemFile, opts: dict) -> tuple[dict, list[str]]:
    if not prob.formula:
        raise ParseError("the problem has no 'formula' line")
    phi = parse_formula(prob.formula, prob.variables)
    return {"value": decide(phi, opts["heuristics"])}, []


def run_classify_real(prob: ProblemFile, opts: dict) -> tuple[dict, list[str], object]:
    I, h = _first_system(prob)
    mode = "full" if opts["full"] else "relevant_only"
    regions, tree = classify_real(I, h, prob.param_count, mode, opts["heuristics"])
    return {"regions": [r.to_dict() for r in regions]}, _tree_warnings(tree), tree


def run_partition1d(prob: ProblemFile, opts: dict) -> tuple[dict, list[str]]:
    if len(prob.variables) != 1:
        raise ParseError("partition1d needs exactly one variable")
    polys = [prob.parse_poly(t) for t in prob.polys]
    for S in prob.basic_sets():
        polys.extend(S.defining_polynomials())
    cells = partition1d(p for p in polys if not p.is_constant())
    return {"cells": [c.to_dict() for c in cells]}, []


def _parse_heuristics(value: str | None) -> frozenset:
    if value is None:
        return HEURISTICS
    names = frozenset(v.strip() for v in value.split(",") if v.strip())
    unknown = names - HEURISTICS
    if unknown:
        raise click.BadParameter(f"unknown heuristics: {', '.join(sorted(unknown))}")
    return names


def render(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def run(command: str, prob: ProblemFile, opts: dict) -> dict:
    """Run one command on a parsed problem and return the JSON document.

    Library errors propagate; ``_execute`` maps them to exit codes.
    """
    options = dict(DEFAULTS, **opts)
    decompose.DEFAULT_SEED = options["seed"]
    with refinement_budget(options["max_refine"]):
        out = RUNNERS[command](prob, options)
    if options["svg"] and len(out) > 2:
        from .plotting import emit_svg

        emit_svg(out[2], path=options["svg"])
    return _document(command, prob, out[0], out[1])


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _execute(command: str, path: str, opts: dict) -> None:
    try:
        with open(path, encoding="utf-8") as fh:
            prob = load_problem(fh.read())
        doc = run(command, prob, opts)
    except (PolynomialError, OSError) as exc:
        _fail(str(exc), EXIT_PARSE)
    except RefinementBudgetExceeded as exc:
        _fail(str(exc), EXIT_BUDGET)
    except InvariantViolation as exc:
        _fail(f"internal invariant violated: {exc}", EXIT_INVARIANT)
    click.echo(render(doc), nl=False)


DEFAULTS = {"heuristics": HEURISTICS, "max_refine": 4000, "seed": 0, "svg": None, "full": False, "with_ecs": False}

RUNNERS = {
    "classify": run_classify,
    "cad": run_cad,
    "decide": run_decide,
    "classify-real": run_classify_real,
    "partition1d": run_partition1d,
}


def _common(f):
    f = click.option("--heuristics", default=None, help="Comma list of dedup,empty,squarefree,factor,discard-open.")(f)
    f = click.option("--max-refine", default=4000, show_default=True, type=int, help="Bisection cap per decision.")(f)
    f = click.option("--seed", default=0, show_default=True, type=int, help="Seed for random separating forms.")(f)
    return f


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Parametric polynomial systems: fiber classification and cylindrical decompositions."""


@main.command()
@click.argument("problem", type=click.Path())
@_common
def classify(problem, heuristics, max_refine, seed):
    """Classify parameters by the number of complex solutions."""
    _execute("classify", problem, {"heuristics": _parse_heuristics(heuristics), "max_refine": max_refine, "seed": seed})


@main.command()
@click.argument("problem", type=click.Path())
@click.option("--with-ecs", is_flag=True, help="Exploit the 'constraint' equations at every level.")
@click.option("--full", is_flag=True, help="Lift every cell instead of the relevant ones.")
@click.option("--svg", type=click.Path(), default=None, help="Write the level-2 cells as SVG.")
@_common
def cad(problem, with_ecs, full, svg, heuristics, max_refine, seed):
    """Cylindrical decomposition adapted to the declared sets."""
    _execute("cad", problem, {"with_ecs": with_ecs, "full": full, "svg": svg, "seed": seed,
                              "heuristics": _parse_heuristics(heuristics), "max_refine": max_refine})


@main.command()
@click.argument("problem", type=click.Path())
@_common
def decide_cmd(problem, heuristics, max_refine, seed):
    """Truth value of the closed 'formula'."""
    _execute("decide", problem, {"heuristics": _parse_heuristics(heuristics), "max_refine": max_refine, "seed": seed})


decide_cmd.name = "decide"


@main.command("classify-real")
@click.argument("problem", type=click.Path())
@click.option("--full", is_flag=True, help="Lift every cell instead of the relevant ones.")
@click.option("--svg", type=click.Path(), default=None, help="Write the level-2 cells as SVG.")
@_common
def classify_real_cmd(problem, full, svg, heuristics, max_refine, seed):
    """Number of real solutions over every parameter cell."""
    _execute("classify-real", problem, {"full": full, "svg": svg, "seed": seed,
                                        "heuristics": _parse_heuristics(heuristics), "max_refine": max_refine})


@main.command()
@click.argument("problem", type=click.Path())
@_common
def partition1d_cmd(problem, heuristics, max_refine, seed):
    """Sign-invariant points and intervals of the line."""
    _execute("partition1d", problem, {"heuristics": _parse_heuristics(heuristics), "max_refine": max_refine, "seed": seed})


partition1d_cmd.name = "partition1d"


def parse_run_line(line: str) -> tuple[str, dict]:
    """``"cad --with-ecs --heuristics=dedup"`` to a command name and options."""
    words = line.split()
    if not words or words[0] not in RUNNERS:
        raise ParseError(f"bad run line {line!r}")
    opts: dict = {}
    for w in words[1:]:
        name, _, value = w.partition("=")
        if name == "--with-ecs":
            opts["with_ecs"] = True
        elif name == "--full":
            opts["full"] = True
        elif name == "--heuristics":
            opts["heuristics"] = _parse_heuristics(value)
        elif name in ("--max-refine", "--seed"):
            opts[name[2:].replace("-", "_")] = int(value)
        else:
            raise ParseError(f"unsupported option {w!r} in run line")
    return words[0], opts


@main.command()
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Write <name>.json next to each problem here.")
@click.option("--check", is_flag=True, help="Compare against existing outputs instead of writing.")
def corpus(directory, out, check):
    """Run every *.gcad problem of a directory by its 'run' line."""
    src = pathlib.Path(directory)
    dst = pathlib.Path(out) if out else src
    failures = 0
    for path in sorted(src.glob("*.gcad")):
        prob = load_problem(path.read_text(encoding="utf-8"))
        if prob.run is None:
            continue
        command, opts = parse_run_line(prob.run)
        text = render(run(command, prob, opts))
        target = dst / (path.stem + ".json")
        if check:
            ok = target.exists() and target.read_text(encoding="utf-8") == text
            failures += not ok
            click.echo(f"{'ok  ' if ok else 'DIFF'} {path.name}")
        else:
            dst.mkdir(parents=True, exist_ok=True)
            target.write_text(text, encoding="utf-8")
            click.echo(f"wrote {target}")
    if failures:
        sys.exit(1)


if __name__ == "__main__":
    main()
