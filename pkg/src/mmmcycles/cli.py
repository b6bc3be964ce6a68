"""Command line front end.

Examples::

    mmmcycles compute kappa --k 1
    mmmcycles verify associahedron --n 5 --json
    mmmcycles graph info --input figure_eight.json

Exit status is 0 when every check passes, 1 on a failed check or an
invalid graph document, and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import math
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from . import associahedron as assoc
from . import quadrature as quad
from . import witten
from .cyclic import c_z, coboundary, random_simplex, s_k
from .fatgraph import (FatGraph, GraphFormatError, c_fat, load_graph,
                       random_collapse_chain, random_trivalent, FatSimplex)

DEFAULT_SEED = 1


def render(value: Any) -> Any:
    """Exact values as reduced ``"p/q"`` strings, everything else unchanged."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return render(Fraction(value))
    return value


@dataclass
class CheckLine:
    name: str
    expected: Any
    actual: Any
    passed: bool
    tolerance: str | None = None

    @classmethod
    def exact(cls, name: str, actual, expected) -> "CheckLine":
        return cls(name, Fraction(expected), Fraction(actual), Fraction(actual) == Fraction(expected))

    def as_dict(self) -> dict:
        d = {"name": self.name, "expected": render(self.expected),
             "actual": render(self.actual), "passed": self.passed}
        if self.tolerance is not None:
            d["tolerance"] = self.tolerance
        return d


@dataclass
class RunReport:
    """Outcome of one command; ``passed`` is true exactly when every check passed."""

    command: list[str]
    title: str
    checks: list[CheckLine] = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    seed: int | None = None
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "title": self.title,
            "checks": [c.as_dict() for c in self.checks],
            "counts": self.counts,
            "passed": self.passed,
            "version": __version__,
            "seed": self.seed,
            "wall_time": round(self.wall_time, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [self.title]
        for c in self.checks:
            tag = "PASS" if c.passed else "FAIL"
            tol = f" (tol {c.tolerance})" if c.tolerance else ""
            lines.append(f"  {tag}  {c.name}: {c.actual}  expected {c.expected}{tol}")
        for key, val in self.counts.items():
            lines.append(f"  {key}: {val}")
        if self.seed is not None:
            lines.append(f"  seed: {self.seed}")
        lines.append(f"  {'all checks passed' if self.passed else 'FAILED'} in {self.wall_time:.2f}s")
        return "\n".join(lines)


def from_witten(report: witten.Report) -> list[CheckLine]:
    return [CheckLine.exact(c.name, c.actual, c.expected) for c in report.checks]


# -- verify -------------------------------------------------------------------------

def verify_cyclic(args) -> RunReport:
    k, rng = args.k, random.Random(args.seed)
    nonzero = 0
    nontrivial = 0
    for _ in range(args.trials):
        s = random_simplex(rng, 2 * k + 1)
        nonzero += coboundary(lambda f: c_z(f, k), s) != 0
        nontrivial += any(c_z(s.face(i), k) for i in range(2 * k + 2))
    mismatch = 0
    for _ in range(args.trials):
        s = random_simplex(rng, 2 * k, linear_prefix=2 * k + 1)
        mismatch += coboundary(lambda f: s_k(f, k), s) != c_z(s.Jbar(), k)
    return RunReport([], f"cyclic set cocycle, k={k}", [
        CheckLine.exact("simplices with nonzero coboundary of c_z", nonzero, 0),
        CheckLine.exact("linear simplices with coboundary of s_k != c_z(J)", mismatch, 0),
    ], {"trials": args.trials, "simplices_with_nonzero_faces": nontrivial}, seed=args.seed)


def verify_fat(args) -> RunReport:
    k, rng = args.k, random.Random(args.seed)
    checks = []
    counts = {"trials": args.trials}
    if k == 0:
        bad = 0
        for _ in range(args.trials):
            g = random_trivalent(rng)
            chain = random_collapse_chain(rng, 1)
            bad += c_fat(FatSimplex(graph=g), 0) != -2 * g.euler_characteristic()
            bad += coboundary(lambda f: c_fat(f, 0), chain) != 0
        checks.append(CheckLine.exact("failures of c_fat^0 = -2 chi and its cocycle law", bad, 0))
    else:
        nonzero = 0
        nontrivial = 0
        for _ in range(args.trials):
            chain = random_collapse_chain(rng, 2 * k + 1)
            nonzero += coboundary(lambda f: c_fat(f, k), chain) != 0
            nontrivial += any(c_fat(chain.face(i), k) for i in range(2 * k + 2))
        checks.append(CheckLine.exact("chains with nonzero coboundary of c_fat", nonzero, 0))
        counts["chains_with_nonzero_faces"] = nontrivial
    return RunReport([], f"fat graph cocycle, k={k}", checks, counts, seed=args.seed)


def dissections(n: int) -> int:
    """Number of non-crossing diagonal sets of an n-gon."""
    return sum(math.comb(n - 3, j) * math.comb(n + j - 1, j) // (j + 1) for j in range(n - 2))


def verify_associahedron(args) -> RunReport:
    n = args.n
    elements = len(assoc.enumerate_chord_sets(n))
    checks = [CheckLine.exact("elements", elements, dissections(n))]
    counts = {"elements": elements}
    if n <= assoc.MAX_CONSISTENCY:
        res = assoc.boundary_consistency(n)
        counts.update(chains=res.chains, interior_faces=res.interior_faces,
                      boundary_faces=res.boundary_faces)
        checks.append(CheckLine.exact("maximal chains", res.chains,
                                      assoc.catalan(n - 2) * math.factorial(n - 3)))
        checks.append(CheckLine("boundary consistency", True, res.ok, res.ok))
    return RunReport([], f"associahedron, n={n}", checks, counts)


# -- compute ------------------------------------------------------------------------

def compute(args) -> RunReport:
    k = args.k
    what = args.what
    if what == "bk":
        rep = witten.eval_bk(k, workers=args.threads)
        checks = from_witten(rep)
        checks.append(CheckLine.exact("chains", rep.counts["chains"], math.factorial(2 * k + 3) // 12))
        return RunReport([], rep.name, checks, rep.counts)
    if what == "kontsevich":
        w = args.weights
        c_basis, k_basis = witten.kontsevich_coeff(w)
        total = sum(m for _, m in w.parts)
        checks = [
            CheckLine("kappa basis coefficient", k_basis, k_basis, True),
            CheckLine("c_fat basis coefficient", c_basis, c_basis, True),
            CheckLine.exact("kappa basis / c_fat basis", k_basis / c_basis, Fraction(-2) ** total),
        ]
        if len(w.parts) == 1 and w.parts[0][1] == 1 and w.parts[0][0] <= 3:
            kk = w.parts[0][0]
            checks.append(CheckLine.exact("reciprocal = kappa constant", 1 / k_basis,
                                          witten.kappa_closed_form(kk)))
        return RunReport([], f"Kontsevich cycle {w}", checks, {"degree": w.degree})
    fn = {"stats": witten.stat_X, "halfdisk": witten.half_disk, "collar": witten.collar}.get(what)
    rep = fn(k) if fn else witten.kappa_constant(k, workers=args.threads)
    return RunReport([], rep.name, from_witten(rep), rep.counts)


# -- integrate ----------------------------------------------------------------------

def _float_check(name: str, res: quad.QuadratureResult) -> CheckLine:
    if res.method == "mc":
        return CheckLine(name, res.exact, res.estimate, res.passed,
                         f"{quad.MC_SIGMAS:g} standard errors, z={res.z_score:.3f}")
    return CheckLine(name, res.exact, res.estimate, res.passed, f"{res.tolerance:g}")


def _profiles(args, rng) -> list[quad.MassProfile]:
    if args.profile:
        return [quad.MassProfile(tuple(int(x) for x in args.profile.split(",")))]
    out = []
    for _ in range(args.trials):
        sizes = [rng.randint(1, 6)] + [rng.randint(0, 6) for _ in range(2 * args.k)]
        out.append(quad.MassProfile(tuple(sizes)))
    return out


def integrate(args) -> RunReport:
    rng = random.Random(args.seed)
    checks = []
    if args.what == "simplex":
        method = args.method or ("grid" if args.k <= 2 else "mc")
        for p in _profiles(args, rng):
            if len(p.sizes) != 2 * args.k + 1:
                raise ValueError(f"--profile needs {2 * args.k + 1} sizes for k={args.k}")
            res = quad.simplex_integral(args.k, p, method=method, samples=args.samples,
                                        seed=args.seed, workers=args.threads)
            checks.append(_float_check("sizes " + ",".join(map(str, p.sizes)), res))
        title = f"simplex integral, k={args.k}, {method}"
    elif args.what == "euler":
        for _ in range(args.trials):
            s = quad.random_cyclic_simplex(rng, 2)
            checks.append(_float_check(repr(s), quad.euler_2form(s)))
        title = "Euler 2-form against c_z^1"
    else:
        for i in range(args.trials):
            s = quad.random_cyclic_simplex(rng, 4)
            res = quad.power_form(s, samples=args.samples, seed=args.seed + i,
                                  workers=args.threads)
            checks.append(_float_check(repr(s), res))
        title = "square of the Euler form against c_z^2"
    return RunReport([], title, checks, {"trials": len(checks)}, seed=args.seed)


# -- graph --------------------------------------------------------------------------

def parse_graph_file(path: str) -> FatGraph:
    """Load and validate a fat graph document; see :func:`fatgraph.loads_graph`."""
    return load_graph(path)


def graph_info(args) -> RunReport:
    try:
        g = parse_graph_file(args.input)
    except GraphFormatError as exc:
        return RunReport([], f"graph {args.input}",
                         [CheckLine("valid fat graph", True, str(exc), False)])
    chi, genus, s, codim = g.topology()
    counts = {"vertices": len(g.vertices), "edges": len(g.edges), "euler_characteristic": chi,
              "genus": genus, "boundary_components": s, "codimension": codim}
    return RunReport([], f"graph {args.input}", [
        CheckLine("valid fat graph", True, True, True),
        CheckLine.exact("c_fat^0 = -2 chi", c_fat(FatSimplex(graph=g), 0), -2 * chi),
    ], counts)


# -- argument parsing ---------------------------------------------------------------

def _weights(text: str) -> witten.WeightSpec:
    try:
        return witten.WeightSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mmmcycles",
                                 description="Exact checks of the cyclic set and fat graph cocycles.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, seed=False):
        p.add_argument("--json", action="store_true", help="print a JSON report")
        p.add_argument("--threads", type=_positive, default=1, help="worker cap")
        if seed:
            p.add_argument("--seed", type=int, default=DEFAULT_SEED)
            p.add_argument("--trials", type=_positive, default=100)

    v = sub.add_parser("verify", help="property suites")
    v.add_argument("what", choices=["cyclic-cocycle", "fat-cocycle", "associahedron"])
    v.add_argument("--k", type=int, default=1)
    v.add_argument("--n", type=int, default=5)
    common(v, seed=True)

    c = sub.add_parser("compute", help="exact constants")
    c.add_argument("what", choices=["bk", "stats", "halfdisk", "collar", "kappa", "kontsevich"])
    c.add_argument("--k", type=int, default=1)
    c.add_argument("--weights", type=_weights, default=None, help="e.g. 1x2,2x1")
    common(c)

    i = sub.add_parser("integrate", help="numerical integrals")
    i.add_argument("what", choices=["simplex", "euler", "power"])
    i.add_argument("--k", type=int, default=1)
    i.add_argument("--samples", type=_positive, default=None)
    i.add_argument("--profile", default=None, help="level sizes a0,a1,... for 'simplex'")
    i.add_argument("--method", choices=["grid", "mc"], default=None)
    common(i, seed=True)

    g = sub.add_parser("graph", help="fat graph files")
    g.add_argument("what", choices=["info"])
    g.add_argument("--input", required=True)
    common(g)
    return ap


LIMITS = {
    ("verify", "cyclic-cocycle"): (1, 3),
    ("verify", "fat-cocycle"): (0, 2),
    ("compute", "bk"): (1, 3),
    ("compute", "stats"): (1, 4),
    ("compute", "halfdisk"): (1, 4),
    ("compute", "collar"): (1, 4),
    ("compute", "kappa"): (1, 3),
    ("integrate", "simplex"): (1, 3),
}


def check_args(ap: argparse.ArgumentParser, args) -> None:
    key = (args.command, args.what)
    if key in LIMITS:
        lo, hi = LIMITS[key]
        if not lo <= args.k <= hi:
            ap.error(f"--k must lie in [{lo}, {hi}] for {' '.join(key)}")
    if key == ("verify", "associahedron") and not 4 <= args.n <= assoc.MAX_ENUMERATE:
        ap.error(f"--n must lie in [4, {assoc.MAX_ENUMERATE}]")
    if key == ("compute", "kontsevich") and args.weights is None:
        ap.error("compute kontsevich needs --weights")
    if args.command == "integrate":
        if args.what == "power" and args.k != 2:
            ap.error("integrate power supports --k 2 only")
        if args.what == "euler" and args.k != 1:
            ap.error("integrate euler supports --k 1 only")
        if args.method == "grid" and args.k > 2:
            ap.error("the grid scheme supports --k 1 or 2")
        if args.samples is None:
            args.samples = quad.DEFAULT_SAMPLES if args.what == "power" else 10**6
    if args.command == "graph":
        try:
            open(args.input).close()
        except OSError as exc:
            ap.error(f"cannot read {args.input}: {exc.strerror}")


def run(args) -> RunReport:
    handler = {
        ("verify", "cyclic-cocycle"): verify_cyclic,
        ("verify", "fat-cocycle"): verify_fat,
        ("verify", "associahedron"): verify_associahedron,
    }.get((args.command, args.what))
    if handler is None:
        handler = {"compute": compute, "integrate": integrate, "graph": graph_info}[args.command]
    start = time.perf_counter()
    report = handler(args)
    report.wall_time = time.perf_counter() - start
    return report


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    args = ap.parse_args(argv)
    check_args(ap, args)
    try:
        report = run(args)
    except ValueError as exc:
        print(f"mmmcycles: error: {exc}", file=sys.stderr)
        return 2
    report.command = argv
    print(report.to_json() if args.json else report.to_text())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
