"""Command line front end.

Every subcommand writes one JSON report (stdout or ``--output``). Reports are
deterministic: the same input file and seed give byte-identical output unless
``--timing`` is requested.

Exit codes: 0 success, 2 invalid input, 3 verification failed, 4 search bound
exhausted.
"""

from __future__ import annotations

import argparse
import itertools
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import problem as pfile
from .certificate import (
    SearchExhausted,
    SearchOptions,
    VerificationFailed,
    certificate_search,
)
from .exact import DimensionError, Matrix, SymPoly, monomial_basis
from .fiber import phi_pairing, slot_permutation, tensor_gbs_certificate
from .graphs import DecoratedGraph, c_gamma, graph_value, trace_identity_check
from .macaulay import (
    InvalidInput,
    PolySystem,
    big_D,
    certify_basepoint_free,
    format_factorization,
    nu,
    nu_factorization,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_VERIFY = 3
EXIT_EXHAUSTED = 4

fmt = pfile.format_scalar


class Outcome(Exception):
    """Carries a finished result together with a nonzero exit code."""

    def __init__(self, code: int, results: dict):
        super().__init__(code)
        self.code = code
        self.results = results


# ---------------------------------------------------------------------------
# trace-verify


def _random_poly(rng: random.Random, d: int, r: int) -> SymPoly:
    terms = {a: Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for a in monomial_basis(d, r)}
    p = SymPoly(d, r, terms)
    return p if p else SymPoly.power([1] * d, r)


def _orderings(rng: random.Random, m: int, count: int) -> list:
    alternating = " ".join(f"m{i} i{i}" for i in range(m))
    labels = [f"m{i}" for i in range(m)] + [f"i{i}" for i in range(m)]
    total = 1
    for k in range(1, 2 * m + 1):
        total *= k
    if total <= 5040:
        pool = sorted({" ".join(p) for p in itertools.permutations(labels)} - {alternating})
        rng.shuffle(pool)
    else:
        pool = []
        while len(pool) < 4 * count:
            perm = labels[:]
            rng.shuffle(perm)
            pool.append(" ".join(perm))
    out = [alternating]
    for w in pool:
        if len(out) >= count:
            break
        if w not in out:
            out.append(w)
    return out


def _sweep_tasks(sweep: pfile.Sweep, seed: int) -> list:
    tasks = []
    for d in sweep.d:
        for r in sweep.r:
            for m in sweep.m:
                for k in range(sweep.samples):
                    rng = random.Random(f"{seed}:{d}:{r}:{m}:{k}")
                    vdecs = [_random_poly(rng, d, r) for _ in range(m)]
                    wdecs = [_random_poly(rng, d, r) for _ in range(m)]
                    for word in _orderings(rng, m, sweep.orderings):
                        for N in sweep.N:
                            tasks.append((vdecs, wdecs, word, None, N))
    return tasks


def _coefficient(offset: Fraction):
    if not offset:
        return c_gamma

    def corrupted(M, rho, d, N, m, r):
        return c_gamma(M, rho, d, N, m, r) + offset

    return corrupted


def _run_trace_task(task, offset=Fraction(0)) -> dict:
    vdecs, wdecs, word, pairing, N = task
    rep = trace_identity_check(vdecs, wdecs, word, pairing, N, coefficient=_coefficient(offset))
    return {
        "d": vdecs[0].dim,
        "r": vdecs[0].degree,
        "m": len(vdecs),
        "N": N,
        "word": word,
        "vdecs": [pfile.format_poly(p) for p in vdecs],
        "wdecs": [pfile.format_poly(p) for p in wdecs],
        "lhs": fmt(rep.lhs),
        "rhs": fmt(rep.rhs),
        "match": rep.match,
        "graphs": [
            {
                "mult": [list(row) for row in t.mult],
                "rho": t.rho,
                "s_gamma": t.s_gamma,
                "c_gamma": fmt(t.c_gamma),
                "value": fmt(t.value),
            }
            for t in rep.per_graph
        ],
    }


def _star_trace(args):
    return _run_trace_task(*args)


def cmd_trace_verify(pf: pfile.ProblemFile, args) -> dict:
    tasks = []
    if pf.trace_instances:
        for inst in pf.trace_instances:
            vdecs = inst.vdecs if inst.vdecs is not None else pf.A
            wdecs = inst.wdecs if inst.wdecs is not None else pf.B
            if not vdecs or not wdecs:
                raise InvalidInput("trace instance needs decorations (vdecs/wdecs or A/B)")
            if len(vdecs) != len(wdecs):
                raise InvalidInput("trace instance needs as many V decorations as W decorations")
            tasks.append((vdecs, wdecs, inst.word, pf.pairing, inst.N))
    if pf.sweep is not None:
        tasks.extend(_sweep_tasks(pf.sweep, args.seed))
    offset = pf.options.get("c_gamma_offset", Fraction(0))
    jobs = max(1, args.jobs or 1)
    try:
        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_star_trace, [(t, offset) for t in tasks], chunksize=8))
        else:
            results = [_run_trace_task(t, offset) for t in tasks]
    except (ValueError, DimensionError) as exc:
        raise InvalidInput(str(exc)) from None
    mismatches = sum(not r["match"] for r in results)
    out = {"instances": results, "count": len(results), "mismatches": mismatches}
    if mismatches:
        raise Outcome(EXIT_VERIFY, out)
    return out


# ---------------------------------------------------------------------------
# nu


def cmd_nu(r: int, d: int) -> dict:
    if r < 1 or d < 1:
        raise InvalidInput("r and d must be positive")
    factors = nu_factorization(r, d)
    return {
        "r": r,
        "d": d,
        "D": big_D(r * d, d),
        "nu": str(nu(r, d)),
        "factorization": format_factorization(factors),
        "prime_powers": [[p, k] for p, k in factors],
    }


# ---------------------------------------------------------------------------
# macaulay


def cmd_macaulay(pf: pfile.ProblemFile, args) -> dict:
    systems = []
    if pf.A is not None:
        systems.append(("A", pf.d, pf.A))
    if pf.B is not None:
        systems.append(("B", pf.e, pf.B))
    if not systems:
        raise InvalidInput("macaulay needs A and/or B")
    out = {}
    ok = True
    for name, dim, gens in systems:
        if not gens:
            raise InvalidInput(f"{name} is empty")
        system = PolySystem(dim, pf.r, gens)
        n_max = args.n_max if args.n_max is not None else pf.options.get("N_max", pf.r * dim)
        rep = certify_basepoint_free(system, n_max)
        ok = ok and rep.certified
        out[name] = {
            "dim": dim,
            "r": pf.r,
            "N_max": n_max,
            "macaulay_bound": pf.r * dim,
            "certified": rep.certified,
            "first_surjective_N": rep.first_surjective_N,
            "ranks_by_N": [{"N": N, "rank": k, "target": t} for N, k, t in rep.ranks_by_N],
        }
    if not ok:
        raise Outcome(EXIT_VERIFY, out)
    return out


# ---------------------------------------------------------------------------
# certificate and gbs


def _search_options(pf: pfile.ProblemFile, args) -> SearchOptions:
    m_max = args.m_max if args.m_max is not None else pf.options.get("m_max")
    return SearchOptions(seed=args.seed, m_max=m_max)


def _certificate_dict(cert, r: int) -> dict:
    d, e = cert.pairing.shape
    reval = pfile.ProblemFile(
        d=d,
        e=e,
        r=r,
        pairing=cert.pairing,
        graph=pfile.GraphSpec(cert.mult, cert.vdecs, cert.wdecs, cert.value),
    )
    return {
        "m": cert.m,
        "r": cert.r,
        "mult": [list(row) for row in cert.mult],
        "value": fmt(cert.value),
        "coeffsA": [[fmt(x) for x in c] for c in cert.coeffsA],
        "coeffsB": [[fmt(x) for x in c] for c in cert.coeffsB],
        "vdecs": [pfile.format_poly(p) for p in cert.vdecs],
        "wdecs": [pfile.format_poly(p) for p in cert.wdecs],
        "working_degree_N": cert.N,
        "reduced_dim": cert.reduced_dim,
        "word": cert.word,
        "word_trace": fmt(cert.trace),
        "slot_permutation": slot_permutation(cert.mult, r),
        "revalidation_problem": pfile.problem_to_dict(reval),
    }


def cmd_certificate(pf: pfile.ProblemFile, args) -> dict:
    pf.require("d", "e", "r", "pairing", "A", "B")
    cert = certificate_search(pf.A, pf.B, pf.pairing, _search_options(pf, args))
    return {"certificate": _certificate_dict(cert, pf.r)}


def cmd_gbs(pf: pfile.ProblemFile, args) -> dict:
    pf.require("fiber_model", "pairing")
    model = pf.fiber_model
    points = [pf.options["point"]] if "point" in pf.options else list(model.points)
    out = []
    for x in points:
        g = tensor_gbs_certificate(model, x, pf.pairing, _search_options(pf, args))
        out.append(
            {
                "point": x,
                "n": g.n,
                "degree_nr": g.n * model.r,
                "phi_pairing": fmt(g.phi_value),
                "slot_permutation": g.sigma,
                "sections_E_used": g.sections_E,
                "sections_F_used": g.sections_F,
                "certificate": _certificate_dict(g.certificate, model.r),
            }
        )
    return {"points": out}


# ---------------------------------------------------------------------------
# graph-eval


def cmd_graph_eval(pf: pfile.ProblemFile, args) -> dict:
    pf.require("graph")
    g = pf.graph
    try:
        graph = DecoratedGraph(g.mult, g.vdecs, g.wdecs, pf.pairing)
    except (ValueError, DimensionError) as exc:
        raise InvalidInput(str(exc)) from None
    value = graph_value(graph)
    pairing = pf.pairing if pf.pairing is not None else Matrix.identity(graph.vdecs[0].dim)
    tensor_value = phi_pairing(graph.mult, graph.vdecs, graph.wdecs, pairing)
    out = {
        "mult": [list(row) for row in graph.mult],
        "value": fmt(value),
        "tensor_contraction_value": fmt(tensor_value),
        "routes_agree": value == tensor_value,
    }
    ok = value == tensor_value
    if g.expected_value is not None:
        out["expected_value"] = fmt(g.expected_value)
        out["matches_expected"] = value == g.expected_value
        ok = ok and value == g.expected_value
    if not ok:
        raise Outcome(EXIT_VERIFY, out)
    return out


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (overrides options.seed)")
    common.add_argument("--m-max", dest="m_max", type=int, default=None, help="longest operator word to try")
    common.add_argument("--n-max", dest="n_max", type=int, default=None, help="highest degree to scan")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("--output", default=None, help="write the report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="add wall-clock time (breaks byte determinism)")

    p = argparse.ArgumentParser(prog="symcert", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("trace-verify", "check tr(P_N) against the graph expansion"),
        ("macaulay", "certify that A and/or B have no common zero besides 0"),
        ("certificate", "search for a graph with nonzero value"),
        ("gbs", "certify generation of O(nr) on P(E x F) at the points of a fibre model"),
        ("graph-eval", "evaluate a decorated graph by two independent routes"),
    ):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("--input", required=True, help="problem file (JSON)")
    sp = sub.add_parser("nu", parents=[common], help="the bound nu(r, d) = lcm(1..D(rd))")
    sp.add_argument("r", type=int)
    sp.add_argument("d", type=int)
    return p


HANDLERS = {
    "trace-verify": cmd_trace_verify,
    "macaulay": cmd_macaulay,
    "certificate": cmd_certificate,
    "gbs": cmd_gbs,
    "graph-eval": cmd_graph_eval,
}


def run(argv=None) -> tuple:
    """Execute a command; return ``(exit_code, report_text)``."""
    args = build_parser().parse_args(argv)
    report: dict = {"schema_version": pfile.SCHEMA_VERSION, "subcommand": args.command}
    start = time.perf_counter()
    code = EXIT_OK
    try:
        if args.command == "nu":
            report["input"] = {"r": args.r, "d": args.d}
            results = cmd_nu(args.r, args.d)
        else:
            pf = pfile.load(args.input)
            if args.seed is None:
                args.seed = pf.seed
            report["input"] = pfile.problem_to_dict(pf)
            report["seed"] = args.seed
            results = HANDLERS[args.command](pf, args)
        report["status"] = "ok"
        report["results"] = results
    except Outcome as out:
        code = out.code
        report["status"] = "verification_failed" if code == EXIT_VERIFY else "failed"
        report["results"] = out.results
    except (InvalidInput, DimensionError) as exc:
        code = EXIT_INVALID
        report["status"] = "invalid_input"
        report["error"] = str(exc)
    except VerificationFailed as exc:
        code = EXIT_VERIFY
        report["status"] = "verification_failed"
        report["error"] = str(exc)
    except SearchExhausted as exc:
        code = EXIT_EXHAUSTED
        report["status"] = "search_exhausted"
        report["error"] = str(exc)
        report["frontier"] = exc.frontier
    report["exit_code"] = code
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
    text = pfile.canonical_json(report)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if code == EXIT_INVALID:
        print(f"symcert: error: {report['error']}", file=sys.stderr)
    return code, text


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
