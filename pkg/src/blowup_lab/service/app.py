"""FastAPI application: one endpoint per operation, plus /health.

All request bodies are parsed and validated here (the CLI is a thin client).
Domain errors map to HTTP 400 with a machine-readable code: "parse" for
malformed input text, "precondition" for contract violations.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import ParseError, PreconditionError
from ..blowup_opt import is_balanced, optimize_nu
from ..density import Measure, WeightedGraph, induced_density, strong_hom_density
from ..formats import (
    format_fraction,
    parse_fraction,
    parse_graph,
    parse_weights,
    write_edge_list,
    write_graph6,
)
from ..graphs import Graph, automorphisms, blow_up, twin_free_factor
from ..probes import (
    ExceptionSet,
    check_biclique_bound,
    check_star_bound,
    closeness_probe,
    dichotomy,
)
from ..search import extremal_scan, report_inducibility_evidence
from ..selftest import run_selftest
from ..weighted import d1_distance, regularity
from . import schemas


def _graph_payload(g: Graph) -> dict:
    return {
        "order": g.order,
        "graph6": write_graph6(g),
        "edges": [[u, v] for u, v in g.edges()],
        "edge_list": write_edge_list(g),
    }


def _weighted(graph_text: str, weights_text: Optional[str]) -> WeightedGraph:
    g = parse_graph(graph_text)
    if weights_text is None:
        return WeightedGraph.uniform(g)
    return WeightedGraph(g, Measure(parse_weights(weights_text, g.order)))


def create_app() -> FastAPI:
    app = FastAPI(title="blowup-lab", version="0.1.0")

    @app.exception_handler(ParseError)
    async def _parse_handler(_: Request, exc: ParseError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"detail": {"code": "parse", "message": str(exc)}},
        )

    @app.exception_handler(PreconditionError)
    async def _precondition_handler(
        _: Request, exc: PreconditionError
    ) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"detail": {"code": "precondition", "message": str(exc)}},
        )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/blowup")
    def blowup_endpoint(req: schemas.BlowupRequest) -> dict:
        g = parse_graph(req.graph)
        return _graph_payload(blow_up(g, req.k))

    @app.post("/reduce")
    def reduce_endpoint(req: schemas.ReduceRequest) -> dict:
        g = parse_graph(req.graph)
        dec = twin_free_factor(g)
        return {
            "core_order": dec.core.order,
            "core_graph6": write_graph6(dec.core),
            "core_edges": [[u, v] for u, v in dec.core.edges()],
            "k": list(dec.multiplicities),
            "class_of": list(dec.class_of),
        }

    @app.post("/aut")
    def aut_endpoint(req: schemas.AutRequest) -> dict:
        g = parse_graph(req.graph)
        maps = automorphisms(g)
        return {"count": len(maps), "maps": [list(m) for m in maps]}

    @app.post("/density")
    def density_endpoint(req: schemas.DensityRequest) -> dict:
        pattern = parse_graph(req.pattern)
        if req.mode == "induced":
            if req.weights is not None:
                raise PreconditionError("weights apply to strong mode only")
            target = parse_graph(req.target)
            value = induced_density(pattern, target)
        else:
            gw = _weighted(req.target, req.weights)
            value = strong_hom_density(pattern, gw)
        return {"mode": req.mode, "value": format_fraction(value)}

    @app.post("/d1")
    def d1_endpoint(req: schemas.D1Request) -> dict:
        gw1 = _weighted(req.graph1, req.weights1)
        gw2 = _weighted(req.graph2, req.weights2)
        upper, certified = d1_distance(gw1, gw2, req.grid)
        return {"upper": format_fraction(upper), "certified": certified}

    @app.post("/regular")
    def regular_endpoint(req: schemas.RegularRequest) -> dict:
        g = parse_graph(req.graph)
        ref = parse_graph(req.reference)
        gw = _weighted(req.graph, req.weights)
        report = regularity(req.vertex, g, ref, gw.measure)
        out = {
            "vertex": report.vertex,
            "witness": report.witness,
            "discrepancy": format_fraction(report.discrepancy),
            "epsilon": None,
            "epsilon_regular": None,
        }
        if req.epsilon is not None:
            eps = parse_fraction(req.epsilon)
            out["epsilon"] = format_fraction(eps)
            out["epsilon_regular"] = report.is_regular(eps)
        return out

    @app.post("/optimize")
    def optimize_endpoint(req: schemas.OptimizeRequest) -> dict:
        core = parse_graph(req.core)
        result = optimize_nu(
            core,
            req.k,
            req.h,
            restarts=req.restarts,
            tol=req.tol,
            seed=req.seed,
            force_search=req.force_search,
        )
        return {
            "argmax": list(result.argmax),
            "value": result.value,
            "restarts": result.restarts,
            "first_order_residual": result.first_order_residual,
            "converged": result.converged,
            "balanced": result.balanced,
            "used_closed_form": result.used_closed_form,
        }

    @app.post("/balanced")
    def balanced_endpoint(req: schemas.BalancedRequest) -> dict:
        g = parse_graph(req.graph)
        dec = twin_free_factor(g)
        return {
            "balanced": is_balanced(g),
            "core_order": dec.core.order,
            "k": list(dec.multiplicities),
        }

    @app.post("/dichotomy")
    def dichotomy_endpoint(req: schemas.DichotomyRequest) -> dict:
        core = parse_graph(req.core)
        gamma = parse_fraction(req.gamma)
        if (req.psi is None) == (req.psi_seed is None):
            raise PreconditionError("provide exactly one of psi and psi_seed")
        if req.psi is not None:
            psi = req.psi
        else:
            order = blow_up(core, [req.n * kv for kv in req.k]).order
            rng = random.Random(req.psi_seed)
            psi = [rng.randrange(core.order) for _ in range(order)]
        total = req.n * sum(req.k)
        outcome = dichotomy(core, req.k, req.n, psi, gamma)
        if isinstance(outcome, ExceptionSet):
            return {
                "variant": "exception_set",
                "x": list(outcome.vertices),
                "size": len(outcome.vertices),
                "threshold": format_fraction(gamma * total),
                "psi": list(psi),
            }
        alpha = Fraction(min(req.k), sum(req.k))
        return {
            "variant": "mismatch_witness",
            "y1": list(outcome.y1),
            "y2": list(outcome.y2),
            "threshold": format_fraction(gamma * alpha / core.order * total),
            "psi": list(psi),
        }

    @app.post("/check-bound")
    def check_bound_endpoint(req: schemas.CheckBoundRequest) -> dict:
        jw = _weighted(req.graph, req.weights)
        if req.kind == "biclique":
            if req.ell is None:
                raise PreconditionError("biclique bound needs ell")
            check = check_biclique_bound(jw, req.r, req.ell, req.samples, req.seed)
        else:
            if req.s is None:
                raise PreconditionError("star bound needs s")
            check = check_star_bound(jw, req.r, req.s, req.samples, req.seed)
        return {
            "event": check.event_name,
            "empirical": check.empirical,
            "bound": check.bound,
            "samples": check.samples,
            "confidence_slack": check.confidence_slack,
            "passed": check.passed,
        }

    @app.post("/scan")
    def scan_endpoint(req: schemas.ScanRequest) -> dict:
        core = parse_graph(req.core)
        result = extremal_scan(
            core,
            req.k,
            req.h,
            req.n,
            req.mode,
            jobs=req.jobs,
            checkpoint=req.checkpoint,
        )
        return {
            "n": result.n,
            "mode": req.mode,
            "pattern_graph6": write_graph6(result.target),
            "best_value": format_fraction(result.best_value),
            "witnesses": [write_graph6(w) for w in result.witnesses],
            "witness_count": len(result.witnesses),
            "blowup_value": (
                format_fraction(result.blowup_value)
                if result.blowup_value is not None
                else None
            ),
            "sup_simplex": result.sup_simplex,
            "classes_scanned": result.classes_scanned,
        }

    @app.post("/evidence")
    def evidence_endpoint(req: schemas.EvidenceRequest) -> dict:
        core = parse_graph(req.core)
        report = report_inducibility_evidence(core, req.k, req.h, req.n_range)
        return {
            "core_graph6": write_graph6(report.core),
            "k": list(report.k),
            "h": report.h,
            "rows": [
                {
                    "n": row.n,
                    "feasible": row.feasible,
                    "best_value": (
                        format_fraction(row.best_value)
                        if row.best_value is not None
                        else None
                    ),
                    "witness_count": row.witness_count,
                    "all_blowups": row.all_blowups,
                }
                for row in report.rows
            ],
        }

    @app.post("/closeness")
    def closeness_endpoint(req: schemas.ClosenessRequest) -> dict:
        core = parse_graph(req.core)
        gw = _weighted(req.graph, req.weights)
        report = closeness_probe(core, req.k, req.h, gw)
        return {
            "pattern_density": format_fraction(report.pattern_density),
            "reference_density": format_fraction(report.reference_density),
            "threshold": format_fraction(report.threshold),
            "hypothesis_met": report.hypothesis_met,
            "d1_upper": (
                format_fraction(report.d1_upper) if report.d1_upper is not None else None
            ),
            "d1_certified": report.d1_certified,
        }

    @app.post("/selftest")
    def selftest_endpoint(_: schemas.SelftestRequest) -> dict:
        checks = run_selftest()
        return {
            "passed": all(c.passed for c in checks),
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in checks
            ],
        }

    return app


app = create_app()
