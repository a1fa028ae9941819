"""FastAPI service wrapping the core package.

Every computation the CLI offers is an endpoint here; the CLI is a thin
client.  Negative mathematical verdicts are ordinary 200 responses with the
verdict in the body; malformed input is 422.
"""
from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from .. import __version__
from ..builders import build_case_i, build_case_ii, build_case_iii
from ..chain import ChainElement, format_orbit, orbit
from ..errors import BuildError, InputError, MvprojError
from ..projectivity import (
    check_projective,
    equalizer,
    eta_bridge_check,
    grid_oracle,
    image_over,
)
from ..pwl1 import Pwl1
from ..pwl2 import Pwl2
from ..ranges import extremals, pair_range
from ..rationals import format_rational, parse_rational
from ..svgplot import svg_complex_layers, svg_function_2d, svg_functions_1d
from ..terms import compile_term, descent_term, is_archimedean, point_zero_term, unit_zero_term
from ..termsyntax import parse_term, print_term
from ..wire import (
    complex_to_json,
    fan_spec_from_json,
    function_from_json,
    function_to_json,
    pair_from_json,
    pair_to_json,
    point_to_json,
    pwl1_from_json,
    pwl1_to_json,
    rect_spec_from_json,
)
from . import schemas as S


def create_app() -> FastAPI:
    app = FastAPI(title="mvproj", version=__version__,
                  description="Exact computation with one- and two-variable "
                              "McNaughton functions.")

    @app.exception_handler(InputError)
    async def _input_error(_: Request, exc: InputError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(BuildError)
    async def _build_error(_: Request, exc: BuildError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(MvprojError)
    async def _internal_error(_: Request, exc: MvprojError):
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    # -- chains ---------------------------------------------------------------

    @app.post("/chain/orbit", response_model=S.OrbitResponse)
    def chain_orbit(req: S.OrbitRequest):
        path, mults, k = orbit(ChainElement(req.m, req.p))
        return S.OrbitResponse(
            orbit=[str(e) for e in path], k=k, multipliers=mults,
            cyclic=k is not None, line=format_orbit(req.m, req.p))

    # -- distinguished terms ----------------------------------------------------

    @app.post("/eta/build", response_model=S.EtaResponse)
    def eta_build(req: S.EtaRequest):
        from ..chain import multipliers
        mults = multipliers(req.m, req.p)
        g_term = descent_term(req.m, req.p)
        l_term = unit_zero_term(req.p)
        t_term = point_zero_term(req.m, req.p)
        compiled = None
        if req.compile:
            compiled = {
                "descent": pwl1_to_json(compile_term(g_term, 1)),
                "unit_zero": pwl1_to_json(compile_term(l_term, 1)),
                "point_zero": pwl1_to_json(compile_term(t_term, 1)),
            }
        return S.EtaResponse(
            multipliers=mults,
            descent_term=print_term(g_term),
            unit_zero_term=print_term(l_term),
            point_zero_term=print_term(t_term),
            compiled=compiled)

    # -- single functions -------------------------------------------------------

    @app.post("/fn/eval", response_model=S.FnEvalResponse)
    def fn_eval(req: S.FnEvalRequest):
        fn = function_from_json(req.function)
        args = [parse_rational(a) for a in req.at]
        if isinstance(fn, Pwl1):
            if len(args) != 1:
                raise InputError("a one-variable function takes one argument")
            value = fn.evaluate(args[0])
        else:
            if len(args) != 2:
                raise InputError("a two-variable function takes two arguments")
            value = fn.evaluate((args[0], args[1]))
        return S.FnEvalResponse(value=format_rational(value))

    @app.post("/fn/validate", response_model=S.ValidateResponse)
    def fn_validate(req: S.FnRequest):
        fn = function_from_json(req.function, validate=False)
        violations = fn.validate()
        return S.ValidateResponse(valid=not violations, violations=violations)

    @app.post("/fn/archimedean", response_model=S.ArchimedeanResponse)
    def fn_archimedean(req: S.FnRequest):
        fn = function_from_json(req.function)
        return S.ArchimedeanResponse(
            archimedean=is_archimedean(fn),
            min_value=format_rational(fn.min_value()),
            identically_zero=fn.is_constant(0))

    # -- pairs of one-variable functions -----------------------------------------

    @app.post("/pair/extremals", response_model=S.ExtremalsResponse)
    def pair_extremals(req: S.PairRequest):
        f, g = pwl1_from_json(req.f), pwl1_from_json(req.g)
        pts = extremals(f, g).points
        return S.ExtremalsResponse(
            extremals=[point_to_json(p) for p in pts],
            range_cells=complex_to_json(pair_range(f, g)))

    @app.post("/pair/iso", response_model=S.IsoResponse)
    def pair_iso(req: S.IsoRequest):
        from ..ranges import iso_by_range
        same = iso_by_range(pwl1_from_json(req.f), pwl1_from_json(req.g),
                            pwl1_from_json(req.f1), pwl1_from_json(req.g1))
        conclusion = ("isomorphic (by range equality)" if same
                      else "ranges differ (no conclusion from range test)")
        return S.IsoResponse(ranges_equal=same, conclusion=conclusion)

    # -- substitution pairs -------------------------------------------------------

    @app.post("/pair/equalizer", response_model=S.EqualizerResponse)
    def pair_equalizer(req: S.SubstitutionRequest):
        from ..geometry import is_connected
        pair = pair_from_json(req.pair)
        K = equalizer(pair)
        return S.EqualizerResponse(
            cells=complex_to_json(K),
            connected=is_connected(K),
            contains_origin=K.contains_point((Fraction(0), Fraction(0))))

    @app.post("/pair/check-projective", response_model=S.ProjectivityResponse)
    def pair_check(req: S.SubstitutionRequest):
        pair = pair_from_json(req.pair)
        v = check_projective(pair)
        return S.ProjectivityResponse(
            projective=v.projective,
            witness=point_to_json(v.witness) if v.witness else None,
            equalizer=complex_to_json(v.equalizer),
            connected=v.equalizer_connected,
            contains_origin=v.origin_in_equalizer)

    @app.post("/pair/oracle", response_model=S.OracleResponse)
    def pair_oracle(req: S.OracleRequest):
        pair = pair_from_json(req.pair)
        rep = grid_oracle(pair, req.denominator)
        return S.OracleResponse(
            refuted=rep.refuted, checked=rep.checked,
            counterexamples=[point_to_json(p) for p in rep.counterexamples])

    @app.post("/pair/eta-bridge", response_model=S.BridgeResponse)
    def pair_bridge(req: S.BridgeRequest):
        pair = pair_from_json(req.pair)
        rep = eta_bridge_check(pair, req.prime_bound)
        return S.BridgeResponse(
            holds=rep.holds, points_checked=len(rep.points),
            violations=[{
                "point": point_to_json(p.point),
                "targets": list(p.targets),
                "in_equalizer": p.in_equalizer,
                "join_not_archimedean": p.join_not_archimedean,
            } for p in rep.violations()])

    # -- builders -------------------------------------------------------------------

    @app.post("/build/case-i", response_model=S.BuildResponse)
    def case_i(req: S.CaseIRequest):
        spec = rect_spec_from_json(req.model_dump())
        build = build_case_i(spec)
        return S.BuildResponse(
            pair=pair_to_json(build.pair),
            projective=build.verdict.projective,
            equalizer=complex_to_json(build.verdict.equalizer))

    @app.post("/build/case-ii", response_model=S.BuildResponse)
    def case_ii(req: S.CaseIIRequest):
        build = build_case_ii(req.a, req.b, req.c, req.d)
        k = build.constants
        constants = {
            "P": point_to_json(k.P),
            "Q": point_to_json(k.Q),
            "R": point_to_json(k.R),
            "S": point_to_json(k.S) if k.S else None,
            "T": point_to_json(k.T) if k.T else None,
            "U": point_to_json(k.U) if k.U else None,
            "V": point_to_json(k.V) if k.V else None,
            "x_S": format_rational(k.x_S) if k.x_S is not None else None,
            "x_U": format_rational(k.x_U) if k.x_U is not None else None,
            "case": k.case,
            "degeneracies": list(k.degeneracies),
        }
        return S.BuildResponse(
            pair=pair_to_json(build.pair),
            projective=build.verdict.projective,
            equalizer=complex_to_json(build.verdict.equalizer),
            constants=constants)

    @app.post("/build/case-iii", response_model=S.BuildResponse)
    def case_iii(req: S.CaseIIIRequest):
        spec = fan_spec_from_json(req.model_dump())
        build = build_case_iii(spec)
        parameters = [
            {"oa_multipliers": list(p["oa_multipliers"]),
             "ob_multipliers": list(p["ob_multipliers"]),
             "l": p["l"], "m": p["m"],
             "outer_point": point_to_json(p["outer_point"])}
            for p in build.parameters]
        return S.BuildResponse(
            pair=pair_to_json(build.pair),
            projective=build.verdict.projective,
            equalizer=complex_to_json(build.verdict.equalizer),
            parameters=parameters)

    # -- terms ----------------------------------------------------------------------

    @app.post("/term/parse", response_model=S.TermParseResponse)
    def term_parse(req: S.TermParseRequest):
        term = parse_term(req.source, req.arity)
        compiled = None
        if req.compile:
            compiled = function_to_json(compile_term(term, req.arity))
        return S.TermParseResponse(printed=print_term(term), arity=req.arity,
                                   compiled=compiled)

    # -- figures ----------------------------------------------------------------------

    @app.post("/svg/functions")
    def svg_functions(req: S.FnPlotRequest):
        loaded = [(function_from_json(rec["function"], validate=False),
                   rec.get("label", "")) for rec in req.functions]
        if not loaded:
            raise InputError("nothing to plot")
        if any(isinstance(fn, Pwl2) for fn, _ in loaded):
            if len(loaded) != 1:
                raise InputError("two-variable plots take a single function")
            fn, label = loaded[0]
            return Response(content=svg_function_2d(fn, label),
                            media_type="image/svg+xml")
        return Response(content=svg_functions_1d(loaded), media_type="image/svg+xml")

    @app.post("/svg/pair")
    def svg_pair(req: S.PairPlotRequest):
        pair = pair_from_json(req.pair)
        K = equalizer(pair)
        layers = [
            (image_over(pair), "image over square"),
            (K, "equalizer"),
            (image_over(pair, K), "image over equalizer"),
        ]
        return Response(content=svg_complex_layers(layers), media_type="image/svg+xml")

    @app.post("/svg/range")
    def svg_range(req: S.PairRequest):
        f, g = pwl1_from_json(req.f), pwl1_from_json(req.g)
        layers = [(pair_range(f, g), "range of the pair")]
        return Response(content=svg_complex_layers(layers), media_type="image/svg+xml")

    @app.post("/svg/regions")
    def svg_regions(req: S.PairPlotRequest):
        pair = pair_from_json(req.pair)
        content = svg_function_2d(pair.d2, "lower generator", annotate=True)
        return Response(content=content, media_type="image/svg+xml")

    return app
