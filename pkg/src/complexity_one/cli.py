"""Command-line front end.

Subcommands parse JSON input (inline, from a file, or from stdin),
dispatch to the library, and emit deterministic JSON (or CSV for density
estimates).  Exit codes: 0 success, 1 malformed input, 2 violated
mathematical precondition; both error paths print a machine-readable
{"code", "message"} object.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

from . import coadjoint, dh, local_model, rep
from .errors import DomainError, InputError
from .jsonio import (
    check_keys,
    dumps,
    exact_int,
    model_or_rep_from_json,
    orbit_input_from_json,
    parse_rational,
    rep_from_json,
    rep_to_json,
)

DEFAULT_SEED = 0
DEFAULT_SAMPLES = 100_000
DEFAULT_TRIALS = 1_000
DEFAULT_TOL = 1e-8
MAX_SUPPORT_COORDS = 10


def _load_input(args) -> object:
    if args.json_inline is not None:
        text = args.json_inline
    elif args.input is not None:
        with open(args.input, "r", encoding="utf-8") as f:
            text = f.read()
    else:
        text = sys.stdin.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _cert_json(cert: coadjoint.BallCertificate) -> dict:
    return {
        "fixed_point": [str(x) for x in cert.fixed_point],
        "normal": list(cert.normal),
        "side": cert.side,
        "differences_span_codim_one": cert.differences_span_codim_one,
        "unique_fixed_point_on_side": cert.unique_fixed_point_on_side,
        "valid": cert.valid,
    }


def cmd_analyze_rep(args) -> str:
    r = rep_from_json(_load_input(args))
    payload = {
        "n": r.n,
        "h": r.h,
        "presentation": r.presentation,
        "effective": r.is_effective,
        "connected": r.is_connected,
        "weights": [list(row) for row in r.weights().entries],
        "onto": rep.is_onto(r),
        "proper": rep.is_proper(r),
    }
    return dumps(payload)


def cmd_defining_poly(args) -> str:
    r = rep_from_json(_load_input(args))
    dp = rep.defining_polynomial(r)
    return dumps({"xi": list(dp.exponents), "onto": dp.all_positive})


def cmd_split(args) -> str:
    r = rep_from_json(_load_input(args))
    s = rep.split(r)
    payload = {
        "permutation": list(s.permutation),
        "xi": list(s.exponents),
        "h_prime": s.h_prime,
        "h_double_prime": s.h_double_prime,
        "surjective_part": rep_to_json(s.surjective_part),
        "toric_part": None if s.toric_part is None else rep_to_json(s.toric_part),
    }
    return dumps(payload)


def cmd_classify_fiber(args) -> str:
    model = model_or_rep_from_json(_load_input(args))
    kind = local_model.classify_fiber(model)
    return dumps({"fiber": kind.value})


def cmd_exceptional_orbits(args) -> str:
    r = rep_from_json(_load_input(args))
    if r.n > MAX_SUPPORT_COORDS:
        raise DomainError(f"support enumeration capped at n <= {MAX_SUPPORT_COORDS}")
    dp = rep.defining_polynomial(r)
    supports = []
    for mask in range(2**r.n):
        support = [j for j in range(r.n) if mask & (1 << j)]
        stab = rep.stabilizer(r, support)
        supports.append(
            {
                "support": support,
                "exceptional": rep.is_exceptional_orbit(r, support),
                "stabilizer_dimension": stab.dimension,
                "stabilizer_components": list(stab.component_group),
            }
        )
    return dumps({"xi": list(dp.exponents), "supports": supports})


def cmd_verify_trivialization(args) -> str:
    model = model_or_rep_from_json(_load_input(args))
    trials = args.samples if args.samples is not None else DEFAULT_TRIALS
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    fiber = local_model.fiber_orbit_check(model, trials, seed=args.seed, tol=tol)
    targets = max(1, trials // 10)
    surj = local_model.surjectivity_check(model, targets, seed=args.seed + 1, tol=tol)
    payload = {
        "classification": local_model.classify_fiber(model).value,
        "invariance": {
            "trials": fiber.trials,
            "passes": fiber.invariance_passes,
            "max_error": fiber.invariance_max_error,
        },
        "orbit_recovery": {
            "trials": fiber.pair_trials,
            "passes": fiber.pair_passes,
            "max_distance": fiber.pair_max_distance,
        },
        "surjectivity": {
            "targets": surj.targets,
            "found": surj.found,
            "max_error": surj.max_error,
        },
        "tolerance": tol,
        "passed": fiber.passes == fiber.checks and surj.all_found,
    }
    return dumps(payload)


def cmd_dh_estimate(args) -> str:
    obj = check_keys(_load_input(args), ("rep", "radius", "extent", "bins"), "input")
    r = rep_from_json(obj["rep"])
    radius = float(parse_rational(obj["radius"], "radius"))
    if not isinstance(obj["extent"], list) or not isinstance(obj["bins"], list):
        raise InputError("extent and bins must be lists")
    lo, hi = [], []
    for pair in obj["extent"]:
        if not isinstance(pair, list) or len(pair) != 2:
            raise InputError("extent entries must be [lo, hi] pairs")
        lo.append(float(parse_rational(pair[0], "extent")))
        hi.append(float(parse_rational(pair[1], "extent")))
    bins = [exact_int(b, "bins entry") for b in obj["bins"]]
    samples = args.samples if args.samples is not None else DEFAULT_SAMPLES
    est = dh.dh_estimate(r, radius, lo, hi, bins, samples, seed=args.seed)
    buf = io.StringIO()
    est.write_csv(buf)
    return buf.getvalue()


def _orbit_payload(family, rank, base, system, orbit) -> dict:
    polytope = coadjoint.moment_polytope(orbit)
    return {
        "family": family,
        "rank": rank,
        "base_point": [str(x) for x in base],
        "roots": [list(r_) for r_ in system.roots],
        "fixed_points": [[str(x) for x in p] for p in orbit.fixed_points],
        "isotropy_weights": [[list(w) for w in ws] for ws in orbit.weights],
        "weight_count": orbit.weight_count,
        "complexity": orbit.complexity,
        "polytope": {
            "vertices": [[str(x) for x in v] for v in polytope.vertices],
            "facets": [
                {"normal": list(n), "offset": str(c)} for n, c in polytope.facets
            ],
            "dimension": polytope.dimension,
            "full_dimensional": polytope.full_dimensional,
        },
    }


def cmd_coadjoint_orbit(args) -> str:
    family, rank, base = orbit_input_from_json(_load_input(args))
    system = coadjoint.build_root_system(family, rank)
    orbit = coadjoint.RootSystemOrbit.build(system, base)
    return dumps(_orbit_payload(family, rank, base, system, orbit))


def cmd_packing_check(args) -> str:
    family, rank, base = orbit_input_from_json(_load_input(args))
    system = coadjoint.build_root_system(family, rank)
    orbit = coadjoint.RootSystemOrbit.build(system, base)
    report = coadjoint.full_packing_report(orbit)
    payload = _orbit_payload(family, rank, base, system, orbit)
    payload.update({
        "fully_packed": report.fully_packed,
        "all_valid_certificates": [_cert_json(c) for c in report.certificates],
    })
    if report.pairing is None:
        payload["packing"] = None
    else:
        pairing = report.pairing
        payload["packing"] = {
            "certificates": [_cert_json(pairing.plus), _cert_json(pairing.minus)],
            "weyl_element": {
                "permutation": list(pairing.weyl_element.permutation),
                "signs": list(pairing.weyl_element.signs),
            },
            "complement_slice_normal": list(pairing.slice_normal),
        }
    return dumps(payload)


_COMMANDS = {
    "analyze-rep": cmd_analyze_rep,
    "defining-poly": cmd_defining_poly,
    "split": cmd_split,
    "classify-fiber": cmd_classify_fiber,
    "exceptional-orbits": cmd_exceptional_orbits,
    "verify-trivialization": cmd_verify_trivialization,
    "dh-estimate": cmd_dh_estimate,
    "coadjoint-orbit": cmd_coadjoint_orbit,
    "packing-check": cmd_packing_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="complexity-one",
        description="Lattice, cone, and packing computations for "
        "complexity-one torus actions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", help="path to a JSON input file")
        p.add_argument("--json-inline", help="JSON input given inline")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = _COMMANDS[args.command]
    try:
        text = handler(args)
    except InputError as exc:
        sys.stdout.write(dumps({"code": exc.code, "message": str(exc)}))
        return 1
    except DomainError as exc:
        sys.stdout.write(dumps({"code": exc.code, "message": str(exc)}))
        return 2
    _emit(args, text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
