"""Command-line interface.

Subcommands: analyze, jp, modsym, classgroup, endo.  Exit codes: 0 success,
1 invalid input, 2 internal error.  --json switches to machine output; all
algebraic numbers appear in the canonical text form
poly=...;root=lo,hi;coords=...
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .contfrac import JPState, hecke_unit, jp_expand
from .errors import RmlatError
from .linalg import charpoly_int, det_int
from .modsym import build_space, eigen_orbits
from .numberfield import parse_canonical
from .pipeline import Config, analyze_level_cached, report_json, strip_timing
from .pseudolattice import RMCertificate, endomorphism_ring, from_periods
from .quadorder import class_group, order_from_disc


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="rmlat", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="full pipeline for one or more levels")
    pa.add_argument("--level", type=int, action="append", required=True)
    pa.add_argument("--max-jp-steps", type=int, default=2000)
    pa.add_argument("--hecke-bound", type=int, default=20)
    pa.add_argument("--json", action="store_true")
    pa.add_argument("--cache-dir", default=None)
    pa.add_argument("--jobs", type=int, default=1)

    pj = sub.add_parser("jp", help="Jacobi-Perron expansion of a state vector")
    pj.add_argument("--theta", action="append", required=True,
                    help="canonical algebraic real; repeat for dimension > 2")
    pj.add_argument("--max-steps", type=int, default=2000)
    pj.add_argument("--json", action="store_true")

    pm = sub.add_parser("modsym", help="modular symbol eigen-orbits at a level")
    pm.add_argument("--level", type=int, required=True)
    pm.add_argument("--hecke", type=int, action="append", default=None)
    pm.add_argument("--json", action="store_true")

    pc = sub.add_parser("classgroup", help="form class group of a discriminant")
    pc.add_argument("--disc", type=int, required=True)
    pc.add_argument("--json", action="store_true")

    pe = sub.add_parser("endo", help="endomorphism ring of Z + Z theta")
    pe.add_argument("--theta", required=True)
    pe.add_argument("--json", action="store_true")
    return p


def _emit(payload, as_json: bool, human) -> None:
    if as_json:
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        human(payload)


def _analyze_worker(args):
    N, config = args
    return analyze_level_cached(N, config)


def _cmd_analyze(ns) -> int:
    levels = ns.level
    for N in levels:
        if N < 1:
            raise UsageError(f"invalid level {N}")
    config = Config(
        max_jp_steps=ns.max_jp_steps,
        hecke_bound=ns.hecke_bound,
        cache_dir=ns.cache_dir,
        jobs=ns.jobs,
    )
    if ns.jobs > 1 and len(levels) > 1:
        with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
            reports = list(pool.map(_analyze_worker, [(N, config) for N in levels]))
    else:
        reports = [analyze_level_cached(N, config) for N in levels]
    if ns.json:
        if len(reports) == 1:
            sys.stdout.write(report_json(reports[0]).decode())
        else:
            sys.stdout.write(
                json.dumps(reports, sort_keys=True, indent=2) + "\n"
            )
        return 0
    for rep in reports:
        _print_analyze(rep)
    return 0


def _print_analyze(rep: dict) -> None:
    print(f"level {rep['level']}: genus {rep['genus']}, status {rep['status']}")
    for orb in rep.get("orbits", []):
        tag = "full-degree" if orb["anosov"] else "partial"
        print(f"  orbit factor {orb['factor']} ({tag}, degree {orb['degree']})")
    for con in rep.get("constructions", []):
        line = f"  embedding {con['embedding']}: {con.get('status')}"
        if "jp" in con:
            jp = con["jp"]
            line += (
                f"; jp {jp['status']} (pre {jp['preperiod_length']},"
                f" period {jp['period_length']})"
            )
        if "lambdaA" in con:
            line += f"; lambdaA {con['lambdaA']}"
        print(line)
    td = rep.get("theorem_diagnostics")
    if td:
        if "h_vs_genus" in td:
            hv = td["h_vs_genus"]
            print(
                f"  h vs g: h={hv['h']} h+={hv['hPlus']} g={hv['g']}"
                f" -> {hv['verdict']}"
            )
        if "action" in td:
            print(f"  class-group action: {td['action']['status']}")


def _cmd_jp(ns) -> int:
    try:
        thetas = [parse_canonical(t) for t in ns.theta]
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad --theta value: {exc}") from exc
    try:
        state = JPState.build(thetas)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    expansion = jp_expand(state, max_steps=ns.max_steps)
    payload = {
        "dimension": expansion.dimension,
        "status": expansion.status,
        "preperiod": [list(b) for b in expansion.preperiod_digits],
        "period": [list(b) for b in expansion.period_digits],
        "digits": [list(b) for b in expansion.digits],
        "A": expansion.period_matrix,
        "charpoly": None,
        "lambdaA": None,
    }
    if expansion.status == "periodic":
        unit = hecke_unit(expansion)
        payload["charpoly"] = list(unit.char_poly.coeffs)
        payload["lambdaA"] = unit.value.to_canonical()
        payload["detA"] = det_int(expansion.period_matrix)

    def human(pl):
        print(f"dimension {pl['dimension']}, status {pl['status']}")
        print(f"preperiod {pl['preperiod']}")
        print(f"period    {pl['period']}")
        if pl["A"] is not None:
            print(f"A = {pl['A']}, charpoly {pl['charpoly']}")
            print(f"lambdaA = {pl['lambdaA']}")

    _emit(payload, ns.json, human)
    return 0


def _cmd_modsym(ns) -> int:
    if ns.level < 1:
        raise UsageError(f"invalid level {ns.level}")
    ns_hecke = sorted(set(ns.hecke or [2, 3, 5, 7]))
    if any(n < 1 for n in ns_hecke):
        raise UsageError("--hecke indices must be >= 1")
    space = build_space(ns.level)
    bound = max(ns_hecke)
    orbits = eigen_orbits(space, hecke_bound=bound) if space.genus else []
    payload = {
        "level": ns.level,
        "genus": space.genus,
        "orbits": [
            {
                "factor": list(o.factor.coeffs),
                "Kf": list(o.field.poly.coeffs) if o.field else None,
                "anosov": o.is_anosov,
                "ap": {
                    str(n): o.eigenvalues[n].to_canonical()
                    for n in ns_hecke
                    if n in o.eigenvalues
                },
            }
            for o in orbits
        ],
    }

    def human(pl):
        print(f"level {pl['level']}: genus {pl['genus']}")
        for orb in pl["orbits"]:
            print(
                f"  factor {orb['factor']} over Kf {orb['Kf']}"
                f" (full-degree: {orb['anosov']})"
            )
            for n, v in orb["ap"].items():
                print(f"    a_{n} = {v}")

    _emit(payload, ns.json, human)
    return 0


def _cmd_classgroup(ns) -> int:
    try:
        order = order_from_disc(ns.disc)
    except RmlatError as exc:
        raise UsageError(str(exc)) from exc
    cg = class_group(order)
    payload = {
        "D": order.D,
        "dK": order.d_K,
        "f": order.f,
        "h": cg.h,
        "hPlus": cg.h_plus,
        "cycles": [[[fm.a, fm.b, fm.c] for fm in cyc] for cyc in cg.cycles],
        "unit": cg.unit.value.to_canonical(),
        "unitNorm": cg.unit.norm,
    }

    def human(pl):
        print(
            f"D = {pl['D']} = {pl['f']}^2 * {pl['dK']}: h = {pl['h']},"
            f" h+ = {pl['hPlus']}"
        )
        print(f"fundamental unit {pl['unit']} of norm {pl['unitNorm']}")
        for i, cyc in enumerate(pl["cycles"]):
            print(f"  cycle {i}: {cyc}")

    _emit(payload, ns.json, human)
    return 0


def _cmd_endo(ns) -> int:
    try:
        theta = parse_canonical(ns.theta)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad --theta value: {exc}") from exc
    if theta.is_rational():
        raise UsageError("theta is rational; Z + Z theta has rank 1")
    m = from_periods([theta.field.one(), theta])
    cert = endomorphism_ring(m)
    if isinstance(cert, RMCertificate):
        payload = {
            "minpoly": list(cert.min_poly.coeffs),
            "D": cert.D,
            "dK": cert.d_K,
            "f": cert.f,
        }
    else:
        payload = {"trivial": True, "degree": cert.degree}

    def human(pl):
        if pl.get("trivial"):
            print(f"End = Z (theta has degree {pl['degree']})")
        else:
            print(
                f"minpoly {pl['minpoly']}: D = {pl['D']} = {pl['f']}^2 * {pl['dK']}"
            )

    _emit(payload, ns.json, human)
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "jp": _cmd_jp,
    "modsym": _cmd_modsym,
    "classgroup": _cmd_classgroup,
    "endo": _cmd_endo,
}


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        parser.print_usage(sys.stderr)
        return 1
    try:
        return _COMMANDS[ns.command](ns)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except (RmlatError, ValueError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    except Exception as exc:  # internal failure
        sys.stderr.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return 2


def main(argv=None) -> None:
    sys.exit(cli_main(argv))


if __name__ == "__main__":
    main()
