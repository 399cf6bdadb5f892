"""End-to-end level analysis: eigenforms to units to class-field diagnostics.

analyze_level drives the whole construction for one level N and returns a
JSON-ready report.  Every quantity in the report is either an integer, a
canonical-form algebraic number, or a status string; a report is a pure
function of (N, config) up to the timing block.  Stage failures never
propagate: they are recorded in the report with a status.
"""

from __future__ import annotations

import hashlib
import json
import os
import platform
import time
from dataclasses import asdict, dataclass

from . import __version__
from .contfrac import JPState, hecke_unit, jp_expand, verify_perron_eigenvector
from .errors import (
    CacheCorrupt,
    DegenerateRational,
    DiagnosticSkipped,
    NoPerronRoot,
    RationalSlope,
    RmlatError,
)
from .intutil import split_discriminant
from .linalg import det_int
from .modsym import build_space, eigen_orbits, eigenvector_lattice
from .numberfield import AlgebraicReal, parse_canonical
from .polynomials import IntPolynomial, isolate_real_roots
from .pseudolattice import (
    PseudoLattice,
    RMCertificate,
    cover_degree,
    endomorphism_ring,
    from_periods,
    hecke_project,
    rm_quadratic_check,
    tau_truncate,
)
from .quadorder import (
    ClassCountMismatch,
    GaloisActionTable,
    class_group,
    field_diagnostics,
    galois_action_table,
    is_unit_of,
    order_from_disc,
)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Config:
    max_jp_steps: int = 2000
    hecke_bound: int = 20
    positivity_bound: int = 64
    diagnostic_degree_cap: int = 4
    cache_dir: str | None = None
    jobs: int = 1

    def __post_init__(self):
        for name in ("max_jp_steps", "hecke_bound", "positivity_bound",
                     "diagnostic_degree_cap", "jobs"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    def content_dict(self) -> dict:
        """Fields that affect report content (cache location does not)."""
        d = asdict(self)
        d.pop("cache_dir")
        d.pop("jobs")
        return d

    def hash(self) -> str:
        blob = json.dumps(self.content_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def _poly_list(p: IntPolynomial) -> list[int]:
    return list(p.coeffs)


def _interval_str(iv) -> str:
    lo, hi = iv
    return f"{lo.numerator}/{lo.denominator},{hi.numerator}/{hi.denominator}"


def analyze_level(N: int, config: Config | None = None) -> dict:
    """Full construction and diagnostics for level N; never raises on a
    stage failure (statuses land in the report)."""
    if N < 1:
        raise ValueError("level must be >= 1")
    config = config or Config()
    t0 = time.perf_counter()
    report: dict = {
        "schema": SCHEMA_VERSION,
        "level": N,
        "config": config.content_dict(),
    }
    space = build_space(N)
    g = space.genus
    report["genus"] = g
    report["dims"] = {
        "quotient": space.dim,
        "cuspidal": len(space.cuspidal_basis),
        "cuspidal_plus": g,
        "cusp_classes": len(space.cusps),
    }
    report["cover_degree"] = cover_degree(g) if g >= 1 else None

    if g == 0:
        report["status"] = "genus_zero"
        report["orbits"] = []
        report["applicable"] = False
        _stamp(report, t0)
        return report

    try:
        orbits = eigen_orbits(space, hecke_bound=config.hecke_bound)
    except RmlatError as exc:
        report["status"] = "orbit_split_failed"
        report["error"] = f"{type(exc).__name__}: {exc}"
        report["applicable"] = False
        _stamp(report, t0)
        return report

    report["orbits"] = [
        {
            "factor": _poly_list(o.factor),
            "degree": o.degree,
            "anosov": o.is_anosov,
            "totally_real": o.totally_real,
            "separating": o.separating,
            "from_lower_level": o.from_lower_level,
            "field_poly": _poly_list(o.field.poly) if o.field else None,
            "ap": {str(n): o.eigenvalues[n].to_canonical() for n in sorted(o.eigenvalues)},
        }
        for o in orbits
    ]
    full = [o for o in orbits if o.is_anosov]
    report["applicable"] = bool(full)
    if not full:
        report["status"] = "no_full_degree_orbit"
        report["note"] = (
            "no eigenform orbit has degree equal to the genus; "
            "the construction does not apply at this level"
        )
        _stamp(report, t0)
        return report

    orbit = full[0]
    constructions = []
    lattices: list[PseudoLattice] = []
    units: list[AlgebraicReal | None] = []
    first_A = None
    shared_D: int | None = None
    first_unit = None
    for emb in range(orbit.degree):
        entry, lattice, unit_val, theta = _analyze_embedding(
            space, orbit, emb, config
        )
        constructions.append(entry)
        if lattice is not None:
            lattices.append(lattice)
            units.append(unit_val)
        if emb == 0:
            first_unit = entry.get("_unit_obj")
            first_A = entry.get("jp", {}).get("A")
        if "rm_certificate" in entry and entry["rm_certificate"].get("D"):
            D = entry["rm_certificate"]["D"]
            shared_D = D if shared_D is None else shared_D
        entry.pop("_unit_obj", None)
    report["constructions"] = constructions
    report["status"] = "ok"

    if g == 1:
        report["theorem_diagnostics"] = {
            "status": "degenerate_rank",
            "note": "genus 1 leaves no theta-vector; projection is rank 1",
        }
        _stamp(report, t0)
        return report

    report["j_assignment"] = _j_assignment(first_A, lattices)
    report["theorem_diagnostics"] = _theorem_diagnostics(
        shared_D, lattices, units, first_unit, g, config
    )
    _stamp(report, t0)
    return report


def _j_assignment(A, lattices) -> dict:
    """Conjugate roots of the first period matrix paired with the conjugate
    lattices (the dominant root goes to the originally expanded lattice)."""
    if A is None or not lattices:
        return {"status": "unavailable"}
    if len(A) != 2:
        return {"status": "unsupported_dimension", "dimension": len(A)}
    result = j_invariants(A, lattices)
    if result.get("status") != "ok":
        return result
    return {
        "status": "ok",
        "values": [lam.to_canonical() for _, lam in result["pairs"]],
        "bijective": result["bijective"],
        "perron_index": 0,
    }


def _analyze_embedding(space, orbit, emb, config):
    """One embedding's construction; returns (report entry, lattice, unit, theta)."""
    entry: dict = {"embedding": emb}
    try:
        ev = eigenvector_lattice(space, orbit, emb)
    except RmlatError as exc:
        entry["status"] = "eigenvector_failed"
        entry["error"] = f"{type(exc).__name__}: {exc}"
        return entry, None, None, None
    entry["eigenvector"] = [c.to_canonical() for c in ev.vector]
    entry["basis_change"] = ev.basis_change
    g = len(ev.vector)
    jac = from_periods(ev.vector)
    entry["jacobian_rank"] = jac.rank

    if g == 1:
        entry["status"] = "degenerate_rank"
        return entry, None, None, None

    try:
        m_H = hecke_project(jac)
    except RationalSlope as exc:
        entry["status"] = "rational_slope"
        entry["error"] = str(exc)
        return entry, None, None, None
    theta = ev.vector[1]
    entry["theta"] = theta.to_canonical()

    cert = endomorphism_ring(m_H)
    if isinstance(cert, RMCertificate):
        entry["rm_certificate"] = {
            "theta": cert.theta.to_canonical(),
            "minpoly": _poly_list(cert.min_poly),
            "D": cert.D,
            "dK": cert.d_K,
            "f": cert.f,
        }
    else:
        entry["rm_certificate"] = {"trivial": True, "degree": cert.degree}
        entry["status"] = "no_real_multiplication"
        return entry, None, None, None

    state = JPState(list(ev.vector[1:]))
    entry["state_independent_with_one"] = state.independent_with_one()
    expansion = jp_expand(state, max_steps=config.max_jp_steps)
    jp_block = {
        "status": expansion.status,
        "preperiod_length": len(expansion.preperiod_digits),
        "period_length": len(expansion.period_digits),
        "preperiod": [list(b) for b in expansion.preperiod_digits],
        "period": [list(b) for b in expansion.period_digits],
    }
    if expansion.status == "periodic":
        jp_block["A"] = expansion.period_matrix
        jp_block["det_A"] = det_int(expansion.period_matrix)
    entry["jp"] = jp_block
    if expansion.status != "periodic":
        entry["status"] = f"jp_{expansion.status}"
        return entry, m_H, None, theta

    try:
        unit = hecke_unit(expansion)
    except (NoPerronRoot, RmlatError) as exc:
        entry["status"] = "unit_extraction_failed"
        entry["error"] = f"{type(exc).__name__}: {exc}"
        return entry, m_H, None, theta
    jp_block["charpoly"] = _poly_list(unit.char_poly)
    entry["lambdaA"] = unit.value.to_canonical()
    entry["j_invariant"] = unit.value.to_canonical()
    entry["unit_checks"] = _unit_checks(unit, expansion, cert)
    entry["tau_diagnostics"] = _tau_diagnostics(ev, theta, config)
    entry["status"] = "ok"
    entry["_unit_obj"] = unit
    return entry, m_H, unit.value, theta


def _unit_checks(unit, expansion, cert) -> dict:
    minpoly = unit.value.minimal_polynomial()
    checks = {
        "charpoly_constant": unit.char_poly.coeffs[0],
        "det_A": unit.det_A,
        "minpoly": _poly_list(minpoly),
        "is_algebraic_unit": abs(minpoly.coeffs[0]) == 1 and minpoly.leading == 1,
        "norm_to_Q_abs_one": abs(minpoly.coeffs[0]) == abs(minpoly.leading),
        "perron_eigenvector_verified": verify_perron_eigenvector(
            expansion.period_matrix, expansion.periodic_state, unit
        ),
    }
    try:
        order = order_from_disc(cert.D)
        membership = is_unit_of(unit.value, order)
        checks["in_endomorphism_order"] = membership.is_unit
        if membership.note:
            checks["membership_note"] = membership.note
    except RmlatError as exc:
        checks["in_endomorphism_order"] = None
        checks["membership_note"] = str(exc)
    if minpoly.degree == 2 and minpoly.leading == 1:
        c0, c1, _ = minpoly.coeffs
        checks["unit_order_disc"] = c1 * c1 - 4 * c0
    return checks


def _tau_diagnostics(ev, theta, config) -> list[dict]:
    out = []
    for n in (2, 3, 5, 7):
        if n not in ev.matrices or n > config.hecke_bound:
            continue
        block = tau_truncate(ev.matrices[n])
        diag = rm_quadratic_check(theta, block.tau)
        out.append(
            {
                "n": n,
                "tau": [list(r) for r in block.tau],
                "symmetric_input": block.symmetric_input,
                "symmetrized": block.symmetrized,
                "holds": diag.holds,
                "residual_poly": _poly_list(diag.residual_poly),
            }
        )
    return out


def _theorem_diagnostics(D, lattices, units, first_unit, g, config) -> dict:
    diag: dict = {}
    if D is None or not lattices:
        diag["status"] = "unavailable"
        diag["note"] = "no real-multiplication certificate was produced"
        return diag
    order = order_from_disc(D)
    cg = class_group(order)
    diag["class_group"] = {
        "D": order.D,
        "dK": order.d_K,
        "f": order.f,
        "h": cg.h,
        "hPlus": cg.h_plus,
        "cycles": [[(fm.a, fm.b, fm.c) for fm in cyc] for cyc in cg.cycles],
        "unit": cg.unit.value.to_canonical(),
        "unitNorm": cg.unit.norm,
    }
    diag["h_vs_genus"] = {
        "g": g,
        "h": cg.h,
        "hPlus": cg.h_plus,
        "narrow_matches": cg.h_plus == g,
        "wide_matches": cg.h == g,
        "verdict": (
            "verified" if cg.h_plus == g or cg.h == g else "refuted"
        ),
    }
    labels = [u.to_canonical() if u is not None else None for u in units]
    if any(u is None for u in units) or len(lattices) != len(units):
        diag["action"] = {"status": "unavailable", "note": "missing units"}
    else:
        result = galois_action_table(lattices, labels, cg)
        if isinstance(result, GaloisActionTable):
            diag["action"] = {
                "status": "table",
                "class_indices": list(result.class_indices),
                "permutations": [list(p) for p in result.permutations],
                "axioms_verified": result.axioms_verified,
            }
        else:
            diag["action"] = {
                "status": "class_count_mismatch",
                "lattice_count": result.lattice_count,
                "distinct_classes": result.distinct_classes,
                "h": result.h,
                "hPlus": result.h_plus,
                "class_indices": list(result.class_indices),
            }
    if first_unit is not None:
        try:
            fd = field_diagnostics(first_unit, order)
            diag["field"] = {
                "min_poly": _poly_list(fd.min_poly),
                "degree_over_Q": fd.degree_over_Q,
                "degree_over_k": fd.degree_over_k,
                "totally_real": fd.totally_real,
                "factor_degrees_over_k": fd.factor_degrees_over_k,
                "unit_in_order": fd.unit_in_order.is_unit,
                "normal": fd.normal,
                "normal_status": fd.normal_status,
                "abelian": fd.abelian,
                "notes": fd.notes,
            }
        except DiagnosticSkipped as exc:
            diag["field"] = {"status": "skipped", "reason": str(exc)}
    else:
        diag["field"] = {"status": "unavailable", "note": "no unit extracted"}
    return diag


def _stamp(report: dict, t0: float) -> None:
    report["toolchain"] = {
        "package": "rmlat",
        "version": __version__,
        "python": platform.python_version(),
    }
    report["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}


def report_json(report: dict) -> bytes:
    return (json.dumps(report, sort_keys=True, indent=2) + "\n").encode()


def strip_timing(report: dict) -> dict:
    out = dict(report)
    out.pop("timing", None)
    return out


# --- j-invariant assignment -----------------------------------------------------

def j_invariants(A, lattices: list[PseudoLattice]):
    """Pair each rank-2 lattice (one per real embedding) with its root of
    the characteristic polynomial of A.

    The slope theta* with A (1, theta*) = lambda (1, theta*) is recovered in
    the first lattice's field; conjugate lattices receive the conjugate root.
    Only 2x2 matrices are supported here (larger systems carry their state
    vectors through the pipeline instead).
    """
    from .linalg import charpoly_int

    if len(A) != 2:
        raise ValueError("j-invariant reconstruction needs a 2x2 period matrix")
    P = charpoly_int(A)
    roots = isolate_real_roots(P)
    if len(roots) < len(lattices):
        return {"status": "count_mismatch", "real_roots": len(roots),
                "lattices": len(lattices)}
    base = lattices[0]
    theta_star = _eigen_slope(A, base.field)
    if theta_star is None:
        return {"status": "no_eigen_slope_in_field"}
    lam_coords = (base.field.from_rational(A[0][0]) + theta_star * A[0][1]).coords
    pairs = []
    seen = []
    for m in lattices:
        if m.field.poly != base.field.poly:
            return {"status": "lattices_not_conjugate"}
        lam_i = AlgebraicReal(m.field, lam_coords)
        acc = m.field.zero()
        for c in reversed(P.coeffs):
            acc = acc * lam_i + c
        if not acc.is_zero():
            return {"status": "root_verification_failed"}
        pairs.append((m, lam_i))
        seen.append(lam_i)
    bijective = all(
        seen[i].compare(seen[j]) != 0
        for i in range(len(seen))
        for j in range(i + 1, len(seen))
    )
    return {"status": "ok", "pairs": pairs, "bijective": bijective}


def _eigen_slope(A, fld):
    """Root of A01 x^2 + (A00 - A11) x - A10 in the field whose lambda is the
    dominant eigenvalue, or None."""
    a = A[0][1]
    b = A[0][0] - A[1][1]
    c = -A[1][0]
    if a == 0:
        return None
    roots = _quadratic_roots_in_field(a, b, c, fld)
    best = None
    best_lam = None
    for r in roots:
        lam = fld.from_rational(A[0][0]) + r * A[0][1]
        if lam.compare(1) > 0 and (best_lam is None or lam.compare(best_lam) > 0):
            best, best_lam = r, lam
    return best


def _quadratic_roots_in_field(a, b, c, fld):
    disc = b * b - 4 * a * c
    s = _sqrt_in_field(disc, fld)
    if s is None:
        return []
    from fractions import Fraction

    inv2a = Fraction(1, 2 * a)
    r1 = (s - b) * inv2a
    r2 = (-s - b) * inv2a
    return [r1, r2] if not (r1 - r2).is_zero() else [r1]


def _sqrt_in_field(n: int, fld):
    """Exact square root of the integer n in a field of degree <= 2, or None."""
    import math as _math

    from fractions import Fraction

    if n < 0:
        return None
    r = _math.isqrt(n)
    if r * r == n:
        return fld.from_rational(r)
    if fld.degree != 2:
        return None
    c0, c1, c2 = fld.poly.coeffs
    delta = c1 * c1 - 4 * c0 * c2
    s_n, m_n = _dec(n)
    s_d, m_d = _dec(delta)
    if m_n != m_d:
        return None
    # sqrt(n) = (s_n / s_d) * sqrt(delta) = (s_n / s_d) * (2 c2 alpha + c1)
    w = Fraction(s_n, s_d)
    alpha = fld.generator()
    cand = (alpha * (2 * c2) + c1) * w
    if cand.sign() < 0:
        cand = -cand
    assert (cand * cand - n).is_zero()
    return cand


def _dec(n):
    from .intutil import squarefree_decomposition

    return squarefree_decomposition(n)


# --- cache -----------------------------------------------------------------------

def cache_path(cache_dir: str, N: int, config: Config) -> str:
    return os.path.join(cache_dir, f"level-{N}-{config.hash()}.json")


def cache_put(cache_dir: str, N: int, config: Config, report: dict) -> str:
    os.makedirs(cache_dir, exist_ok=True)
    path = cache_path(cache_dir, N, config)
    blob = report_json(report)
    tmp = path + f".tmp.{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(blob)
    os.replace(tmp, path)
    return path


def cache_get(cache_dir: str, N: int, config: Config) -> dict | None:
    path = cache_path(cache_dir, N, config)
    if not os.path.exists(path):
        return None
    with open(path, "rb") as fh:
        blob = fh.read()
    try:
        report = json.loads(blob)
    except json.JSONDecodeError as exc:
        raise CacheCorrupt(path, f"invalid JSON: {exc}") from exc
    if not isinstance(report, dict) or report.get("schema") != SCHEMA_VERSION:
        raise CacheCorrupt(path, "wrong schema")
    return report


def analyze_level_cached(N: int, config: Config) -> dict:
    if config.cache_dir:
        cached = cache_get(config.cache_dir, N, config)
        if cached is not None:
            return cached
    report = analyze_level(N, config)
    if config.cache_dir:
        cache_put(config.cache_dir, N, config, report)
    return report
