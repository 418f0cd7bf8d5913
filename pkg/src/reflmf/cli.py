"""Command-line front end: info, invariants, factorise, hilbert, homotopy, verify.

Exit codes: 0 all requested checks pass, 1 a check failed, 2 invalid input,
3 a resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from functools import cached_property
from pathlib import Path

from . import equivariant as eq
from . import factorisation as fz
from . import series as se
from .invariants import CoinvariantAlgebra
from .polyring import default_names, render_poly
from .reflgroup import (
    GroupSpecError,
    build_group,
    invariant_bilinear_form,
    is_well_generated,
    parse_group_spec,
    regular_vector_search,
)
from .scalars import CapExceeded, ExactMatrix, ReflmfError, limits, render_scalar

COMMANDS = ("info", "invariants", "factorise", "hilbert", "homotopy", "verify")
THREADS_ENV = "REFLECTION_MF_THREADS"

# the reference catalog exercised by the acceptance suite and scripts/verify_catalog.py
CATALOG = (
    ["A1", "A2", "A3", "A4", "B2", "B3", "D4"]
    + [f"I2({m})" for m in range(3, 9)]
    + ["H3"]
    + [f"Cyclic({m})" for m in range(2, 13)]
    + ["G(3,1,2)", "G(4,1,2)", "G(4,2,2)", "G(3,3,3)"]
)


@dataclasses.dataclass(frozen=True)
class RunConfig:
    spec: str
    command: str = "info"
    order_cap: int = 1000
    conductor_cap: int = 120
    degree_bound: int | None = None
    fmt: str = "text"
    out: str | None = None
    quiet: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.fmt not in ("text", "json", "latex"):
            raise ValueError(f"unknown format {self.fmt!r}")
        for name in ("order_cap", "conductor_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.degree_bound is not None and self.degree_bound < 0:
            raise ValueError("degree bound must be non-negative")


def thread_count() -> int:
    """Validated REFLECTION_MF_THREADS; the computations themselves run in one thread."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        k = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer") from None
    if k < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer")
    return k


class Pipeline:
    """Lazily computed stages for one group, shared by all commands."""

    def __init__(self, spec: str, degree_bound: int | None = None):
        self.spec = parse_group_spec(spec)
        self.degree_bound = degree_bound

    @cached_property
    def group(self):
        return build_group(self.spec)

    @cached_property
    def ca(self) -> CoinvariantAlgebra:
        return eq.canonical(CoinvariantAlgebra(self.group))

    @cached_property
    def degree_data(self):
        return eq.degrees_codegrees(self.ca)

    @cached_property
    def duality(self) -> bool:
        return eq.is_duality_group(self.ca)

    @cached_property
    def well_generated(self) -> bool:
        return is_well_generated(self.group)

    @cached_property
    def gram(self):
        return eq.gram_matrix(self.ca)

    @cached_property
    def jacobian(self):
        return fz.jacobian_pair(self.ca, self.gram)

    @cached_property
    def kmat(self):
        return fz.k_matrix(self.ca, self.gram)

    @cached_property
    def mf(self):
        return fz.verify_mf(self.ca, self.jacobian, self.kmat)

    @cached_property
    def resolution(self):
        return fz.periodic_resolution(self.ca, self.mf, self.bound)

    @cached_property
    def regularity(self):
        return eq.regularity_table(self.ca, 2 * self.degree_data.d)

    @cached_property
    def bound(self) -> int:
        return self.degree_bound if self.degree_bound is not None else self.ca.N + 2 * self.ca.d


# -- reports ------------------------------------------------------------------------


def _names(n):
    return default_names(n)


def report_info(P: Pipeline) -> tuple[dict, bool]:
    G, dd = P.group, P.degree_data
    rep = {
        "group": G.label,
        "field_conductor": G.field.conductor,
        "dimension": G.n,
        "order": G.order,
        "reflections": len(G.reflections),
        "hyperplanes": len(G.hyperplane_forms),
        "degrees": list(dd.degrees),
        "codegrees": list(dd.codegrees),
        "N": dd.N,
        "well_generated": P.well_generated,
        "duality_group": P.duality,
        "regular_numbers": [k for k, r in P.regularity.items() if r["criterion"]],
        "regularity": {str(k): v for k, v in P.regularity.items()},
    }
    return rep, True


def report_invariants(P: Pipeline) -> tuple[dict, bool]:
    C = P.ca
    names = _names(C.n)
    return {
        "group": P.group.label,
        "degrees": list(C.degrees),
        "basic_invariants": [render_poly(f, names) for f in C.basics.polys],
        "harmonic_dimensions": list(C.harmonics.dims),
        "harmonic_total": C.harmonics.total_dimension,
    }, True


def report_factorise(P: Pipeline) -> tuple[dict, bool]:
    if not P.duality:
        return {"group": P.group.label, "certified": False,
                "skipped": "not a duality group; K needs a perfect pairing"}, False
    rep = fz.mf_to_json(P.ca, P.jacobian, P.kmat, P.mf)
    return rep, rep["certified"]


def report_hilbert(P: Pipeline) -> tuple[dict, bool]:
    C = P.ca
    rep = {"group": P.group.label, "A": se.series_of_A(C).to_dict()}
    if not P.duality:
        rep["skipped"] = "module series need the matrix factorisation (not a duality group)"
        return rep, True
    om = se.module_series_direct(C, P.mf, "omega")
    de = se.module_series_direct(C, P.mf, "der")
    aq = se.aq_series(C, P.mf)
    ok_formula = om == se.module_series_formula(C, "omega") and de == se.module_series_formula(C, "der")
    rep.update({
        "omega": om.to_dict(),
        "der": de.to_dict(),
        "t1": aq.h1.to_dict(),
        "omega_total": om.total(),
        "der_total": de.total(),
        "expected_total": se.totals_expected(C),
        "tjurina_number": aq.tjurina_number,
        "formula_agrees": ok_formula,
        "aq_bigraded": {str(k): v for k, v in aq.bigraded().items()},
    })
    ok = ok_formula and om.total() == de.total() == se.totals_expected(C) and aq.shift_holds
    return rep, ok


def report_homotopy(P: Pipeline) -> tuple[dict, bool]:
    fl = se.flag_homotopy_polynomial(P.ca)
    rep = {
        "group": P.group.label,
        "flag_polynomial": fl.series.to_dict(),
        "crystallographic": fl.crystallographic,
        "rational_homotopy_dims": {str(k): v for k, v in se.homotopy_report(P.ca).items()},
    }
    if not fl.crystallographic:
        rep["warning"] = "not a Weyl group; the flag-manifold reading does not apply"
    return rep, fl.series.nonnegative()


def verify_checks(P: Pipeline) -> list[dict]:
    """Every named check, with status pass, fail, skip (with reason) or info."""
    checks: list[dict] = []

    def add(name, status, detail=""):
        checks.append({"name": name, "status": status if isinstance(status, str) else
                       ("pass" if status else "fail"), "detail": detail})

    G, C, dd = P.group, P.ca, P.degree_data
    add("group.closure", all(G.index.get(a @ b) is not None for a in G.generators for b in G.elements)
        and G.identity.is_zero() is False, f"order {G.order}")
    add("invariants.degree_product", math.prod(dd.degrees) == G.order, f"degrees {list(dd.degrees)}")
    add("invariants.reflection_count", dd.N == len(G.reflections), f"N = {dd.N}")
    try:
        se.series_of_A(C)
        add("invariants.harmonic_series", True)
    except se.SeriesError as exc:
        add("invariants.harmonic_series", False, str(exc))
    add("orlik_solomon", P.duality == P.well_generated,
        f"duality {P.duality}, well-generated {P.well_generated}")
    gram = P.gram
    add("pairing.degree_support", gram.support_by_degree)
    if P.duality:
        add("pairing.perfect", gram.perfect)
    else:
        add("pairing.perfect", "skip", "not a duality group")
    table = P.regularity
    add("regularity.search_consistent", all(r["criterion"] or not r["witness_found"] for r in table.values()))
    if P.duality:
        add("regularity.d_regular", table[dd.d]["criterion"])
    missing = [k for k, r in table.items() if r["criterion"] and not r["witness_found"]]
    add("regularity.witnesses", "info" if missing else "pass",
        f"no witness found for {missing}" if missing else "every criterion-regular k has a witness")
    perm_ok = all(eq.degree_codegree_permutation(C, k) is not None
                  for k, r in table.items() if r["criterion"])
    add("regularity.degree_codegree_matching", perm_ok, eq.PERMUTATION_CONVENTION)
    wit = regular_vector_search(G, dd.d)
    if wit is not None:
        v = wit.vector
        for rep in ("V", "V*"):
            M = eq.evaluation_iso(C, rep, v)
            add(f"evaluation_iso.{rep}", M.rank() == M.rows)
    else:
        add("evaluation_iso.V", "skip", f"no regular vector found for k = {dd.d}")
    add("springer.eigenspaces_k=d", eq.springer_forward_check(C, dd.d))
    if not P.duality:
        for name in ("mf.jacobian_congruence", "mf.certified", "det.hyperplanes", "det.discriminant",
                     "resolution.exact", "resolution.quasi_periodic", "resolution.minimal",
                     "hilbert.formula", "hilbert.totals", "hilbert.frobenius", "aq.shift"):
            add(name, "skip", "not a duality group")
        return checks
    try:
        JP, KM = P.jacobian, P.kmat
        add("mf.jacobian_congruence", JP.consistent)
        MF = P.mf
        add("mf.certified", MF.certified)
    except fz.FactorisationError as exc:
        add("mf.certified", False, str(exc))
        return checks
    dr = fz.determinant_checks(C, JP, KM)
    add("det.hyperplanes", dr.det_K_is_hyperplane_product)
    add("det.discriminant", dr.monic_in_fn and dr.invariant)
    res = P.resolution
    add("resolution.exact", all(res.exact.values()), f"positions 1-4, |m| <= {res.bound}")
    add("resolution.quasi_periodic", res.quasi_periodic)
    add("resolution.minimal", res.minimal)
    om = se.module_series_direct(C, MF, "omega")
    de = se.module_series_direct(C, MF, "der")
    add("hilbert.formula", om == se.module_series_formula(C, "omega") and de == se.module_series_formula(C, "der"))
    add("hilbert.totals", om.total() == de.total() == se.totals_expected(C), f"total {om.total()}")
    add("hilbert.der_nonnegative_degrees", min(de.support) >= 0)
    add("hilbert.frobenius", se.frobenius_duality_check(C, om, de))
    aq = se.aq_series(C, MF)
    add("aq.shift", aq.shift_holds, f"Tjurina number {aq.tjurina_number}")
    if G.is_real:
        sd = fz.coxeter_selfduality_check(C, MF, invariant_bilinear_form(G))
        add("coxeter.dimensions", sd.ok, f"dim Omega = dim Der = {sd.omega_total} = n|W|/2")
        add("coxeter.syzygy_shifts", "info",
            f"Syz Omega = t^{sd.syz_omega_shift} Der, Syz Der = t^{sd.syz_der_shift} Omega (series shifts)")
        fl = se.flag_homotopy_polynomial(C)
        add("flag.coefficient_sum", fl.series.total() == de.total() and fl.series.nonnegative())
    else:
        add("coxeter.dimensions", "skip", "not a real reflection group")
    return checks


def report_verify(P: Pipeline) -> tuple[dict, bool]:
    checks = verify_checks(P)
    ok = all(c["status"] != "fail" for c in checks)
    rep = {"group": P.group.label, "checks": checks, "passed": ok}
    failing = next((c["name"] for c in checks if c["status"] == "fail"), None)
    if failing:
        rep["first_failure"] = failing
    return rep, ok


REPORTS = {
    "info": report_info,
    "invariants": report_invariants,
    "factorise": report_factorise,
    "hilbert": report_hilbert,
    "homotopy": report_homotopy,
    "verify": report_verify,
}


# -- emission ------------------------------------------------------------------------


def _json_default(x):
    if hasattr(x, "field") and hasattr(x, "poly"):
        return render_scalar(x)
    if isinstance(x, ExactMatrix):
        return [[render_scalar(a) for a in x.row(i)] for i in range(x.rows)]
    return str(x)


def _text(rep: dict, indent: str = "") -> list[str]:
    lines = []
    for k in sorted(rep):
        v = rep[k]
        if k == "checks":
            for c in v:
                line = f"{indent}[{c['status'].upper():4}] {c['name']}"
                if c["detail"]:
                    line += f"  ({c['detail']})"
                lines.append(line)
        elif isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines.extend(_text(v, indent + "  "))
        elif isinstance(v, list) and v and isinstance(v[0], list):
            lines.append(f"{indent}{k}:")
            for row in v:
                lines.append(f"{indent}  [" + ", ".join(str(x) for x in row) + "]")
        else:
            lines.append(f"{indent}{k}: {v}")
    return lines


def _latex_escape(s: str) -> str:
    return s.replace("_", "\\_").replace("^", "\\^{}").replace("*", "")


def emit(rep: dict, fmt: str, P: Pipeline | None = None, command: str = "") -> str:
    if fmt == "json":
        return json.dumps(rep, sort_keys=True, indent=2, default=_json_default) + "\n"
    if fmt == "latex":
        if command == "factorise" and P is not None and rep.get("certified"):
            return fz.mf_to_latex(P.ca, P.jacobian, P.kmat)
        rows = [f"{_latex_escape(k)} & {_latex_escape(json.dumps(rep[k], sort_keys=True, default=_json_default))} \\\\"
                for k in sorted(rep)]
        return "\\begin{tabular}{ll}\n" + "\n".join(rows) + "\n\\end{tabular}\n"
    return "\n".join(_text(rep)) + "\n"


def run(config: RunConfig) -> tuple[int, str]:
    """Execute one command; returns (exit code, emitted text)."""
    try:
        thread_count()
        with limits(order_cap=config.order_cap, conductor_cap=config.conductor_cap):
            P = Pipeline(config.spec, config.degree_bound)
            rep, ok = REPORTS[config.command](P)
            text = emit(rep, config.fmt, P, config.command)
    except CapExceeded as exc:
        return 3, f"resource cap exceeded: {exc}\n"
    except (GroupSpecError, ValueError) as exc:
        return 2, f"invalid input: {exc}\n"
    except ReflmfError as exc:
        return 1, f"check failed: {exc}\n"
    return (0 if ok else 1), text


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="reflmf", description="Matrix factorisations for complex reflection groups.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("group", help="A3, B3, D4, H3, I2(7), G(4,2,2), Sym(5), Cyclic(6), Dihedral(5) or file:path.json")
    ap.add_argument("--format", dest="fmt", choices=("text", "json", "latex"), default="text")
    ap.add_argument("--out", default=None, help="write the report here instead of stdout")
    ap.add_argument("--order-cap", type=int, default=1000)
    ap.add_argument("--degree-bound", type=int, default=None)
    ap.add_argument("--conductor-cap", type=int, default=120)
    ap.add_argument("--quiet", action="store_true", help="emit nothing, only the exit code")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = RunConfig(args.group, args.command, args.order_cap, args.conductor_cap, args.degree_bound,
                        args.fmt, args.out, args.quiet)
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    code, text = run(cfg)
    if code in (2, 3) or (code == 1 and text.startswith("check failed:")):
        if not cfg.quiet:
            sys.stderr.write(text)
        return code
    if cfg.out:
        try:
            Path(cfg.out).write_text(text)
        except OSError as exc:
            print(f"cannot write {cfg.out}: {exc}", file=sys.stderr)
            return 2
    elif not cfg.quiet:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
