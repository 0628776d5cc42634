"""Command-line front end: ``stark-units <command> --q Q ...``.

Exit codes: 0 when every check passed, 1 when a computed identity failed,
2 for usage and parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .algebra.field import get_field
from .algebra.grammar import parse_poly, to_json_obj
from .algebra.multipoly import MultiPoly
from .cache import PolyCache, resolve_cache_dir
from .errors import StarkUnitsError, UsageError, VerificationError
from .lseries import L_series, default_r, polylog_decompose
from .norms import gauss_norm, sup_norm

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class Config:
    q: int
    modulus: tuple | None
    cache_dir: str
    fmt: str

    def cache(self) -> PolyCache:
        return PolyCache(self.cache_dir)


class _Report:
    """Collects a result and the checks behind it, then prints once."""

    def __init__(self, cfg: Config, command: str):
        self.cfg = cfg
        self.command = command
        self.result_text: list[str] = []
        self.result_json: dict = {}
        self.checks: list[tuple[str, bool, str]] = []

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append((name, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def emit(self, out) -> int:
        if self.cfg.fmt == "json":
            obj = {
                "command": self.command,
                "q": self.cfg.q,
                "result": self.result_json,
                "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in self.checks],
                "ok": self.ok,
            }
            out.write(json.dumps(obj, sort_keys=True) + "\n")
        else:
            for line in self.result_text:
                out.write(line + "\n")
            for n, ok, d in self.checks:
                tail = f" ({d})" if d else ""
                out.write(f"  [{'ok' if ok else 'FAILED'}] {n}{tail}\n")
        return EXIT_OK if self.ok else EXIT_FAIL


def _poly_result(rep: _Report, key: str, p: MultiPoly) -> None:
    rep.result_text.append(str(p))
    rep.result_json[key] = to_json_obj(p)
    rep.result_json[key + "_text"] = str(p)


# -- commands ---------------------------------------------------------------


def cmd_sigma(cfg: Config, args) -> _Report:
    from .stark import compare_routes, degree_bound, stark_unit

    rep = _Report(cfg, "sigma")
    cache = cfg.cache()
    if args.route == "both":
        unit = compare_routes(args.s, cfg.q, cfg.modulus)
        rep.check("exp route = extraction route", True)
    else:
        unit = stark_unit(args.s, cfg.q, cfg.modulus, args.route, cache if args.route == "orbit" else None)
    _poly_result(rep, "sigma", unit.sigma)
    rep.result_json["s"] = args.s
    rep.result_json["route"] = args.route
    rep.check("coefficients in A", unit.sigma.is_integral())
    bound = degree_bound(args.s, cfg.q)
    rep.check(f"deg_z <= {bound}", unit.z_degree() <= bound, f"deg_z = {unit.z_degree()}")
    return rep


def cmd_special(cfg: Config, args) -> _Report:
    from .logalg import special_orbits

    rep = _Report(cfg, "special")
    ring_cache = cfg.cache()
    res = special_orbits(cfg.q, args.s, cfg.modulus)
    ring_cache.store("S", res.poly.ring, args.s, res.poly)
    _poly_result(rep, "S", res.poly)
    rep.result_json["s"] = args.s
    rep.check("coefficients in A", res.poly.is_integral())
    rep.check(f"Z_{res.k0 + 1} = 0", True)
    return rep


def cmd_logalg(cfg: Config, args) -> _Report:
    from .logalg import log_algebraic

    rep = _Report(cfg, "logalg")
    F = parse_poly(args.F, q=cfg.q, modulus=cfg.modulus)
    res = log_algebraic(F)
    _poly_result(rep, "L", res.LF)
    rep.result_json["k0"] = res.k0
    for name, ok in res.checks.items():
        rep.check(name, ok)
    return rep


def cmd_lseries(cfg: Config, args) -> _Report:
    rep = _Report(cfg, "lseries")
    L = L_series(args.N, args.s, args.prec, cfg.q, cfg.modulus)
    if L.exact:
        _poly_result(rep, "L", L.to_poly())
        rep.check("finite support (two vanishing guard coefficients)", True)
    else:
        text = str(L)
        rep.result_text.append(text)
        rep.result_json["L_text"] = text
        rep.result_json["coefficients"] = [to_json_obj(c) for c in L.coeffs]
        rep.result_json["prec"] = L.prec
    rep.result_json.update({"N": args.N, "s": args.s, "exact": L.exact})
    return rep


def cmd_polylog(cfg: Config, args) -> _Report:
    rep = _Report(cfg, "polylog")
    r = args.r if args.r is not None else default_r(args.N, cfg.q)
    dec = polylog_decompose(args.N, args.n, r, args.prec, cfg.q, cfg.modulus, normalization=args.normalization)
    rep.result_text.append(f"s = {dec.s}, m = {dec.m}, d = {dec.d}, r = {r}")
    for j, h in enumerate(dec.h):
        rep.result_text.append(f"h_{j} = {h}")
    rep.result_json.update({"N": args.N, "n": args.n, "r": r, "s": dec.s, "m": dec.m, "d": dec.d,
                            "h": [str(h) for h in dec.h], "normalization": args.normalization})
    detail = "" if dec.holds else f"first mismatch at z^{dec.first_mismatch}"
    rep.check(f"decomposition through z^{args.prec - 1}", dec.holds, detail)
    return rep


def cmd_norm(cfg: Config, args) -> _Report:
    rep = _Report(cfg, "norm")
    F = parse_poly(args.F, q=cfg.q, modulus=cfg.modulus)
    used = F.variables_used()
    if used and all(n.startswith("X") for n in used) or not used:
        nv, kind = sup_norm(F), "sup"
    else:
        nv, kind = gauss_norm(F), "gauss"
    rep.result_text.append(str(nv))
    rep.result_json.update({"norm": str(nv), "kind": kind,
                            "exponent": None if nv.is_zero else str(nv.exponent)})
    return rep


def cmd_selfcheck(cfg: Config, args) -> _Report:
    from .checks import run_all

    rep = _Report(cfg, "selfcheck")
    rows = run_all(cfg.q, budget=args.budget, quick=args.quick)
    for row in rows:
        rep.check(f"criterion {row.criterion}: {row.name}", row.ok, row.detail)
    passed = sum(r.ok for r in rows)
    rep.result_text.append(f"{passed}/{len(rows)} checks passed for q = {cfg.q}")
    rep.result_json["passed"] = passed
    rep.result_json["total"] = len(rows)
    return rep


def cmd_search(cfg: Config, args) -> _Report:
    from .logalg import search

    rep = _Report(cfg, "search")
    hits = list(search(cfg.q, args.nx, args.max_degree, args.theta_degree, args.limit))
    rep.result_text.append(f"{len(hits)} polynomial(s) F with L(F, Z) = F Z")
    rep.result_text.extend(f"  {F}" for F in hits)
    rep.result_json["hits"] = [str(F) for F in hits]
    return rep


COMMANDS = {
    "sigma": cmd_sigma,
    "special": cmd_special,
    "logalg": cmd_logalg,
    "lseries": cmd_lseries,
    "polylog": cmd_polylog,
    "norm": cmd_norm,
    "selfcheck": cmd_selfcheck,
    "search": cmd_search,
}


def _modulus(text: str) -> tuple:
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("modulus: comma-separated integer coefficients, constant term first")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, required=True, help="field size (prime power)")
    common.add_argument("--modulus", type=_modulus, default=None,
                        help="defining polynomial of F_q over F_p for non-prime q")
    common.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    common.add_argument("--cache-dir", default=None, help="overrides $STARK_UNITS_CACHE (default ./cache)")

    p = argparse.ArgumentParser(prog="stark-units", description="Anderson-Stark units and log-algebraicity over F_q[theta].")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sigma", parents=[common], help="the unit sigma_s(t, z)")
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--route", choices=("exp", "extract", "orbit", "both"), default="orbit")

    s = sub.add_parser("special", parents=[common], help="the special polynomial S_s")
    s.add_argument("--s", type=int, required=True)

    s = sub.add_parser("logalg", parents=[common], help="L(F, Z) for F in A[X]")
    s.add_argument("F")

    s = sub.add_parser("lseries", parents=[common], help="L(N, s, z)")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--prec", type=int, default=4)

    s = sub.add_parser("polylog", parents=[common], help="polylogarithm decomposition of L(N, n, z)")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, default=None)
    s.add_argument("--prec", type=int, default=8)
    s.add_argument("--normalization", choices=("stated", "termwise"), default="stated")

    s = sub.add_parser("norm", parents=[common], help="sup norm (K[X]) or Gauss norm (t-polynomials)")
    s.add_argument("F")

    s = sub.add_parser("selfcheck", parents=[common], help="run every acceptance check for one q")
    s.add_argument("--budget", type=float, default=None, help="seconds allowed for the orbit computations")
    s.add_argument("--quick", action="store_true", help="smaller instances")

    s = sub.add_parser("search", parents=[common], help="look for F with L(F, Z) = F Z")
    s.add_argument("--nx", type=int, default=1)
    s.add_argument("--max-degree", type=int, default=2)
    s.add_argument("--theta-degree", type=int, default=0)
    s.add_argument("--limit", type=int, default=None)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        get_field(args.q, args.modulus)
        cfg = Config(args.q, args.modulus, str(resolve_cache_dir(args.cache_dir)), args.fmt)
        rep = COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except VerificationError as exc:
        sys.stderr.write(f"verification failed: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL
    except StarkUnitsError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAIL
    return rep.emit(out)


if __name__ == "__main__":
    sys.exit(main())
