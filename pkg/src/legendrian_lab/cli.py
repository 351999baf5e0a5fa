"""Command line entry point: ``llab <command> ...``.

Exit codes: 0 success, 2 usage error, 3 domain error, 4 invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

from . import augvar, barannikov, rulings, sheafrep, stokes
from .algebra import SUPPORTED_Q
from .braidfront import BraidWord, FrontDiagram, ng_resolution, parse_braid, rainbow_closure
from .dga import build_dga, check_d_squared
from .errors import DomainError, InvariantViolation

SCHEMA = "legendrian-lab/1"


def _json(obj: dict) -> str:
    return json.dumps({"schema": SCHEMA, **obj}, indent=2, sort_keys=True) + "\n"


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _qs(text: str) -> list[int]:
    try:
        qs = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad q list {text!r}") from exc
    if not qs:
        raise argparse.ArgumentTypeError("empty q list")
    bad = [q for q in qs if q not in SUPPORTED_Q]
    if bad:
        raise argparse.ArgumentTypeError(f"unsupported field order(s) {bad}; choose from {list(SUPPORTED_Q)}")
    return qs


def _map(fn: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# SVG rendering

_X0, _DX, _Y0, _DY = 30.0, 40.0, 30.0, 24.0


def _f(v: float) -> str:
    return f"{v:.2f}"


def _svg(width: float, height: float, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">'
    )
    style = (
        "<style>path{fill:none;stroke:#222;stroke-width:1.5}"
        ".eye{fill:#8ab;fill-opacity:0.35;stroke:none}.switch{fill:#c33}"
        ".cusp{fill:#222}.branch{fill:none;stroke:#236;stroke-width:1.2}"
        ".stokes-crossing{fill:#c33}</style>"
    )
    return "\n".join([head, style, *body, "</svg>"]) + "\n"


def _curve_to(x0: float, y0: float, x1: float, y1: float) -> str:
    xm = (x0 + x1) / 2
    return f"C {_f(xm)} {_f(y0)} {_f(xm)} {_f(y1)} {_f(x1)} {_f(y1)}"


def _curve(x0: float, y0: float, x1: float, y1: float) -> str:
    return f"M {_f(x0)} {_f(y0)} {_curve_to(x0, y0, x1, y1)}"


def render_front_svg(f: FrontDiagram, ruling: rulings.NormalRuling | None = None) -> str:
    if f.kind != "rainbow":
        raise DomainError("rendering is implemented for rainbow closures")
    n, word = f.n, f.word
    N = len(word)

    def X(col: float) -> float:
        return _X0 + _DX * col

    def Y(pos: float) -> float:
        return _Y0 + _DY * (pos - 1)

    # columns: left cusp j at n-j, crossing m at n+m-1 (+0.5 to center), right cusp j at n+N+j-1
    xb0, xb1 = X(n), X(n + N)
    body: list[str] = []
    if ruling is not None:
        eyes = rulings.eye_decomposition(ruling)
        for eye in eyes.eyes:
            j = eye.index
            top = [(X(n - j), (Y(n - j + 1) + Y(n + j)) / 2), (xb0, Y(n - j + 1)), (xb1, Y(n - j + 1)),
                   (X(n + N + j - 1), (Y(n - j + 1) + Y(n + eye.right_cusp)) / 2)]
            bottom = [(X(n + m), Y(n + s)) for m, s in enumerate(eye.lower_slots)]
            pts = top + bottom[::-1]
            body.append(f'<polygon class="eye" points="{" ".join(f"{_f(x)},{_f(y)}" for x, y in pts)}"/>')
    for j in range(1, n + 1):
        xl, xr = X(n - j), X(n + N + j - 1)
        ya = Y(n - j + 1)
        ylm = yrm = (ya + Y(n + j)) / 2
        body.append(f'<path class="arc" d="{_curve(xl, ylm, xb0, ya)} L {_f(xb1)} {_f(ya)} '
                    f'{_curve_to(xb1, ya, xr, yrm)}"/>')
        body.append(f'<path class="strand" d="{_curve(xl, ylm, xb0, Y(n + j))}"/>')
        body.append(f'<circle class="cusp" cx="{_f(xl)}" cy="{_f(ylm)}" r="2"/>')
        body.append(f'<circle class="cusp" cx="{_f(xr)}" cy="{_f(yrm)}" r="2"/>')
        body.append(f'<path class="strand" d="{_curve(xb1, Y(n + j), xr, yrm)}"/>')
    switches = set(ruling.crossings_of("S")) if ruling is not None else set()
    for m, i in enumerate(word, start=1):
        x0, x1 = X(n + m - 1), X(n + m)
        for k in range(1, n + 1):
            if k not in (i, i + 1):
                body.append(f'<path class="strand" d="M {_f(x0)} {_f(Y(n + k))} L {_f(x1)} {_f(Y(n + k))}"/>')
        ya, yb = Y(n + i), Y(n + i + 1)
        xm, ym = (x0 + x1) / 2, (ya + yb) / 2
        body.append(f'<g class="crossing" id="a{m}">')
        body.append(f'<path class="over" d="{_curve(x0, ya, x1, yb)}"/>')
        gap = 5.0
        body.append(f'<path class="under" d="{_curve(x0, yb, xm - gap, ym + gap * (yb - ya) / (x1 - x0))}"/>')
        body.append(f'<path class="under" d="{_curve(xm + gap, ym - gap * (yb - ya) / (x1 - x0), x1, ya)}"/>')
        body.append("</g>")
        if m in switches:
            body.append(f'<circle class="switch" cx="{_f(xm)}" cy="{_f(ym)}" r="3"/>')
    width = X(n + N + n - 1) + _X0
    height = Y(2 * n) + _Y0
    return _svg(width, height, body)


def render_stokes_svg(d: stokes.StokesDiagram, points: int = 512) -> str:
    import numpy as np

    W, H = 600.0, 300.0
    vals = d.values
    lo, hi = float(vals.min()), float(vals.max())
    span = hi - lo if hi > lo else 1.0
    idx = np.linspace(0, len(d.thetas) - 1, points).round().astype(int)
    body = []
    for b in range(vals.shape[0]):
        pts = " ".join(
            f"{_f(20 + (W - 40) * d.thetas[k] / (2 * math.pi))},{_f(H - 20 - (H - 40) * (vals[b, k] - lo) / span)}"
            for k in idx
        )
        body.append(f'<polyline class="branch" points="{pts}"/>')
    for c in d.crossings:
        x = 20 + (W - 40) * c.theta / (2 * math.pi)
        v = float(np.interp(c.theta, d.thetas, vals[c.upper]))
        y = H - 20 - (H - 40) * (v - lo) / span
        body.append(f'<circle class="stokes-crossing" cx="{_f(x)}" cy="{_f(y)}" r="3"/>')
    return _svg(W, H, body)


# ---------------------------------------------------------------------------
# Commands


def _front(args) -> FrontDiagram:
    return rainbow_closure(parse_braid(args.braid), "all_cusps")


def cmd_dga(args) -> str:
    b = parse_braid(args.braid)
    dga = build_dga(ng_resolution(rainbow_closure(b, args.mode)))
    data = dga.to_json()
    if args.format == "text":
        lines = [f"d{g['name']} = {data['differentials'][g['name']]}" for g in data["generators"]]
        return "\n".join(lines) + "\n"
    return _json({"braid": str(b), "mode": args.mode, **data})


def cmd_rulings(args) -> str:
    f = _front(args)
    rs = rulings.enumerate_rulings(f)
    if args.format == "csv":
        return _csv(["braid", "ruling", "s", "r", "d"], [[str(f.braid), r.key, r.s, r.r, r.d] for r in rs])
    return _json({"braid": str(f.braid), "count": len(rs), "rulings": [r.to_json() for r in rs]})


def cmd_aug_count(args) -> str:
    b = parse_braid(args.braid)
    f = rainbow_closure(b, "all_cusps")
    da, ds = augvar.dgas_for(b)

    if args.mode == "single" and ds is None:
        raise DomainError("single base point mode needs a connected closure")

    def one(q: int) -> dict:
        if args.mode == "single":
            return {"q": q, "aug_single": augvar.count_augmentations(ds, q, "single")}
        out = {"q": q, "aug_all_cusps": augvar.count_augmentations(da, q, "all_cusps")}
        if ds is not None:
            pc = augvar.point_counts(da, q, ds)
            pred = rulings.predicted_counts(f, q)
            out.update(aug_single=pc.aug_single, mb=pc.mb, predicted_aug=pred.aug_total, predicted_mb=pred.mb_total)
        return out

    rows = _map(one, args.q, args.threads)
    if args.format == "csv":
        keys = sorted({k for r in rows for k in r})
        return _csv(["braid", *keys], [[str(b), *[r.get(k, "") for k in keys]] for r in rows])
    return _json({"braid": str(b), "counts": rows})


def cmd_strata(args) -> str:
    b = parse_braid(args.braid)
    if not b.is_connected():
        raise DomainError(f"{b} has a disconnected closure")
    f = rainbow_closure(b, "all_cusps")
    da, _ = augvar.dgas_for(b)
    rows = []
    for q in args.q:
        observed = {k: len(v) for k, v in augvar.stratify(da, q, normalized=True).items()}
        for key, s, r, _, mb in rulings.predicted_counts(f, q).per_ruling:
            rows.append({"q": q, "ruling": key, "s": s, "r": r, "predicted": mb, "observed": observed.get(key, 0)})
    rows.sort(key=lambda r: (r["q"], r["ruling"]))
    if args.format == "csv":
        return _csv(["braid", "q", "ruling", "s", "r", "predicted", "observed"],
                    [[str(b), r["q"], r["ruling"], r["s"], r["r"], r["predicted"], r["observed"]] for r in rows])
    return _json({"braid": str(b), "strata": rows})


def cmd_dim(args) -> str:
    f = _front(args)
    top = rulings.dimension_and_top_ruling(f)
    stats = rulings.classify_and_count(top.top, f.braid)
    return _json({"braid": str(f.braid), "d": top.d, "top_ruling": top.top.key, "genus": stats.genus,
                  "index": top.index})


def cmd_dual_boundary(args) -> str:
    f = _front(args)
    rep = rulings.dual_boundary_type(f)
    return _json({"braid": str(f.braid), **rep.to_json()})


def cmd_sheaf_check(args) -> str:
    b = parse_braid(args.braid)
    if not b.is_connected():
        raise DomainError(f"{b} has a disconnected closure")
    da, _ = augvar.dgas_for(b)
    out = []
    for q in args.q:
        augs = augvar.enumerate_augmentations(da, q, "all_cusps")
        failures = []
        for e in augs:
            rep = sheafrep.validate_rep(sheafrep.phi_of_augmentation(e, b))
            if not rep.ok:
                failures.append({"augmentation": list(e.values), "failure": rep.failure})
        eq = sheafrep.equivariance_and_injectivity(da, q)
        row = {"q": q, "augmentations": len(augs), "valid": not failures, "failures": failures[:5],
               "equivariant": eq.equivariant, "injective": eq.injective, "orbit_injective": eq.orbit_injective}
        if b.n == 2:
            mb = augvar.point_counts(da, q).mb
            oracle = sheafrep.sheaf_count_oracle_n2(b, q)
            row.update(oracle=oracle, expected=(q - 1) * mb)
        out.append(row)
    ok = all(r["valid"] and r["equivariant"] and r["injective"] and r["orbit_injective"]
             and r.get("oracle", 0) == r.get("expected", 0) for r in out)
    text = _json({"braid": str(b), "ok": ok, "checks": out})
    if not ok:
        raise InvariantViolation(text)
    return text


def _formal_type(args) -> stokes.FormalType:
    text = args.formal_type
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    if text.startswith("airy:"):
        return stokes.airy_formal_type(int(text[5:]), args.eps)
    return stokes.parse_formal_type(text, args.eps)


def cmd_stokes_braid(args) -> str:
    tau = _formal_type(args)
    d = stokes.stokes_diagram(tau, args.samples)
    if args.format == "svg":
        return render_stokes_svg(d)
    orb = stokes.galois_orbits(tau)
    return _json({**d.to_json(), "orbit_sizes": list(orb.sizes), "reduced": orb.reduced,
                  "stable_under_halving": stokes.stable_under_halving(tau, args.samples)})


def cmd_newton(args) -> str:
    slopes = stokes.newton_slopes(stokes.parse_operator(args.operator))
    return _json({"operator": args.operator, "slopes": [str(s) for s in slopes]})


def cmd_render(args) -> str:
    if args.stokes:
        tau = _formal_type(argparse.Namespace(formal_type=args.braid, eps=args.eps))
        return render_stokes_svg(stokes.stokes_diagram(tau, args.samples))
    f = _front(args)
    rho = None
    if args.ruling:
        matches = [r for r in rulings.enumerate_rulings(f) if r.key == args.ruling]
        if not matches:
            raise DomainError(f"{f.braid} has no normal ruling with key {args.ruling}")
        rho = matches[0]
    return render_front_svg(f, rho)


def verify(b: BraidWord, qs: Sequence[int], threads: int = 1) -> dict:
    """Every cross-module check on one braid; returns a report with an overall flag."""
    checks: list[dict] = []

    def check(name: str, ok: bool, **extra) -> None:
        checks.append({"check": name, "ok": bool(ok), **extra})

    f = rainbow_closure(b, "all_cusps")
    da, ds = augvar.dgas_for(b)
    rep = check_d_squared(da)
    check("d_squared_all_cusps", rep.ok and rep.degree_ok and rep.composable_ok)
    if ds is not None:
        rep = check_d_squared(ds)
        check("d_squared_single", rep.ok and rep.degree_ok)
    rs = rulings.enumerate_rulings(f)
    check("rulings_s_plus_2r_constant", len({r.s + 2 * r.r for r in rs}) == 1, count=len(rs))
    mb_counts = {}
    if b.is_connected():
        top = rulings.dimension_and_top_ruling(f)
        stats = rulings.classify_and_count(top.top, b)
        check("dimension_even", top.d == 2 * stats.genus, d=top.d)
        for r in rs:
            rulings.classify_and_count(r, b)
        if top.d:
            check("dual_boundary_sphere", rulings.dual_boundary_type(f).dual_boundary == f"S^{top.d - 1}")

        def per_q(q: int) -> tuple[list[dict], int, int]:
            out = []
            pc = augvar.point_counts(da, q, ds)
            pred = rulings.predicted_counts(f, q)
            out.append({"check": f"aug_count_q{q}", "ok": pc.aug_all_cusps == pred.aug_total,
                        "observed": pc.aug_all_cusps, "predicted": pred.aug_total})
            out.append({"check": f"mb_count_q{q}", "ok": pc.mb == pred.mb_total,
                        "observed": pc.mb, "predicted": pred.mb_total})
            observed = {k: len(v) for k, v in augvar.stratify(da, q, normalized=True).items()}
            expected = {key: mb for key, _, _, _, mb in pred.per_ruling if mb}
            out.append({"check": f"strata_q{q}", "ok": observed == expected})
            census = barannikov.r_coordinate_census(da, q)
            out.append({"check": f"r_bijection_q{q}", "ok": all(c.bijective for c in census)})
            if q <= 3:
                eq = sheafrep.equivariance_and_injectivity(da, q)
                out.append({"check": f"sheaf_equivariance_q{q}", "ok": eq.ok})
                valid = all(sheafrep.validate_rep(sheafrep.phi_of_augmentation(e, b)).ok
                            for e in augvar.enumerate_augmentations(da, q, "all_cusps"))
                out.append({"check": f"sheaf_valid_q{q}", "ok": valid})
                if b.n == 2:
                    oracle = sheafrep.sheaf_count_oracle_n2(b, q)
                    out.append({"check": f"sheaf_oracle_q{q}", "ok": oracle == (q - 1) * pc.mb, "oracle": oracle})
            return out, q, pc.mb

        for rows, q, mb in _map(per_q, qs, threads):
            checks.extend(rows)
            mb_counts[str(q)] = mb
    else:
        for q in qs:
            total = augvar.count_augmentations(da, q, "all_cusps")
            pred = sum((q - 1) ** r.s * q ** r.r for r in rs)
            check(f"aug_count_q{q}", total == pred, observed=total, predicted=pred)
    return {"braid": str(b), "ok": all(c["ok"] for c in checks), "checks": checks, "mb": mb_counts}


def cmd_verify(args) -> str:
    report = verify(parse_braid(args.braid), args.q, args.threads)
    text = _json(report)
    if not report["ok"]:
        raise InvariantViolation(text)
    return text


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="llab", description="Legendrian braid closures: DGAs, augmentations, rulings.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn, arg: str = "braid", formats=("json",), q: str | None = None):
        sp = sub.add_parser(name)
        sp.add_argument(arg)
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("--threads", type=int, default=1)
        if q is not None:
            sp.add_argument("--q", type=_qs, default=_qs(q))
        sp.set_defaults(func=fn)
        return sp

    add("dga", cmd_dga, formats=("json", "text")).add_argument(
        "--mode", choices=("all_cusps", "single"), default="all_cusps")
    add("rulings", cmd_rulings, formats=("json", "csv"))
    add("aug-count", cmd_aug_count, formats=("json", "csv"), q="2,3").add_argument(
        "--mode", choices=("all_cusps", "single"), default="all_cusps")
    add("strata", cmd_strata, formats=("json", "csv"), q="3")
    add("dim", cmd_dim)
    add("dual-boundary", cmd_dual_boundary)
    add("sheaf-check", cmd_sheaf_check, q="2,3")
    for sp in (add("stokes-braid", cmd_stokes_braid, arg="formal_type", formats=("json", "svg")),):
        sp.add_argument("--eps", type=float, default=stokes.DEFAULT_EPS)
        sp.add_argument("--samples", type=int, default=stokes.SAMPLES)
    add("newton", cmd_newton, arg="operator")
    r = add("render", cmd_render, formats=("svg",))
    r.add_argument("--ruling", default=None, help="switch bit string of a normal ruling to overlay")
    r.add_argument("--stokes", action="store_true", help="treat the argument as a formal type")
    r.add_argument("--eps", type=float, default=stokes.DEFAULT_EPS)
    r.add_argument("--samples", type=int, default=stokes.SAMPLES)
    add("verify", cmd_verify, q="2,3")
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out.write(args.func(args))
    except InvariantViolation as exc:
        err.write(f"invariant violation: {exc}\n")
        return 4
    except DomainError as exc:
        err.write(f"domain error: {exc}\n")
        return 3
    return 0


def main() -> None:
    sys.exit(run())
