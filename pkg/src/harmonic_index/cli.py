"""Command-line front end: analyze / zeros / index / portrait / verify.

Complex flags use ``a+bi`` literals with no spaces.  Regions are
``half_width`` or ``center_re,half_width`` or ``center_re,center_im,half_width``.
Exit codes: 0 success (and consistent verify), 1 inconsistent verify,
2 parse errors, 3 numeric failures.  The environment variable
HARMONIC_INDEX_THREADS caps worker threads used during zero refinement.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import classify, curves, portrait, verify, zeros
from .errors import HarmonicIndexError, ParseError
from .expressions import format_complex, parse_complex
from .mapping import HarmonicMapping

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_PARSE = 2
EXIT_NUMERIC = 3


def _parse_region(text: str) -> zeros.SearchRegion:
    parts = text.split(",")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise ParseError(f"bad region {text!r}", 0, text) from None
    if len(values) == 1:
        return zeros.SearchRegion(0j, values[0])
    if len(values) == 2:
        return zeros.SearchRegion(complex(values[0], 0.0), values[1])
    if len(values) == 3:
        return zeros.SearchRegion(complex(values[0], values[1]), values[2])
    raise ParseError(f"bad region {text!r}: expected 1-3 comma fields", 0, text)


def _parse_window(text: str, width: int, height: int) -> portrait.Window:
    parts = text.split(",")
    if len(parts) != 4:
        raise ParseError(f"bad window {text!r}: expected re_min,re_max,im_min,im_max", 0, text)
    try:
        re_min, re_max, im_min, im_max = (float(p) for p in parts)
    except ValueError:
        raise ParseError(f"bad window {text!r}", 0, text) from None
    return portrait.Window(
        complex(re_min, im_min), complex(re_max, im_max), width, height
    )


def _emit(payload: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(payload)
            if not payload.endswith("\n"):
                fh.write("\n")
    else:
        print(payload)


def _short(z: complex) -> str:
    re = float(f"{z.real:.9g}")
    im = float(f"{z.imag:.9g}")
    # display rounding only: drop components that are pure float dust
    if abs(re) < 1e-15 * max(1.0, abs(im)):
        re = 0.0
    if abs(im) < 1e-15 * max(1.0, abs(re)):
        im = 0.0
    return format_complex(complex(re, im))


def _point_lines(points) -> str:
    rows = ["kind\tz\tclass\tindex\tmethod"]
    for p in points:
        cls = p.point_class.kind.value if p.point_class else ""
        if p.kind == "pole":
            cls = f"pole(order {p.order})"
        idx = "" if p.verdict is None else str(p.verdict.value)
        method = "" if p.verdict is None else p.verdict.method.value
        if not p.isolated:
            idx, method = "non-isolated", ""
        rows.append(f"{p.kind}\t{_short(p.location)}\t{cls}\t{idx}\t{method}")
    return "\n".join(rows)


def _mapping(args) -> HarmonicMapping:
    return HarmonicMapping.from_text(args.h)


def _cmd_analyze(args) -> int:
    f = _mapping(args)
    report: dict = {"function": f.h.to_json()}
    region = _parse_region(args.region) if args.region else None
    if region is None and not f.h.is_rational:
        region = zeros.SearchRegion(0j, 3.0)
        report["notes"] = ["no region given for non-rational h: using |Re z|,|Im z| <= 3"]
    search = zeros.find_zeros(f, region)
    pole_pts = zeros.pole_points(f) if f.h.is_rational else []
    report["zeros"] = [p.to_json() for p in search.points]
    report["poles"] = [p.to_json() for p in pole_pts]
    report["search_complete"] = search.complete
    if search.notes:
        report.setdefault("notes", []).extend(search.notes)
    audit_json = None
    if f.h.is_rational and f.h.degree >= 2:
        try:
            audit_json = verify.audit_global(f).to_json()
        except HarmonicIndexError as exc:
            report.setdefault("notes", []).append(f"global audit unavailable: {exc}")
    report["audit"] = audit_json

    if args.figure:
        window = _parse_window(args.figure_window, args.width, args.height)
        markers = [p.location for p in search.points] + [p.location for p in pole_pts]
        image = portrait.render(f, window, markers=markers)
        portrait.save_figure(image, window, args.figure, markers=markers, title=f.h.text)
        report["figure"] = args.figure

    if args.format == "json":
        _emit(json.dumps(report, indent=2), args.out)
    else:
        lines = [f"function: {f.h.text}"]
        meta = f.h.to_json()
        if meta["kind"] != "general":
            lines.append(
                f"canonical: {meta['kind']} type ({meta['type'][0]},{meta['type'][1]})"
                f" degree {meta['degree']}"
            )
        lines.append(_point_lines(list(search.points) + pole_pts))
        if audit_json is not None:
            lines.append(
                f"audit: winding {audit_json['winding']} vs index sum "
                f"{audit_json['index_sum']} -> "
                + ("consistent" if audit_json["consistent"] else "INCONSISTENT")
            )
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def _cmd_zeros(args) -> int:
    f = _mapping(args)
    region = _parse_region(args.region) if args.region else None
    search = zeros.find_zeros(f, region)
    if args.format == "json":
        payload = {
            "zeros": [p.to_json() for p in search.points],
            "complete": search.complete,
            "notes": search.notes,
        }
        _emit(json.dumps(payload, indent=2), args.out)
    else:
        _emit(_point_lines(search.points), args.out)
    return EXIT_OK


def _cmd_index(args) -> int:
    f = _mapping(args)
    z0 = parse_complex(args.at)
    verdict = classify.index(
        f,
        z0,
        series_order=args.series_order,
        tol_singular=args.tol_singular,
        zero_tol=args.tol_zero,
        eta_tol=args.tol_eta,
    )
    if args.format == "json":
        _emit(json.dumps(verdict.to_json(), indent=2), args.out)
    else:
        _emit(
            f"index at {format_complex(z0)}: {verdict.value} ({verdict.method.value})",
            args.out,
        )
    return EXIT_OK


def _cmd_portrait(args) -> int:
    if not args.out:
        raise ParseError("portrait requires --out", 0)
    f = _mapping(args)
    window = _parse_window(args.window, args.width, args.height)
    markers = [parse_complex(m) for m in args.marker or []]
    if args.mark_exceptional:
        region = zeros.SearchRegion(
            0.5 * (window.lower_left + window.upper_right),
            0.5
            * max(
                window.upper_right.real - window.lower_left.real,
                window.upper_right.imag - window.lower_left.imag,
            ),
        )
        markers += [p.location for p in zeros.find_zeros(f, region).points]
        if f.h.is_rational:
            markers += [p for p, _ in f.h.poles()]
    image = portrait.render(f, window, markers=markers)
    out = args.out
    if out.endswith(".png"):
        portrait.write_png(image, out)
    else:
        portrait.write_ppm(image, out)
    meta = {"out": out, "gray_pixels": image.gray_pixels,
            "width": image.width, "height": image.height}
    print(json.dumps(meta))
    return EXIT_OK


def _cmd_verify(args) -> int:
    f = _mapping(args)
    report = verify.audit_global(f)
    if args.format == "json":
        _emit(json.dumps(report.to_json(), indent=2), args.out)
    else:
        status = "consistent" if report.consistent else "INCONSISTENT"
        _emit(
            f"winding {report.curve_winding} vs index sum {report.index_sum}: {status}",
            args.out,
        )
    return EXIT_OK if report.consistent else EXIT_INCONSISTENT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harmonic-index",
        description="Zeros, Poincare indices and phase portraits of "
        "harmonic mappings f(z) = h(z) - conj(z).",
        epilog="HARMONIC_INDEX_THREADS caps worker threads for zero refinement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--h", "--function", dest="h", required=True,
                       help="analytic part h(z), e.g. 'z/(z^2-1)'; use "
                       "--h=-z/... for texts starting with a minus")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--out", default=None, help="write output to this file")
        p.add_argument("--tol-singular", type=float,
                       default=classify.SINGULAR_BAND_TOL,
                       help="half-width of the singularity band on |h'|")
        p.add_argument("--tol-zero", type=float, default=classify.ZERO_RESIDUAL_TOL,
                       help="|f| threshold for accepting a point as a zero")
        p.add_argument("--tol-eta", type=float, default=classify.DISPATCH_ETA_TOL,
                       help="indeterminacy band for the eta criterion")
        p.add_argument("--series-order", type=int,
                       default=classify.DEFAULT_SERIES_ORDER)

    p_analyze = sub.add_parser("analyze", help="full report: canonical form, "
                               "poles, zeros, indices, global audit")
    common(p_analyze)
    p_analyze.add_argument("--region", default=None,
                           help="half_width | center_re,half_width | "
                           "center_re,center_im,half_width")
    p_analyze.add_argument("--figure", default=None,
                           help="also render an annotated portrait (png)")
    p_analyze.add_argument("--figure-window", default="-3,3,-3,3")
    p_analyze.add_argument("--width", type=int, default=400)
    p_analyze.add_argument("--height", type=int, default=400)
    p_analyze.set_defaults(func=_cmd_analyze)

    p_zeros = sub.add_parser("zeros", help="zero list only")
    common(p_zeros)
    p_zeros.add_argument("--region", default=None)
    p_zeros.set_defaults(func=_cmd_zeros)

    p_index = sub.add_parser("index", help="index verdict at one point")
    common(p_index)
    p_index.add_argument("--at", required=True, help="point, e.g. 0 or 1+2i")
    p_index.set_defaults(func=_cmd_index)

    p_portrait = sub.add_parser("portrait", help="phase portrait to PPM/PNG")
    common(p_portrait)
    p_portrait.add_argument("--window", default="-3,3,-3,3",
                            help="re_min,re_max,im_min,im_max")
    p_portrait.add_argument("--width", type=int, default=400)
    p_portrait.add_argument("--height", type=int, default=400)
    p_portrait.add_argument("--marker", action="append",
                            help="mark this point (repeatable)")
    p_portrait.add_argument("--mark-exceptional", action="store_true",
                            help="mark all zeros/poles found in the window")
    p_portrait.set_defaults(func=_cmd_portrait)

    p_verify = sub.add_parser("verify", help="argument-principle audit; "
                              "exit 0 iff consistent")
    common(p_verify)
    p_verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except HarmonicIndexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
