"""Batch command-line front end.

Every subcommand prints CSV (header row, floats at 12 significant digits)
to stdout or --output, with run metadata in leading '# key=value' comment
lines; --plot additionally renders a matplotlib figure of the same data to
a file. Exit codes: 0 success, 1 validation/parse error, 2 numerical
non-convergence or unresolved bracket.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import plotting
from .effects import (
    diagonal_effect,
    glb_with_rank1,
    infimum_with_complement,
    operator_norm,
    validate_effect,
)
from .errors import DepthInsufficient, PovmLabError, QuadratureFailure
from .io import load_matrix_csv, load_povm_dir
from .measures import (
    BorelDescriptor,
    CyclicCovarianceModel,
    FatCantorModel,
    cantor_effect_norm,
    cantor_norm1_on_opens_check,
    covariant_null_check,
)
from .phase import (
    ArcSet,
    canonical_kernel,
    canonical_norm_scan,
    canonical_spectrum_fill,
    elementary_kernel,
    phase_effect,
    _parse_angle,
)
from .phase_space import (
    PolarRegion,
    RealRegion,
    angle_margin,
    angle_margin_norm1_probe,
    cartesian_margin_effect,
    cartesian_symbol_sup,
    number_margin,
    phase_space_effect,
)
from .povm import (
    has_norm1_property,
    is_regular_povm,
    norm1_implies_regular_check,
    partition_povm,
    variance_probe,
)
from .tcs import TCSParams, angle_density, marginal_variance, uncertainty_product


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # map argparse failures onto exit code 1
        raise CliError(message)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        x = float(x)
    if isinstance(x, float):
        return f"{x:.12g}"
    text = str(x)
    if "," in text or '"' in text:
        text = '"' + text.replace('"', '""') + '"'
    return text


def _resolve_out(path: Optional[str]) -> Optional[str]:
    if path is None:
        return None
    outdir = os.environ.get("POVMLAB_OUTDIR")
    if outdir and not os.path.isabs(path):
        return os.path.join(outdir, path)
    return path


def _emit(args, metadata: dict, header: Sequence[str], rows) -> None:
    lines = [f"# {k}={_fmt(v)}" for k, v in metadata.items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(c) for c in row))
    text = "\n".join(lines) + "\n"
    out = _resolve_out(getattr(args, "output", None))
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_ints(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _parse_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _parse_complex_list(text: str) -> list[complex]:
    return [complex(tok.replace(" ", "")) for tok in text.split(",") if tok.strip()]


def _kernel_from_args(args):
    if args.kind == "canonical":
        return canonical_kernel()
    return elementary_kernel(args.s, args.t, complex(args.z))


def _add_common(sub, plot: bool = False):
    sub.add_argument("--output", help="write CSV here instead of stdout")
    sub.add_argument("--seed", type=int, default=0, help="seed for any randomized sweep")
    if plot:
        sub.add_argument("--plot", help="also render a figure (PNG/PDF) to this path")


# ---------------------------------------------------------------- subcommands


def _cmd_phase_norms(args) -> int:
    X = ArcSet.parse(args.arc, args.pi_units)
    dims = _parse_ints(args.dims)
    meta = {"seed": args.seed, "kind": args.kind, "arc": args.arc, "dims": args.dims}
    if args.kind == "canonical":
        norms = canonical_norm_scan(X, dims)
    else:
        kern = _kernel_from_args(args)
        meta.update({"s": args.s, "t": args.t, "z": args.z})
        norms = [operator_norm(phase_effect(kern, X, d)) for d in dims]
    _emit(args, meta, ["d", "norm"], zip(dims, norms))
    if args.plot:
        plotting.save_line_figure(
            _resolve_out(args.plot), dims, {"norm": norms}, "truncation d",
            "operator norm", title=f"{args.kind} phase effect norm, X={args.arc}",
            hlines=[1.0],
        )
    return 0


def _cmd_phase_spectrum(args) -> int:
    X = ArcSet.parse(args.arc, args.pi_units)
    meta = {"seed": args.seed, "kind": args.kind, "arc": args.arc, "d": args.d}
    if args.kind == "canonical":
        fill = canonical_spectrum_fill(X, args.d)
        vals = fill.eigenvalues
        meta.update({
            "min_eigenvalue": fill.min_eigenvalue,
            "max_eigenvalue": fill.max_eigenvalue,
            "max_gap": fill.max_gap,
        })
    else:
        kern = _kernel_from_args(args)
        meta.update({"s": args.s, "t": args.t, "z": args.z})
        vals = phase_effect(kern, X, args.d).eigenvalues
    _emit(args, meta, ["index", "eigenvalue"], enumerate(vals))
    if args.plot:
        plotting.save_spectrum_figure(
            _resolve_out(args.plot), list(vals),
            title=f"{args.kind} phase spectrum, X={args.arc}, d={args.d}",
        )
    return 0


def _effect_from_args(args):
    if args.diag:
        return diagonal_effect(_parse_floats(args.diag))
    if args.matrix:
        return validate_effect(load_matrix_csv(args.matrix))
    raise CliError("need --diag or --matrix")


def _cmd_infimum(args) -> int:
    A = _effect_from_args(args)
    inf = infimum_with_complement(A)
    meta = {"seed": args.seed, "dim": A.dim}
    if inf is None:
        meta["infimum"] = "does not exist"
        _emit(args, meta, ["index", "eigenvalue"], [])
    else:
        meta["infimum"] = "exists"
        _emit(args, meta, ["index", "eigenvalue"], enumerate(inf.eigenvalues))
    return 0


def _cmd_glb_rank1(args) -> int:
    A = _effect_from_args(args)
    phi = np.asarray(_parse_complex_list(args.phi))
    phi = phi / np.linalg.norm(phi)
    lam, _bound = glb_with_rank1(A, phi)
    _emit(args, {"seed": args.seed, "dim": A.dim}, ["lambda"], [(lam,)])
    return 0


def _cmd_povm_check(args) -> int:
    P = load_povm_dir(args.povm)
    rows = [(
        has_norm1_property(P),
        is_regular_povm(P),
        norm1_implies_regular_check(P),
    )]
    _emit(
        args,
        {"seed": args.seed, "outcomes": P.n_outcomes, "dim": P.dim},
        ["norm1", "regular", "norm1_implies_regular"],
        rows,
    )
    return 0


def _cmd_margins(args) -> int:
    meta = {"seed": args.seed, "kind": args.kind, "region": args.region, "d": args.d}
    if args.kind == "number":
        lo, _, hi = args.region.partition(":")
        r_lo = float(lo)
        r_hi = float("inf") if hi.strip().lower() in ("inf", "+inf") else float(hi)
        eff = number_margin(r_lo, r_hi, args.d)
        bound = r_hi * r_hi if (r_lo == 0.0 and np.isfinite(r_hi)) else 1.0
    elif args.kind == "angle":
        eff = angle_margin(ArcSet.parse(args.region, args.pi_units), args.d)
        bound = 1.0
    elif args.kind == "cartesian":
        X = RealRegion.parse(args.region)
        eff = cartesian_margin_effect(X, args.d)
        bound = cartesian_symbol_sup(X)
    else:  # polar region of the full observable
        Z = PolarRegion.parse(args.region, args.pi_units)
        eff = phase_space_effect(Z, args.d)
        bound = min(1.0, Z.area / np.pi)
    _emit(args, meta, ["kind", "d", "norm", "bound"],
          [(args.kind, args.d, operator_norm(eff), bound)])
    return 0


def _cmd_angle_probe(args) -> int:
    X = ArcSet.parse(args.arc, args.pi_units)
    theta0 = _parse_angle(args.theta0, args.pi_units)
    amps = _parse_floats(args.amplitudes)
    res = angle_margin_norm1_probe(X, theta0, amps, d=args.d)
    meta = {"seed": args.seed, "arc": args.arc, "theta0": theta0, "d": res.truncation}
    rows = list(zip(res.amplitudes, [res.truncation] * len(amps), res.probabilities))
    _emit(args, meta, ["s", "d", "probability"], rows)
    if args.plot:
        plotting.save_line_figure(
            _resolve_out(args.plot), res.amplitudes,
            {"probability": res.probabilities}, "coherent amplitude s",
            "probability", title=f"angle margin probe, Theta={args.arc}",
            hlines=[1.0],
        )
    return 0


def _cmd_tcs_table(args) -> int:
    beta = complex(args.beta.replace(" ", ""))
    rows = []
    for w in _parse_complex_list(args.w):
        p = TCSParams.from_w(w, beta)
        rows.append((
            p.beta.real, p.beta.imag, p.mu.real, p.mu.imag, p.nu.real, p.nu.imag,
            marginal_variance(p, "x"), marginal_variance(p, "y"), uncertainty_product(p),
        ))
    _emit(
        args,
        {"seed": args.seed, "beta": args.beta, "w": args.w},
        ["re_beta", "im_beta", "re_mu", "im_mu", "re_nu", "im_nu", "var_x", "var_y", "product"],
        rows,
    )
    return 0


def _tcs_from_args(args) -> TCSParams:
    beta = complex(args.beta.replace(" ", ""))
    if args.w is not None:
        return TCSParams.from_w(complex(args.w.replace(" ", "")), beta)
    mu = complex(args.mu.replace(" ", ""))
    nu = complex(args.nu.replace(" ", ""))
    return TCSParams(beta, mu, nu)


def _cmd_angle_density(args) -> int:
    p = _tcs_from_args(args)
    thetas = np.linspace(0.0, 2.0 * np.pi, args.n_theta, endpoint=False)
    g = angle_density(p, thetas)
    meta = {
        "seed": args.seed,
        "beta": _fmt(p.beta.real) + "+" + _fmt(p.beta.imag) + "j",
        "mu": _fmt(p.mu.real) + "+" + _fmt(p.mu.imag) + "j",
        "nu": _fmt(p.nu.real) + "+" + _fmt(p.nu.imag) + "j",
        "total_mass": float(np.mean(g) * 2.0 * np.pi),
    }
    _emit(args, meta, ["theta", "g"], zip(thetas, g))
    if args.plot:
        plotting.save_line_figure(
            _resolve_out(args.plot), thetas, {"g": g}, "theta", "angle density g",
        )
    return 0


def _cantor_descriptor(text: str) -> BorelDescriptor:
    text = text.strip()
    if text == "cantor":
        return BorelDescriptor.cantor_set()
    if text == "full":
        return BorelDescriptor.interval_union([(0.0, 1.0)])
    if text.startswith("minus-cantor:"):
        body = text[len("minus-cantor:"):]
        return BorelDescriptor.minus_cantor(_interval_pairs(body))
    if text.startswith("intervals:"):
        text = text[len("intervals:"):]
    return BorelDescriptor.interval_union(_interval_pairs(text))


def _interval_pairs(text: str) -> list[tuple[float, float]]:
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        lo, sep, hi = chunk.partition(":")
        if not sep:
            raise CliError(f"interval {chunk!r} must look like 'a:b'")
        pairs.append((float(lo), float(hi)))
    return pairs


def _cmd_cantor(args) -> int:
    model = FatCantorModel(args.depth)
    meta = {
        "seed": args.seed,
        "depth": args.depth,
        "measure_ck": float(model.measure_ck),
        "measure_limit": float(model.measure_limit),
    }
    if args.set == "random-opens":
        rng = np.random.default_rng(args.seed)
        ok = cantor_norm1_on_opens_check(model, args.samples, rng)
        meta["samples"] = args.samples
        _emit(args, meta, ["set", "result"], [("random-opens", "pass" if ok else "fail")])
        return 0
    desc = _cantor_descriptor(args.set)
    norm = cantor_effect_norm(model, desc)
    _emit(args, meta, ["set", "norm"], [(args.set, float(norm))])
    return 0


def _cmd_covariance_check(args) -> int:
    model = CyclicCovarianceModel.discrete_phase(args.N, args.d)
    subset = _parse_ints(args.subset) if args.subset else []
    eff = model.effect(subset)
    defect = max(model.covariance_defect(j) for j in range(args.N))
    rows = [(args.subset or "(empty)", operator_norm(eff), covariant_null_check(model, subset))]
    _emit(
        args,
        {"seed": args.seed, "N": args.N, "d": model.d, "covariance_defect": defect},
        ["subset", "norm", "null_iff_empty"],
        rows,
    )
    return 0


def _variance_demo_povm(alpha: float):
    values = [-alpha, -alpha / 2.0, 0.0, alpha / 2.0, alpha]
    effects = [diagonal_effect([1.0 if i == j else 0.0 for i in range(5)]) for j in range(5)]
    return partition_povm(effects, values=values)


def _cmd_variance_demo(args) -> int:
    P = _variance_demo_povm(args.alpha)
    etas = _parse_floats(args.etas)
    rows = []
    for eta in etas:
        probe = variance_probe(P, eta)
        rows.append((eta, probe.variance, probe.bound))
    _emit(args, {"seed": args.seed, "alpha": args.alpha}, ["eta", "variance", "bound"], rows)
    if args.plot:
        plotting.save_line_figure(
            _resolve_out(args.plot), etas,
            {"variance": [r[1] for r in rows], "bound": [r[2] for r in rows]},
            "eta", "variance", logx=True, logy=True,
        )
    return 0


# ------------------------------------------------------------------- parser


def _sub(subs, name: str, help_text: str):
    return subs.add_parser(name, help=help_text, description=help_text)


def build_parser() -> _Parser:
    parser = _Parser(prog="povmlab", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = _sub(subs, "phase-norms", "drives phase.canonical_norm_scan / phase.phase_effect")
    p.add_argument("--kind", choices=["canonical", "elementary"], default="canonical")
    p.add_argument("--arc", required=True, help="arc set 'a:b,c:d'; endpoints may use pi")
    p.add_argument("--pi-units", action="store_true", help="interpret plain numbers as multiples of pi")
    p.add_argument("--dims", required=True, help="comma-separated truncations")
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--z", default="0.5", help="elementary overlap (complex)")
    _add_common(p, plot=True)
    p.set_defaults(func=_cmd_phase_norms)

    p = _sub(subs, "phase-spectrum", "drives phase.canonical_spectrum_fill / phase.phase_effect")
    p.add_argument("--kind", choices=["canonical", "elementary"], default="canonical")
    p.add_argument("--arc", required=True)
    p.add_argument("--pi-units", action="store_true")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--z", default="0.5")
    _add_common(p, plot=True)
    p.set_defaults(func=_cmd_phase_spectrum)

    p = _sub(subs, "infimum", "drives effects.infimum_with_complement")
    p.add_argument("--diag", help="diagonal effect, e.g. '0.3,0.8'")
    p.add_argument("--matrix", help="matrix CSV (re,im pairs)")
    _add_common(p)
    p.set_defaults(func=_cmd_infimum)

    p = _sub(subs, "glb-rank1", "drives effects.glb_with_rank1")
    p.add_argument("--diag")
    p.add_argument("--matrix")
    p.add_argument("--phi", required=True, help="vector components, e.g. '1,0' or '0.7,0.7j'")
    _add_common(p)
    p.set_defaults(func=_cmd_glb_rank1)

    p = _sub(subs, "povm-check", "drives povm.has_norm1_property / povm.is_regular_povm")
    p.add_argument("--povm", required=True, help="POVM directory (manifest.txt + matrix CSVs)")
    _add_common(p)
    p.set_defaults(func=_cmd_povm_check)

    p = _sub(subs, "margins", "drives phase_space margins (number/angle/cartesian/polar)")
    p.add_argument("--kind", choices=["number", "angle", "cartesian", "polar"], required=True)
    p.add_argument("--region", required=True,
                   help="number 'r1:r2'; angle 'a:b,...'; cartesian 'a:b,...'; polar 'r1:r2@a:b'")
    p.add_argument("--pi-units", action="store_true")
    p.add_argument("--d", type=int, default=32)
    _add_common(p)
    p.set_defaults(func=_cmd_margins)

    p = _sub(subs, "angle-probe", "drives phase_space.angle_margin_norm1_probe")
    p.add_argument("--arc", required=True)
    p.add_argument("--pi-units", action="store_true")
    p.add_argument("--theta0", required=True, help="probe angle (may use pi)")
    p.add_argument("--amplitudes", required=True, help="coherent amplitudes, e.g. '1,2,4,8'")
    p.add_argument("--d", type=int, default=None)
    _add_common(p, plot=True)
    p.set_defaults(func=_cmd_angle_probe)

    p = _sub(subs, "tcs-table", "drives tcs.marginal_variance / tcs.uncertainty_product")
    p.add_argument("--w", required=True, help="comma list of squeeze ratios nu/mu (complex)")
    p.add_argument("--beta", default="0", help="displacement eigenvalue beta")
    _add_common(p)
    p.set_defaults(func=_cmd_tcs_table)

    p = _sub(subs, "angle-density", "drives tcs.angle_density")
    p.add_argument("--w", default=None)
    p.add_argument("--mu", default="1")
    p.add_argument("--nu", default="0")
    p.add_argument("--beta", default="0")
    p.add_argument("--n-theta", type=int, default=720)
    _add_common(p, plot=True)
    p.set_defaults(func=_cmd_angle_density)

    p = _sub(subs, "cantor", "drives measures.cantor_effect_norm")
    p.add_argument("--depth", type=int, default=24)
    p.add_argument("--set", required=True,
                   help="'cantor', 'full', 'a:b,c:d', 'minus-cantor:a:b', or 'random-opens'")
    p.add_argument("--samples", type=int, default=100)
    _add_common(p)
    p.set_defaults(func=_cmd_cantor)

    p = _sub(subs, "covariance-check", "drives measures.covariant_null_check")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--subset", default="", help="comma list of outcomes, e.g. '0,2,5'")
    _add_common(p)
    p.set_defaults(func=_cmd_covariance_check)

    p = _sub(subs, "variance-demo", "drives povm.variance_probe")
    p.add_argument("--alpha", type=float, default=2.0, help="support radius of the outcome values")
    p.add_argument("--etas", default="0.1,0.01,0.001", help="window half-widths")
    _add_common(p, plot=True)
    p.set_defaults(func=_cmd_variance_demo)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (QuadratureFailure, DepthInsufficient, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (PovmLabError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
